#include <doctest.h>

#include <cmath>
#include <vector>

#include "kolmonet/calculus.hpp"
#include "kolmonet/errors.hpp"
#include "kolmonet/reference.hpp"
#include "kolmonet/sde.hpp"

using namespace kolmonet;

TEST_CASE("uniform grid and location") {
  const UniformGrid g(1.0, 4);
  CHECK(g.points() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(locate(g, 0.0) == std::pair<std::size_t, double>{0, 0.0});
  CHECK(locate(g, 0.375) == std::pair<std::size_t, double>{1, 0.5});
  CHECK(locate(g, 1.0) == std::pair<std::size_t, double>{3, 1.0});
  CHECK_THROWS(UniformGrid(1.0, 0));
}

TEST_CASE("diffusion coefficient from covariance") {
  Eigen::MatrixXd a(2, 2);
  a << 2.0, 0.5, 0.5, 1.0;
  const Eigen::MatrixXd b = diffusion_from_covariance(a);
  CHECK((b * b.transpose() - 2.0 * a).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((b - b.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::MatrixXd singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  const Eigen::MatrixXd bs = diffusion_from_covariance(singular);
  CHECK((bs * bs.transpose() - 2.0 * singular).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::MatrixXd negative(1, 1);
  negative << -1.0;
  CHECK_THROWS_AS(diffusion_from_covariance(negative), DomainError);
}

TEST_CASE("Brownian increments have the right law") {
  Eigen::MatrixXd b(2, 2);
  b << 1.0, 0.0, 0.6, 0.8;
  const std::size_t N = 4, M = 20000;
  const double T = 2.0, h = T / N;
  const BrownianGrid noise = sample_brownian(5, N, M, 2, T, b);
  const Eigen::MatrixXd cov = h * b * b.transpose();
  for (std::size_t n = 0; n < N; ++n) {
    double m0 = 0, m1 = 0, s00 = 0, s01 = 0, s11 = 0;
    for (std::size_t m = 0; m < M; ++m) {
      const auto inc = noise.increment(m, n);
      m0 += inc[0];
      m1 += inc[1];
      s00 += inc[0] * inc[0];
      s01 += inc[0] * inc[1];
      s11 += inc[1] * inc[1];
    }
    const double Md = static_cast<double>(M);
    CHECK(std::abs(m0 / Md) <= 4.0 * std::sqrt(cov(0, 0) / Md));
    CHECK(std::abs(m1 / Md) <= 4.0 * std::sqrt(cov(1, 1) / Md));
    CHECK(s00 / Md == doctest::Approx(cov(0, 0)).epsilon(0.05));
    CHECK(s01 / Md == doctest::Approx(cov(0, 1)).epsilon(0.05));
    CHECK(s11 / Md == doctest::Approx(cov(1, 1)).epsilon(0.05));
  }
}

TEST_CASE("Brownian paths are reproducible and independent of the path count") {
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(3, 3);
  const BrownianGrid small = sample_brownian(9, 6, 4, 3, 1.0, b);
  const BrownianGrid large = sample_brownian(9, 6, 50, 3, 1.0, b);
  const BrownianGrid again = sample_brownian(9, 6, 50, 3, 1.0, b);
  std::vector<double> direct(18);
  for (std::size_t m = 0; m < 4; ++m) {
    const auto a = small.path(m), c = large.path(m);
    CHECK(std::vector<double>(a.begin(), a.end()) == std::vector<double>(c.begin(), c.end()));
    brownian_path(9, m, 6, 1.0, b, direct);
    CHECK(direct == std::vector<double>(a.begin(), a.end()));
  }
  for (std::size_t m = 0; m < 50; ++m) {
    const auto a = large.path(m), c = again.path(m);
    CHECK(std::vector<double>(a.begin(), a.end()) == std::vector<double>(c.begin(), c.end()));
  }
  const BrownianGrid other = sample_brownian(10, 6, 4, 3, 1.0, b);
  CHECK(other.path(0)[0] != small.path(0)[0]);
}

TEST_CASE("Euler recursion and interpolation") {
  const UniformGrid g(1.0, 4);
  const std::vector<double> inc{0.1, -0.2, 0.3, 0.05};
  const VectorField drift = [](std::span<const double> y, std::span<double> out) { out[0] = -y[0]; };
  const std::vector<double> x{1.0};
  const SchemeState s = euler_grid(x, drift, g, inc);
  double y = 1.0;
  std::vector<double> want{y};
  for (double w : inc) {
    y = y + 0.25 * (-y) + w;
    want.push_back(y);
  }
  CHECK(s.values == want);
  for (std::size_t n = 0; n <= 4; ++n) CHECK(interpolate(s, g.time(n))[0] == want[n]);
  CHECK(interpolate(s, 0.125)[0] == doctest::Approx(0.5 * (want[0] + want[1])));
  CHECK(interpolate(s, 0.8)[0] == doctest::Approx(want[3] + 0.2 * (want[4] - want[3])));

  // With zero drift the scheme is the sum of increments.
  const VectorField zero = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
  const SchemeState z = euler_grid(x, zero, g, inc);
  CHECK(z.at(4)[0] == doctest::Approx(1.0 + 0.1 - 0.2 + 0.3 + 0.05));
}

TEST_CASE("Feynman-Kac estimates") {
  const std::vector<double> x{0.3, -0.4};
  // A = 0: the deterministic Euler value.
  const VectorField shrink = [](std::span<const double> y, std::span<double> out) {
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = -y[i];
  };
  const ScalarField sum = [](std::span<const double> y) { return y[0] + y[1]; };
  const McEstimate det =
      feynman_kac(sum, shrink, Eigen::MatrixXd::Zero(2, 2), 1.0, x, 10, 8, 1);
  CHECK(det.estimate == doctest::Approx(-0.1 * std::pow(1.0 - 1.0 / 8.0, 8)).epsilon(1e-12));
  CHECK(det.std_error <= 1e-15);

  // Heat equation with a ReLU datum in d = 1: u = x Phi(x/s) + s phi(x/s), s = sqrt(2t).
  const ScalarField relu = [](std::span<const double> y) { return std::max(y[0], 0.0); };
  const VectorField none = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
  for (double x0 : {-1.0, 0.0, 0.7}) {
    const double t = 0.5, s = std::sqrt(2.0 * t);
    const double want = x0 * normal_cdf(x0 / s) + s * normal_pdf(x0 / s);
    const std::vector<double> xv{x0};
    const McEstimate e = feynman_kac(relu, none, Eigen::MatrixXd::Identity(1, 1), t, xv, 40000, 1, 3);
    CHECK(std::abs(e.estimate - want) <= 4.0 * e.std_error);
  }

  // OU with a linear datum: E sum Y_N = (1 - h)^N sum x.
  const McEstimate ou = feynman_kac(sum, shrink, 0.5 * Eigen::MatrixXd::Identity(2, 2), 1.0, x,
                                    40000, 16, 4);
  CHECK(std::abs(ou.estimate + 0.1 * std::pow(1.0 - 1.0 / 16.0, 16)) <= 4.0 * ou.std_error);
}

TEST_CASE("Lp error estimates") {
  const UniformSpaceTimeMeasure mu(1.0, -1.0, 1.0, 2);
  const SpaceTimeField t_field = [](double t, std::span<const double>) { return t; };
  const SpaceTimeField zero = [](double, std::span<const double>) { return 0.0; };
  const LpEstimate e = lp_error_estimate(t_field, zero, mu, 2.0, 100000, 1);
  CHECK(std::abs(e.value - 1.0 / std::sqrt(3.0)) <= 4.0 * e.std_error);
  CHECK(lp_error(t_field, t_field, mu, 2.0, 1000, 1) == 0.0);
  CHECK(lp_error(t_field, zero, mu, 2.0, 1000, 7) == lp_error(t_field, zero, mu, 2.0, 1000, 7));

  // Samples stay inside the box.
  std::vector<double> x(2);
  double t = 0.0;
  for (std::size_t k = 0; k < 1000; ++k) {
    mu.sample(3, k, t, x);
    CHECK((t >= 0.0 && t <= 1.0));
    CHECK((x[0] >= -1.0 && x[0] <= 1.0 && x[1] >= -1.0 && x[1] <= 1.0));
  }
  // E |x_1|^4 = 1/5 on the unit box.
  const SpaceTimeField x1 = [](double, std::span<const double> y) { return y[0]; };
  const LpEstimate q = lp_error_estimate(x1, zero, mu, 4.0, 100000, 2);
  CHECK(std::abs(q.value - std::pow(0.2, 0.25)) <= 4.0 * q.std_error);
}

TEST_CASE("mean and standard error") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const McEstimate e = mean_and_error(v);
  CHECK(e.estimate == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}
