#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "kolmonet/builder.hpp"
#include "kolmonet/calculus.hpp"
#include "kolmonet/errors.hpp"
#include "kolmonet/reference.hpp"
#include "kolmonet/rng.hpp"
#include "kolmonet/serialize.hpp"

using namespace kolmonet;

namespace {

Network zero_drift(std::size_t d) { return affine_net(WeightMatrix(d, d), std::vector<double>(d, 0.0)); }

std::vector<double> tx(double t, std::span<const double> x) {
  std::vector<double> v{t};
  v.insert(v.end(), x.begin(), x.end());
  return v;
}

}  // namespace

TEST_CASE("one step with zero drift and zero noise is the identity in x") {
  const std::vector<double> zero{0.0, 0.0};
  const EulerNet e = build_euler_net(zero_drift(2), zero, UniformGrid(1.0, 1), 0.5);
  for (double t : {0.0, 0.3, 1.0}) {
    const std::vector<double> x{0.7, -1.25};
    CHECK(realize(e.net, tx(t, x)) == x);
  }
}

TEST_CASE("hand-computed Euler path in one dimension") {
  // Drift -y, h = 1/2, y = (0.5, -0.25), x = 1: Y_1 = 1 - 0.5 + 0.5 = 1, Y_2 = 1 - 0.5 - 0.25 = 0.25.
  const Network drift = scale_output(identity_net(1), -1.0);
  const std::vector<double> inc{0.5, -0.25};
  const double delta = 0x1p-10;
  const EulerNet e = build_euler_net(drift, inc, UniformGrid(1.0, 2), delta);
  const std::vector<double> x{1.0};
  const double want[][2] = {{0.0, 1.0}, {0.25, 1.0}, {0.5, 1.0}, {0.75, 0.625}, {1.0, 0.25}};
  for (const auto& [t, y] : want) {
    CHECK(std::abs(realize(e.net, tx(t, x))[0] - y) <= 4.0 * e.product_accuracy * 2.0);
  }
  CHECK(e.product_accuracy == doctest::Approx(delta / 2.0));
  CHECK(e.clip_range >= 2.0);
}

TEST_CASE("emulation agrees with the scheme at random points") {
  for (std::size_t d : {1u, 2u}) {
    const TestProblem tp = ou_linear_problem(d);
    const BrownianGrid noise =
        sample_brownian(31, 4, 3, d, 1.0, diffusion_from_covariance(tp.problem.a));
    for (std::size_t m = 0; m < noise.paths(); ++m) {
      const EulerNet e = build_euler_net(tp.problem.drift, noise.path(m), noise.grid(), 0x1p-8);
      CounterStream s(32, m, d, StreamTag::kTest);
      for (int i = 0; i < 200; ++i) {
        const double t = s.uniform();
        std::vector<double> x(d);
        for (double& v : x) v = 2.0 * s.uniform() - 1.0;
        const SchemeState st = euler_grid(x, network_field(tp.problem.drift), noise, m);
        const auto want = interpolate(st, t);
        const auto got = realize(e.net, tx(t, x));
        double err = 0.0, scale = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
          err = std::max(err, std::abs(got[j] - want[j]));
          for (std::size_t n = 0; n <= 4; ++n) scale = std::max(scale, std::abs(st.at(n)[j]));
        }
        // Each coordinate is a sum of N products accurate to delta / (N d).
        CHECK(err <= 0x1p-8 * scale);
      }
    }
  }
}

TEST_CASE("the emulated path does not look ahead") {
  const TestProblem tp = ou_linear_problem(1);
  std::vector<double> inc{0.3, -0.1, 0.2, 0.4};
  const UniformGrid grid(1.0, 4);
  const EulerNet base = build_euler_net(tp.problem.drift, inc, grid, 0x1p-6);
  inc[2] = -5.0;
  inc[3] = 7.0;
  const EulerNet changed = build_euler_net(tp.problem.drift, inc, grid, 0x1p-6);
  for (double t : {0.0, 0.1, 0.25, 0.4, 0.5}) {
    const std::vector<double> in{t, 0.8};
    const double a = realize(base.net, in)[0], b = realize(changed.net, in)[0];
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }
  const std::vector<double> later{0.6, 0.8};
  CHECK(realize(base.net, later)[0] != realize(changed.net, later)[0]);
}

TEST_CASE("argument validation") {
  const std::vector<double> inc{0.0};
  CHECK_THROWS_AS(build_euler_net(zero_drift(1), inc, UniformGrid(1.0, 1), 0.0), DomainError);
  CHECK_THROWS_AS(build_euler_net(zero_drift(1), inc, UniformGrid(1.0, 1), 2.0), DomainError);
  CHECK_THROWS_AS(build_euler_net(zero_drift(1), inc, UniformGrid(1.0, 1), 0.5, 2.0), DomainError);
  CHECK_THROWS_AS(build_euler_net(zero_drift(1), inc, UniformGrid(1.0, 2), 0.5), ShapeError);
}

TEST_CASE("a single sample reduces to f0 of one emulated path") {
  const TestProblem tp = heat_relu_problem(1);
  const Budget b{4, 1, 0x1p-6};
  const BrownianGrid noise = solution_noise(tp.problem, b, 5);
  const SolutionNet sol = build_mc_average_net(tp.problem, b, noise);
  const Network direct =
      compose(tp.problem.initial, build_euler_net(tp.problem.drift, noise.path(0), noise.grid(), b.delta).net);
  CounterStream s(33, 0, 0, StreamTag::kTest);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> in{s.uniform(), 2.0 * s.uniform() - 1.0};
    CHECK(realize(sol.net, in)[0] == doctest::Approx(realize(direct, in)[0]).epsilon(1e-12));
  }
}

TEST_CASE("averages over paths and respects the parameter bound") {
  const TestProblem tp = ou_linear_problem(1);
  const Budget b{2, 2, 0.5};
  const BrownianGrid noise = solution_noise(tp.problem, b, 6);
  const SolutionNet sol = build_mc_average_net(tp.problem, b, noise);
  CHECK(sol.provenance.bounds.at("param_count").log10 <= sol.provenance.bounds.at("dnn_param_bound").log10);
  // Oracle: the average of f0 over the interpolated scheme paths. The
  // emulation error of each path is at most delta times its grid sup norm.
  CounterStream s(34, 0, 0, StreamTag::kTest);
  for (int i = 0; i < 100; ++i) {
    const double t = s.uniform();
    const std::vector<double> x{2.0 * s.uniform() - 1.0};
    double avg = 0.0, tol = 0.0;
    for (std::size_t m = 0; m < 2; ++m) {
      const SchemeState st = euler_grid(x, network_field(tp.problem.drift), noise, m);
      avg += realize(tp.problem.initial, interpolate(st, t))[0] / 2.0;
      double scale = 1.0;
      for (double v : st.values) scale = std::max(scale, std::abs(v));
      tol += b.delta * scale / 2.0;
    }
    CHECK(std::abs(realize(sol.net, tx(t, x))[0] - avg) <= tol);
  }
}

TEST_CASE("solve is deterministic and honours an explicit budget") {
  const TestProblem tp = heat_relu_problem(1);
  const Budget b{4, 8, 0x1p-6};
  const SolutionNet a = solve(tp.problem, 0.1, 11, b);
  const SolutionNet c = solve(tp.problem, 0.1, 11, b);
  CHECK(serialize(a) == serialize(c));
  CHECK(a.provenance.budget.N == 4);
  CHECK(a.provenance.budget.M == 8);
  CHECK(a.provenance.seed == 11);
  CHECK(a.provenance.problem == "heat_relu");
  CHECK(serialize(solve(tp.problem, 0.1, 12, b)) != serialize(a));
  CHECK_THROWS_AS(solve(tp.problem, 0.1, 11), PlannerOverflow);
}

TEST_CASE("growing M keeps the earlier path sub-networks") {
  const TestProblem tp = ou_linear_problem(2);
  const BrownianGrid small = solution_noise(tp.problem, Budget{3, 2, 0.25}, 8);
  const BrownianGrid large = solution_noise(tp.problem, Budget{3, 5, 0.25}, 8);
  for (std::size_t m = 0; m < 2; ++m) {
    const EulerNet a = build_euler_net(tp.problem.drift, small.path(m), small.grid(), 0.25);
    const EulerNet b = build_euler_net(tp.problem.drift, large.path(m), large.grid(), 0.25);
    CHECK(a.net == b.net);
  }
}
