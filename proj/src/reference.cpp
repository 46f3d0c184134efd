#include "kolmonet/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kolmonet/calculus.hpp"
#include "kolmonet/errors.hpp"

namespace kolmonet {

namespace {

constexpr double kHorizon = 1.0;
constexpr double kP = 2.0;

Network zero_drift(std::size_t d) {
  return affine_net(WeightMatrix(d, d), std::vector<double>(d, 0.0));
}

Network sum_net(std::size_t d) {
  std::vector<double> ones(d, 1.0);
  return affine_net(WeightMatrix::from_dense(1, d, ones), {0.0});
}

// Fills kappa and eta from the coefficient data.
void finish(TestProblem& tp) {
  PdeProblem& pr = tp.problem;
  pr.params.T = kHorizon;
  pr.params.p = kP;
  pr.params.kappa = minimal_kappa(tp);
  pr.params.eta = lebesgue_eta(kHorizon, pr.params.kappa, kP, pr.alpha, pr.beta).eta;
  pr.validate();
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

TestProblem heat_relu_problem(std::size_t d) {
  if (d == 0) throw DomainError("dimension must be positive");
  std::vector<Layer> layers;
  layers.emplace_back(WeightMatrix::identity(d), std::vector<double>(d, 0.0));
  layers.emplace_back(WeightMatrix::from_dense(1, d, std::vector<double>(d, 1.0)),
                      std::vector<double>{0.0});
  TestProblem tp{PdeProblem{"heat_relu", zero_drift(d), Network(std::move(layers)),
                            Eigen::MatrixXd::Identity(d, d), {}}};
  tp.exact = [](double t, std::span<const double> x) {
    double sum = 0.0;
    if (t <= 0.0) {
      for (double v : x) sum += std::max(v, 0.0);
      return sum;
    }
    const double s = std::sqrt(2.0 * t);
    for (double v : x) sum += v * normal_cdf(v / s) + s * normal_pdf(v / s);
    return sum;
  };
  const double sd = std::sqrt(static_cast<double>(d));
  tp.init_lipschitz = sd / 3.0;
  tp.init_growth = [sd](double r) { return sd * r; };
  tp.notes = "f0 is represented exactly";
  finish(tp);
  return tp;
}

TestProblem ou_linear_problem(std::size_t d, double a) {
  if (d == 0) throw DomainError("dimension must be positive");
  if (!(a >= 0.0)) throw DomainError("diffusion scale must be nonnegative");
  TestProblem tp{PdeProblem{"ou_linear", scale_output(identity_net(d), -1.0), sum_net(d),
                            a * Eigen::MatrixXd::Identity(d, d), {}}};
  tp.exact = [](double t, std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v;
    return std::exp(-t) * sum;
  };
  const double sd = std::sqrt(static_cast<double>(d));
  tp.drift_c = 1.0;
  tp.drift_lipschitz = 1.0;
  tp.init_lipschitz = sd / 3.0;
  tp.init_growth = [sd](double r) { return sd * r; };
  tp.notes = "coefficients represented exactly; the diffusion does not affect the solution";
  finish(tp);
  return tp;
}

TestProblem quadratic_heat_problem(std::size_t d, double range, double eps0) {
  if (d == 0) throw DomainError("dimension must be positive");
  if (!(range >= 1.0)) throw DomainError("range must be at least 1");
  if (!(eps0 > 0.0 && eps0 <= 1.0)) throw DomainError("eps0 must lie in (0, 1]");
  const SquareNet sq = square_net(eps0 / static_cast<double>(d), range);
  std::vector<Network> copies(d, sq.net);
  const Network stacked = parallel_disjoint(copies);

  TestProblem tp{PdeProblem{"quadratic_heat", zero_drift(d), compose(sum_net(d), stacked),
                            Eigen::MatrixXd::Identity(d, d), {}}};
  const double dd = static_cast<double>(d);
  tp.exact = [dd](double t, std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return sum + 2.0 * dd * t;
  };
  tp.initial_error = sq.error_bound * dd;
  // The network is the piecewise-linear interpolant of u^2 with knot spacing
  // range / 2^levels, and grows like range |u| outside [-range, range]. Each
  // coordinate term is then at most min(u^2, range |u|).
  const double knot = range / std::ldexp(1.0, static_cast<int>(sq.levels));
  tp.init_lipschitz = std::max(knot * std::sqrt(dd), 2.0);
  tp.init_exponent = 1.0;
  const double err = tp.initial_error;
  const double sd = std::sqrt(dd);
  tp.init_growth = [range, err, sd](double r) { return std::min(r * r, range * sd * r) + err; };
  tp.notes = "f0 approximates |x|^2 within initial_error on the box [-range, range]^d";
  finish(tp);
  return tp;
}

double minimal_kappa(const TestProblem& tp) {
  const PdeProblem& pr = tp.problem;
  const double d = static_cast<double>(pr.dim());
  const double params =
      static_cast<double>(pr.drift.param_count() + pr.initial.param_count());
  const double a_abs = pr.a.cwiseAbs().sum();

  std::vector<double> radii{0.0};
  for (double r = 1e-3; r <= 1e6; r *= 1.05) radii.push_back(r);

  auto holds = [&](double k) {
    const double dk = std::pow(d, k);
    if (params > k * dk) return false;
    if (tp.drift_lipschitz > k || tp.drift_c > k || tp.drift_C > k * dk) return false;
    if (tp.init_lipschitz > k * dk) return false;
    if (tp.init_exponent > 0.0 && tp.init_exponent > k) return false;
    for (double r : radii) {
      if (tp.init_growth(r) + a_abs > k * dk * (1.0 + std::pow(r, k))) return false;
    }
    return true;
  };
  for (int step = 1; step < 100000; ++step) {
    const double k = 0.01 * step;
    if (holds(k)) return k;
  }
  throw DomainError("no kappa below 1000 satisfies the coefficient hypotheses");
}

std::vector<std::string> problem_names() { return {"heat_relu", "ou_linear", "quadratic_heat"}; }

TestProblem find_problem(const std::string& name, std::size_t d) {
  if (name == "heat_relu") return heat_relu_problem(d);
  if (name == "ou_linear") return ou_linear_problem(d);
  if (name == "quadratic_heat") return quadratic_heat_problem(d);
  throw std::invalid_argument("unknown problem '" + name + "'");
}

}  // namespace kolmonet
