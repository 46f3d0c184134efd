#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "kolmonet/builder.hpp"
#include "kolmonet/sde.hpp"

namespace kolmonet {

/// A Kolmogorov problem with a known solution and the constants that
/// describe its coefficients.
struct TestProblem {
  PdeProblem problem;
  SpaceTimeField exact = {};
  double initial_error = 0.0;  // sup over [-range, range]^d of |u(0,x) - f0(x)|
  double drift_C = 0.0;        // |f1(x)| <= drift_C + drift_c |x|
  double drift_c = 0.0;
  double drift_lipschitz = 0.0;
  double init_lipschitz = 0.0;  // |f0(x) - f0(y)| <= L (1 + |x|^a + |y|^a) |x - y|
  double init_exponent = 0.0;   // the exponent a above
  std::function<double(double)> init_growth = {};  // sup of |f0| on the sphere of radius r
  std::string notes = {};
};

double normal_cdf(double x);
double normal_pdf(double x);

/// Drift 0, A = I, f0(x) = sum_i max(x_i, 0).
TestProblem heat_relu_problem(std::size_t d);
/// Drift -x, A = a I, f0(x) = sum_i x_i, u(t, x) = e^{-t} sum_i x_i.
TestProblem ou_linear_problem(std::size_t d, double a = 0.5);
/// Drift 0, A = I, f0 a square-network approximation of |x|^2 accurate to
/// eps0 on [-range, range]^d, u(t, x) = |x|^2 + 2 d t.
TestProblem quadratic_heat_problem(std::size_t d, double range = 4.0, double eps0 = 1e-3);

/// Smallest kappa on a 0.01 grid for which the coefficient hypotheses hold
/// for the given problem in dimension d.
double minimal_kappa(const TestProblem& tp);

std::vector<std::string> problem_names();
/// Looks a problem up by name; throws std::invalid_argument for unknown names.
TestProblem find_problem(const std::string& name, std::size_t d);

}  // namespace kolmonet
