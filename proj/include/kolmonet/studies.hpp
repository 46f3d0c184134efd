#pragma once

// Property and convergence studies shared by the command-line driver and the
// acceptance tests. Every study is deterministic given its seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kolmonet/builder.hpp"
#include "kolmonet/reference.hpp"

namespace kolmonet {

// Interpolation error at step midpoints, d = 1, B = 1, T = 1.
struct StrongMidpointResult {
  std::size_t steps;
  std::size_t paths;
  std::size_t refine;
  double h;
  double rms;
  double std_error;
  double expected;  // 0.5 sqrt(h)
  bool pass;        // |rms - expected| <= 3 std_error
};

StrongMidpointResult strong_midpoint_study(std::size_t paths, std::size_t steps,
                                           std::size_t refine, std::uint64_t seed);

// Euler moments against the moment bound, and pathwise growth against g_n.
struct MomentRow {
  std::string problem;
  std::size_t d;
  double q;
  std::size_t step;  // grid index with the smallest margin
  double estimate;
  double std_error;
  double bound;
  bool pass;  // estimate - 3 std_error <= bound
};

struct MomentStudy {
  std::vector<MomentRow> rows;
  std::size_t growth_checks = 0;
  std::size_t growth_violations = 0;
};

MomentStudy moment_study(const std::vector<std::size_t>& dims, std::size_t paths,
                         std::size_t steps, std::uint64_t seed);

// Weak error of the Euler scheme for dX = -X dt + dW, f0(x) = x, x0 = 1, T = 1.
struct WeakRow {
  std::size_t N;
  double estimate;
  double std_error;
  double bound;
  bool dominated;
};

struct WeakStudy {
  std::vector<WeakRow> rows;
  double slope;  // least-squares slope of log(error) against log(N)
};

WeakStudy weak_error_study(const std::vector<std::size_t>& steps, std::size_t paths,
                           std::size_t fine_steps, std::uint64_t seed);

// L^2(nu) error of the Monte Carlo Euler average for the heat problem, d = 1,
// averaged over independent Brownian realizations.
struct McLpRow {
  std::size_t N;
  std::size_t M;
  double estimate;
  double std_error;
  double bound;
  bool dominated;
};

McLpRow mc_lp_heat_study(std::size_t N, std::size_t M, std::size_t replicates,
                         std::size_t samples, std::uint64_t seed);

// Randomized checks of composition, associativity, identities and parameter counts.
struct CalculusStudy {
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
};

CalculusStudy calculus_study(std::size_t instances, std::uint64_t seed);

// Contract checks of one built solution network.
struct BuilderCase {
  std::string problem;
  std::size_t d;
  std::size_t N;
  std::size_t M;
  double delta;
  std::size_t points;
  double max_deviation;
  double max_ratio;  // largest deviation / mc_sum_error_bound
  std::size_t deviation_violations;
  std::size_t param_count;
  double log10_param_bound;
  bool params_ok;
  std::size_t euler_checks;
  std::size_t euler_violations;  // emulation error and growth bounds
  std::size_t adapted_checks;
  std::size_t adapted_violations;

  bool pass() const {
    return deviation_violations == 0 && params_ok && euler_violations == 0 &&
           adapted_violations == 0;
  }
};

BuilderCase builder_case(const TestProblem& tp, std::size_t N, std::size_t M, double delta,
                         std::size_t points, std::uint64_t seed);

/// (t, x) -> (1/M) sum_m f0(Y_t^{m,x}) for the first M paths of `noise`.
SpaceTimeField mc_average_field(const PdeProblem& problem, const BrownianGrid& noise,
                                std::size_t M);

struct VerifyResult {
  double lp_vs_exact;
  double lp_vs_exact_se;
  double lp_vs_mc_average;
  double dnn_error_bound;
  bool pass;  // lp_vs_exact <= dnn_error_bound
};

/// Compares a solution network with the exact solution and with the direct
/// Monte Carlo average regenerated from its provenance.
VerifyResult verify_solution(const SolutionNet& sol, const TestProblem& tp, std::size_t samples,
                             std::uint64_t seed);

// Bound evaluations next to the empirical quantities they dominate.
struct BoundsRow {
  std::string bound;
  std::string label;
  std::string inputs;
  double value;
  double empirical;  // NaN when the bound has no empirical counterpart
  double slack;      // value - empirical
};

std::vector<BoundsRow> bounds_report(std::uint64_t seed);

}  // namespace kolmonet
