#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "kolmonet/bounds.hpp"
#include "kolmonet/network.hpp"
#include "kolmonet/sde.hpp"

namespace kolmonet {

/// Kolmogorov problem data: du/dt = grad u . f1 + sum a_ij d_ij u, u(0) = f0.
struct PdeProblem {
  std::string name;
  Network drift;    // f1 : R^d -> R^d
  Network initial;  // f0 : R^d -> R
  Eigen::MatrixXd a;
  RegularityParams params;
  double alpha = -1.0;  // space box [alpha, beta]^d of the error measure
  double beta = 1.0;

  std::size_t dim() const noexcept { return drift.in_dim(); }
  void validate() const;
};

/// Network emulating one interpolated Euler path t -> Y_t^{x,y}.
struct EulerNet {
  Network net;               // (t, x) -> R^d
  double clip_range;         // R, bound applied to each increment coordinate
  double product_accuracy;   // accuracy of every product sub-network
  std::size_t product_levels;
};

/// Builds the network for increments y (N blocks of d values) on a uniform grid.
EulerNet build_euler_net(const Network& drift, std::span<const double> increments,
                         const UniformGrid& grid, double delta, double q = 3.0);

struct BoundValue {
  double log10;
  double value() const { return Magnitude{log10}.value(); }
};

struct Provenance {
  std::string problem;
  std::string problem_hash;
  std::uint64_t seed = 0;
  Budget budget;
  double q = 3.0;
  std::map<std::string, BoundValue> bounds;
};

struct SolutionNet {
  Network net;  // (t, x) -> R
  Provenance provenance;
};

/// Averages f0 over the M emulated Euler paths of `noise`.
SolutionNet build_mc_average_net(const PdeProblem& problem, const Budget& budget,
                                 const BrownianGrid& noise, double q = 3.0);

/// Plans (or takes) a budget, samples one Brownian realization and builds the
/// network. Without an override the planned N and M must be small enough to
/// build; otherwise PlannerOverflow is thrown.
SolutionNet solve(const PdeProblem& problem, double eps, std::uint64_t seed,
                  std::optional<Budget> budget_override = std::nullopt);

/// Brownian realization used by solve for the given problem, budget and seed.
BrownianGrid solution_noise(const PdeProblem& problem, const Budget& budget, std::uint64_t seed);

}  // namespace kolmonet
