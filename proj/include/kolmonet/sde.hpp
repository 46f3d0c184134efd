#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kolmonet/network.hpp"

namespace kolmonet {

/// Uniform time grid tau_n = n T / N, n = 0..N.
struct UniformGrid {
  double horizon;
  std::size_t steps;

  UniformGrid(double horizon, std::size_t steps);
  double step() const noexcept { return horizon / static_cast<double>(steps); }
  double time(std::size_t n) const noexcept {
    return horizon * static_cast<double>(n) / static_cast<double>(steps);
  }
  std::vector<double> points() const;
};

/// A map R^d -> R^d evaluated into a caller-provided buffer.
using VectorField = std::function<void(std::span<const double>, std::span<double>)>;
/// A map R^d -> R.
using ScalarField = std::function<double(std::span<const double>)>;
/// A map [0,T] x R^d -> R.
using SpaceTimeField = std::function<double(double, std::span<const double>)>;

VectorField network_field(const Network& net);
ScalarField network_scalar(const Network& net);

/// sqrt(2A) by symmetric eigendecomposition. Eigenvalues below
/// 1e-12 * trace(A) in magnitude are set to zero; clearly negative ones are rejected.
Eigen::MatrixXd diffusion_from_covariance(const Eigen::MatrixXd& a);

/// Writes the N increments B (W_{(n+1)h} - W_{nh}) of one path, back to back,
/// into out (length N * B.rows()).
void brownian_path(std::uint64_t seed, std::size_t path, std::size_t steps, double horizon,
                   const Eigen::MatrixXd& b, std::span<double> out);

/// Increments of M independent paths on a uniform grid.
class BrownianGrid {
 public:
  BrownianGrid(std::uint64_t seed, std::size_t steps, std::size_t paths, double horizon,
               Eigen::MatrixXd b);

  std::size_t steps() const noexcept { return steps_; }
  std::size_t paths() const noexcept { return paths_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(b_.rows()); }
  double horizon() const noexcept { return horizon_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Eigen::MatrixXd& diffusion() const noexcept { return b_; }
  UniformGrid grid() const { return UniformGrid(horizon_, steps_); }

  std::span<const double> increment(std::size_t m, std::size_t n) const;
  /// All N increments of path m.
  std::span<const double> path(std::size_t m) const;

 private:
  std::uint64_t seed_;
  std::size_t steps_;
  std::size_t paths_;
  double horizon_;
  Eigen::MatrixXd b_;
  std::vector<double> data_;
};

BrownianGrid sample_brownian(std::uint64_t seed, std::size_t steps, std::size_t paths,
                             std::size_t dim, double horizon, const Eigen::MatrixXd& b);

/// Grid values Y_{tau_0..tau_N} of one Euler path.
struct SchemeState {
  UniformGrid grid;
  std::size_t dim;
  std::vector<double> values;  // (N + 1) x d, row n is Y_{tau_n}

  std::span<const double> at(std::size_t n) const {
    return std::span<const double>(values).subspan(n * dim, dim);
  }
};

/// Y_0 = x, Y_{n+1} = Y_n + h mu(Y_n) + increments[n].
SchemeState euler_grid(std::span<const double> x, const VectorField& drift,
                       const UniformGrid& grid, std::span<const double> increments);
SchemeState euler_grid(std::span<const double> x, const VectorField& drift,
                       const BrownianGrid& noise, std::size_t path);

/// Linear interpolation between grid values; exact at grid times.
std::vector<double> interpolate(const SchemeState& state, double t);
void interpolate_into(const SchemeState& state, double t, std::span<double> out);

/// Locates t in the grid: returns (n, rho) with t = tau_n + rho h, rho in [0, 1).
/// At t = T returns (N - 1, 1).
std::pair<std::size_t, double> locate(const UniformGrid& grid, double t);

struct McEstimate {
  double estimate;
  double std_error;
};

/// Monte Carlo estimate of E f0(X_t^x) for dX = mu(X) dt + sqrt(2A) dW,
/// using M0 Euler paths with N0 steps on [0, t].
McEstimate feynman_kac(const ScalarField& f0, const VectorField& drift,
                       const Eigen::MatrixXd& a, double t, std::span<const double> x,
                       std::size_t paths, std::size_t steps, std::uint64_t seed);

/// Uniform probability measure on [0,T] x [alpha, beta]^d.
struct UniformSpaceTimeMeasure {
  double horizon;
  double alpha;
  double beta;
  std::size_t dim;

  UniformSpaceTimeMeasure(double horizon, double alpha, double beta, std::size_t dim);
  /// Sample k of the deterministic sample sequence for `seed`: (t, x).
  void sample(std::uint64_t seed, std::size_t k, double& t, std::span<double> x) const;
};

struct LpEstimate {
  double value;
  double std_error;
};

LpEstimate lp_error_estimate(const SpaceTimeField& a, const SpaceTimeField& b,
                             const UniformSpaceTimeMeasure& measure, double p,
                             std::size_t samples, std::uint64_t seed);
double lp_error(const SpaceTimeField& a, const SpaceTimeField& b,
                const UniformSpaceTimeMeasure& measure, double p, std::size_t samples,
                std::uint64_t seed);

/// Mean and standard error of a sample.
McEstimate mean_and_error(std::span<const double> values);

}  // namespace kolmonet
