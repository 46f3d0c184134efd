#include "kolmonet/sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "kolmonet/errors.hpp"
#include "kolmonet/parallel.hpp"
#include "kolmonet/rng.hpp"

namespace kolmonet {

namespace {

void fill_increments(std::uint64_t seed, std::size_t path, std::size_t steps, double horizon,
                     const Eigen::MatrixXd& b, StreamTag tag, std::span<double> out) {
  const auto d = static_cast<std::size_t>(b.rows());
  const auto k = static_cast<std::size_t>(b.cols());
  if (out.size() != steps * d) throw ShapeError("increment buffer has the wrong length");
  const double sqrt_h = std::sqrt(horizon / static_cast<double>(steps));
  std::vector<double> z(k);
  for (std::size_t n = 0; n < steps; ++n) {
    CounterStream s(seed, static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(n), tag);
    for (std::size_t j = 0; j < k; ++j) z[j] = sqrt_h * s.normal();
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
      out[n * d + i] = acc;
    }
  }
}

}  // namespace

UniformGrid::UniformGrid(double horizon_, std::size_t steps_) : horizon(horizon_), steps(steps_) {
  if (!(horizon > 0.0)) throw DomainError("time horizon must be positive");
  if (steps == 0) throw DomainError("number of time steps must be positive");
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> p(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) p[n] = time(n);
  return p;
}

VectorField network_field(const Network& net) {
  auto shared = std::make_shared<const Network>(net);
  return [shared](std::span<const double> x, std::span<double> out) {
    thread_local Workspace ws;
    realize_into(*shared, x, out, ws);
  };
}

ScalarField network_scalar(const Network& net) {
  if (net.out_dim() != 1) throw ShapeError("scalar field needs a network with one output");
  auto shared = std::make_shared<const Network>(net);
  return [shared](std::span<const double> x) {
    thread_local Workspace ws;
    double out = 0.0;
    realize_into(*shared, x, std::span<double>(&out, 1), ws);
    return out;
  };
}

Eigen::MatrixXd diffusion_from_covariance(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ShapeError("covariance matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("covariance matrix must be symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  const double trace = std::max(0.0, sym.trace());
  const double cutoff = 1e-12 * trace;
  Eigen::VectorXd lambda = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -cutoff && lambda(i) < -1e-14) {
      throw DomainError("covariance matrix is not positive semidefinite");
    }
    lambda(i) = lambda(i) <= cutoff ? 0.0 : std::sqrt(2.0 * lambda(i));
  }
  return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

void brownian_path(std::uint64_t seed, std::size_t path, std::size_t steps, double horizon,
                   const Eigen::MatrixXd& b, std::span<double> out) {
  fill_increments(seed, path, steps, horizon, b, StreamTag::kBrownian, out);
}

BrownianGrid::BrownianGrid(std::uint64_t seed, std::size_t steps, std::size_t paths,
                           double horizon, Eigen::MatrixXd b)
    : seed_(seed), steps_(steps), paths_(paths), horizon_(horizon), b_(std::move(b)) {
  if (steps == 0 || paths == 0 || b_.rows() == 0 || b_.cols() == 0) {
    throw DomainError("Brownian grid needs N, M, d >= 1");
  }
  if (!(horizon > 0.0)) throw DomainError("time horizon must be positive");
  const std::size_t stride = steps_ * dim();
  data_.resize(paths_ * stride);
  parallel_for(paths_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      fill_increments(seed_, m, steps_, horizon_, b_, StreamTag::kBrownian,
                      std::span<double>(data_).subspan(m * stride, stride));
    }
  });
}

std::span<const double> BrownianGrid::increment(std::size_t m, std::size_t n) const {
  if (m >= paths_ || n >= steps_) throw ShapeError("Brownian increment index out of range");
  return std::span<const double>(data_).subspan((m * steps_ + n) * dim(), dim());
}

std::span<const double> BrownianGrid::path(std::size_t m) const {
  if (m >= paths_) throw ShapeError("Brownian path index out of range");
  return std::span<const double>(data_).subspan(m * steps_ * dim(), steps_ * dim());
}

BrownianGrid sample_brownian(std::uint64_t seed, std::size_t steps, std::size_t paths,
                             std::size_t dim, double horizon, const Eigen::MatrixXd& b) {
  if (static_cast<std::size_t>(b.rows()) != dim) {
    throw ShapeError("diffusion matrix must have d rows");
  }
  return BrownianGrid(seed, steps, paths, horizon, b);
}

SchemeState euler_grid(std::span<const double> x, const VectorField& drift,
                       const UniformGrid& grid, std::span<const double> increments) {
  const std::size_t d = x.size();
  if (d == 0) throw ShapeError("starting point must be nonempty");
  if (increments.size() != grid.steps * d) throw ShapeError("increments do not match the grid");
  SchemeState s{grid, d, std::vector<double>((grid.steps + 1) * d)};
  std::copy(x.begin(), x.end(), s.values.begin());
  const double h = grid.step();
  std::vector<double> mu(d);
  for (std::size_t n = 0; n < grid.steps; ++n) {
    const double* y = s.values.data() + n * d;
    double* next = s.values.data() + (n + 1) * d;
    drift(std::span<const double>(y, d), mu);
    for (std::size_t i = 0; i < d; ++i) next[i] = y[i] + h * mu[i] + increments[n * d + i];
  }
  return s;
}

SchemeState euler_grid(std::span<const double> x, const VectorField& drift,
                       const BrownianGrid& noise, std::size_t path) {
  if (x.size() != noise.dim()) throw ShapeError("starting point and noise dimensions differ");
  return euler_grid(x, drift, noise.grid(), noise.path(path));
}

std::pair<std::size_t, double> locate(const UniformGrid& grid, double t) {
  if (!(t >= 0.0 && t <= grid.horizon)) {
    throw DomainError("time " + std::to_string(t) + " lies outside [0, T]");
  }
  const double s = t * static_cast<double>(grid.steps) / grid.horizon;
  const double k = std::nearbyint(s);
  const auto steps = static_cast<double>(grid.steps);
  if (std::abs(s - k) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, s)) {
    if (k >= steps) return {grid.steps - 1, 1.0};
    return {static_cast<std::size_t>(k), 0.0};
  }
  const double n = std::floor(s);
  if (n >= steps) return {grid.steps - 1, 1.0};
  return {static_cast<std::size_t>(n), s - n};
}

void interpolate_into(const SchemeState& state, double t, std::span<double> out) {
  const auto [n, rho] = locate(state.grid, t);
  const auto lo = state.at(n);
  const auto hi = state.at(n + 1);
  if (rho == 0.0) {
    std::copy(lo.begin(), lo.end(), out.begin());
  } else if (rho == 1.0) {
    std::copy(hi.begin(), hi.end(), out.begin());
  } else {
    for (std::size_t i = 0; i < state.dim; ++i) out[i] = lo[i] * (1.0 - rho) + hi[i] * rho;
  }
}

std::vector<double> interpolate(const SchemeState& state, double t) {
  std::vector<double> out(state.dim);
  interpolate_into(state, t, out);
  return out;
}

McEstimate mean_and_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw DomainError("empty sample");
  const double mean = pairwise_sum(values) / static_cast<double>(n);
  if (n == 1) return {mean, 0.0};
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

McEstimate feynman_kac(const ScalarField& f0, const VectorField& drift,
                       const Eigen::MatrixXd& a, double t, std::span<const double> x,
                       std::size_t paths, std::size_t steps, std::uint64_t seed) {
  if (paths == 0 || steps == 0) throw DomainError("feynman_kac needs M0, N0 >= 1");
  if (static_cast<std::size_t>(a.rows()) != x.size()) {
    throw ShapeError("covariance matrix and starting point dimensions differ");
  }
  if (t < 0.0) throw DomainError("time must be nonnegative");
  const Eigen::MatrixXd b = diffusion_from_covariance(a);
  if (t == 0.0) return {f0(x), 0.0};
  const UniformGrid grid(t, steps);
  const std::size_t d = x.size();
  std::vector<double> values(paths);
  parallel_for(paths, [&](std::size_t begin, std::size_t end) {
    std::vector<double> inc(steps * d);
    for (std::size_t m = begin; m < end; ++m) {
      fill_increments(seed, m, steps, t, b, StreamTag::kOracle, inc);
      const SchemeState s = euler_grid(x, drift, grid, inc);
      values[m] = f0(s.at(steps));
    }
  });
  return mean_and_error(values);
}

UniformSpaceTimeMeasure::UniformSpaceTimeMeasure(double horizon_, double alpha_, double beta_,
                                                 std::size_t dim_)
    : horizon(horizon_), alpha(alpha_), beta(beta_), dim(dim_) {
  if (!(horizon > 0.0)) throw DomainError("measure horizon must be positive");
  if (!(beta > alpha)) throw DomainError("measure box needs beta > alpha");
  if (dim == 0) throw DomainError("measure dimension must be positive");
}

void UniformSpaceTimeMeasure::sample(std::uint64_t seed, std::size_t k, double& t,
                                     std::span<double> x) const {
  if (x.size() != dim) throw ShapeError("sample buffer has the wrong length");
  CounterStream s(seed, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                  StreamTag::kSpaceTime);
  t = horizon * s.uniform();
  for (std::size_t i = 0; i < dim; ++i) x[i] = alpha + (beta - alpha) * s.uniform();
}

LpEstimate lp_error_estimate(const SpaceTimeField& a, const SpaceTimeField& b,
                             const UniformSpaceTimeMeasure& measure, double p,
                             std::size_t samples, std::uint64_t seed) {
  if (!(p > 0.0)) throw DomainError("lp_error: p must be positive");
  if (samples == 0) throw DomainError("lp_error: need at least one sample");
  std::vector<double> vals(samples);
  parallel_for(samples, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(measure.dim);
    double t = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      measure.sample(seed, k, t, x);
      vals[k] = std::pow(std::abs(a(t, x) - b(t, x)), p);
    }
  });
  const McEstimate m = mean_and_error(vals);
  const double value = std::pow(m.estimate, 1.0 / p);
  // Delta method for the map m -> m^(1/p).
  const double se = m.estimate > 0.0 ? m.std_error * value / (p * m.estimate) : 0.0;
  return {value, se};
}

double lp_error(const SpaceTimeField& a, const SpaceTimeField& b,
                const UniformSpaceTimeMeasure& measure, double p, std::size_t samples,
                std::uint64_t seed) {
  return lp_error_estimate(a, b, measure, p, samples, seed).value;
}

}  // namespace kolmonet
