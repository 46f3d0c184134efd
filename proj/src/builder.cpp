#include "kolmonet/builder.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kolmonet/calculus.hpp"
#include "kolmonet/errors.hpp"
#include "kolmonet/parallel.hpp"
#include "kolmonet/serialize.hpp"

namespace kolmonet {

namespace {

// Largest N * M that solve() builds without an explicit override.
constexpr double kMaxPlannedWork = 1u << 24;

// (t, x) -> (t, x, x): the state before the first Euler step.
Network initial_state(std::size_t d) {
  MatrixAssembler w(1 + 2 * d, 1 + d);
  w.add(0, 0, 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    w.add(1 + i, 1 + i, 1.0);
    w.add(1 + d + i, 1 + i, 1.0);
  }
  return affine_net(std::move(w).build(), std::vector<double>(1 + 2 * d, 0.0));
}

// One Euler step on the state (t, x, D_0..D_{k-1}, Y_k), producing
// (t, x, D_0..D_k, Y_{k+1}) with D_k = h f1(Y_k) + y_k.
Network euler_step(const Network& drift, std::size_t d, std::size_t k, double h,
                   std::span<const double> y) {
  const std::size_t dim = 1 + d + k * d + d;
  const std::size_t y_off = 1 + d + k * d;

  MatrixAssembler sel(d, dim);
  for (std::size_t i = 0; i < d; ++i) sel.add(i, y_off + i, 1.0);
  const Network phi = compose(drift, affine_net(std::move(sel).build(), std::vector<double>(d, 0.0)));
  const Network carry = identity_of_length(dim, drift.length());
  const Network both[] = {carry, phi};
  const Network par = parallel_shared(both);

  // Inputs: (state, phi); outputs: (t, x, D_<k, D_k, Y_{k+1}).
  MatrixAssembler w(dim + d, dim + d);
  std::vector<double> bias(dim + d, 0.0);
  for (std::size_t j = 0; j < y_off; ++j) w.add(j, j, 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    w.add(y_off + i, dim + i, h);
    bias[y_off + i] = y[i];
    w.add(y_off + d + i, y_off + i, 1.0);
    w.add(y_off + d + i, dim + i, h);
    bias[y_off + d + i] = y[i];
  }
  return compose(affine_net(std::move(w).build(), std::move(bias)), par);
}

// (t, x, D_0..D_{N-1}) -> (x, (rho_k, clip(D_{k,i})) for k, i), two layers.
Network interpolation_inputs(std::size_t d, const UniformGrid& grid, double clip) {
  const std::size_t N = grid.steps;
  const std::size_t in = 1 + d + N * d;
  const std::size_t time_units = N + 1;
  const std::size_t hidden = time_units + 2 * d + 4 * N * d;
  MatrixAssembler w1(hidden, in);
  std::vector<double> b1(hidden, 0.0);
  for (std::size_t k = 0; k <= N; ++k) {
    w1.add(k, 0, 1.0);
    b1[k] = -grid.time(k);
  }
  const std::size_t xo = time_units;
  for (std::size_t i = 0; i < d; ++i) {
    w1.add(xo + i, 1 + i, 1.0);
    w1.add(xo + d + i, 1 + i, -1.0);
  }
  const std::size_t co = xo + 2 * d;
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t u = co + 4 * (k * d + i);
      const std::size_t v = 1 + d + k * d + i;
      w1.add(u + 0, v, 1.0);
      w1.add(u + 1, v, 1.0);
      b1[u + 1] = -clip;
      w1.add(u + 2, v, -1.0);
      w1.add(u + 3, v, -1.0);
      b1[u + 3] = -clip;
    }
  }

  const std::size_t out = d + 2 * N * d;
  MatrixAssembler w2(out, hidden);
  const double inv_h = 1.0 / grid.step();
  for (std::size_t i = 0; i < d; ++i) {
    w2.add(i, xo + i, 1.0);
    w2.add(i, xo + d + i, -1.0);
  }
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t r = d + 2 * (k * d + i);
      w2.add(r, k, inv_h);
      w2.add(r, k + 1, -inv_h);
      const std::size_t u = co + 4 * (k * d + i);
      w2.add(r + 1, u + 0, 1.0);
      w2.add(r + 1, u + 1, -1.0);
      w2.add(r + 1, u + 2, -1.0);
      w2.add(r + 1, u + 3, 1.0);
    }
  }
  std::vector<Layer> layers;
  layers.emplace_back(std::move(w1).build(), std::move(b1));
  layers.emplace_back(std::move(w2).build(), std::vector<double>(out, 0.0));
  return Network(std::move(layers));
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void PdeProblem::validate() const {
  const std::size_t d = drift.in_dim();
  if (drift.out_dim() != d) throw ShapeError("drift network must map R^d to R^d");
  if (initial.in_dim() != d || initial.out_dim() != 1) {
    throw ShapeError("initial-value network must map R^d to R");
  }
  if (static_cast<std::size_t>(a.rows()) != d || static_cast<std::size_t>(a.cols()) != d) {
    throw ShapeError("diffusion coefficient must be d x d");
  }
  params.validate();
  if (!(beta > alpha)) throw DomainError("measure box needs beta > alpha");
}

EulerNet build_euler_net(const Network& drift, std::span<const double> increments,
                         const UniformGrid& grid, double delta, double q) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  if (!(q > 2.0)) throw DomainError("q must exceed 2");
  const std::size_t d = drift.in_dim();
  if (drift.out_dim() != d) throw ShapeError("drift network must map R^d to R^d");
  const std::size_t N = grid.steps;
  if (increments.size() != N * d) throw ShapeError("increments must hold N blocks of d values");

  const double Nd = static_cast<double>(N);
  // Clipping increments to [-R, R] costs at most N (2g)^q / R^(q-1) <= delta g^q,
  // and R >= N keeps the growth estimate.
  const double clip = std::max(Nd, std::pow(Nd * std::pow(2.0, q) / delta, 1.0 / (q - 1.0)));
  const double eps_p = delta / (Nd * static_cast<double>(d));
  const ProductNet prod = product_net(eps_p, 1.0, clip);

  // Stage 1: grid values and increments of the Euler recursion.
  Network state = initial_state(d);
  const double h = grid.step();
  for (std::size_t k = 0; k < N; ++k) {
    state = compose(euler_step(drift, d, k, h, increments.subspan(k * d, d)), state);
  }
  const std::size_t state_dim = 1 + d + N * d;
  MatrixAssembler drop(state_dim, state_dim + d);
  for (std::size_t j = 0; j < state_dim; ++j) drop.add(j, j, 1.0);
  state = compose(affine_net(std::move(drop).build(), std::vector<double>(state_dim, 0.0)), state);

  // Stage 2: interpolation weights and clipped increments.
  Network net = compose(interpolation_inputs(d, grid, clip), state);

  // Stage 3: products rho_k * clip(D_{k,i}), each passed through a (P+, P-)
  // layer, next to an identity carry of x.
  const Network product_block = compose(identity_net(1), prod.net);
  std::vector<Network> blocks;
  blocks.reserve(1 + N * d);
  blocks.push_back(identity_of_length(d, product_block.length()));
  for (std::size_t j = 0; j < N * d; ++j) blocks.push_back(product_block);
  net = compose(parallel_disjoint(blocks), net);

  // Stage 4: Y_t = x + sum_k rho_k D_k.
  MatrixAssembler sum(d, d + N * d);
  for (std::size_t i = 0; i < d; ++i) {
    sum.add(i, i, 1.0);
    for (std::size_t k = 0; k < N; ++k) sum.add(i, d + k * d + i, 1.0);
  }
  net = compose(affine_net(std::move(sum).build(), std::vector<double>(d, 0.0)), net);
  return EulerNet{std::move(net), clip, eps_p, prod.levels};
}

SolutionNet build_mc_average_net(const PdeProblem& problem, const Budget& budget,
                                 const BrownianGrid& noise, double q) {
  problem.validate();
  budget.validate();
  const std::size_t d = problem.dim();
  if (noise.dim() != d || noise.steps() != budget.N || noise.paths() < budget.M) {
    throw ShapeError("Brownian realization does not match the budget");
  }
  if (std::abs(noise.horizon() - problem.params.T) > 0.0) {
    throw ShapeError("Brownian realization horizon differs from the problem horizon");
  }
  const UniformGrid grid = noise.grid();
  std::vector<std::optional<Network>> per_path(budget.M);
  parallel_for(budget.M, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const EulerNet e = build_euler_net(problem.drift, noise.path(m), grid, budget.delta, q);
      per_path[m] = compose(problem.initial, e.net);
    }
  });
  std::vector<Network> nets;
  nets.reserve(budget.M);
  for (auto& n : per_path) nets.push_back(std::move(*n));
  const std::vector<double> weights(budget.M, 1.0 / static_cast<double>(budget.M));
  Network avg = average_nets(nets, weights);

  const RegularityParams& P = problem.params;
  const double N = static_cast<double>(budget.N), M = static_cast<double>(budget.M);
  Provenance prov;
  prov.problem = problem.name;
  prov.problem_hash = problem_hash(problem);
  prov.seed = noise.seed();
  prov.budget = budget;
  prov.q = q;
  const Magnitude pb = dnn_param_bound_log(P, d, N, M, budget.delta);
  prov.bounds["param_count"] = {std::log10(static_cast<double>(avg.param_count()))};
  prov.bounds["dnn_param_bound"] = {pb.log10};
  prov.bounds["dnn_error_bound"] = {dnn_error_bound_log(P, d, N, M, budget.delta, 1.0).log10};
  prov.bounds["mc_lp_error_bound"] = {mc_lp_error_bound_log(P, d, N, M, 1.0).log10};
  if (prov.bounds["param_count"].log10 > pb.log10) {
    throw DomainError("constructed network exceeds the parameter bound: " +
                      std::to_string(avg.param_count()) + " > " + hex_double(pb.value()));
  }
  return SolutionNet{std::move(avg), std::move(prov)};
}

BrownianGrid solution_noise(const PdeProblem& problem, const Budget& budget, std::uint64_t seed) {
  const Eigen::MatrixXd b = diffusion_from_covariance(problem.a);
  return sample_brownian(seed, budget.N, budget.M, problem.dim(), problem.params.T, b);
}

SolutionNet solve(const PdeProblem& problem, double eps, std::uint64_t seed,
                  std::optional<Budget> budget_override) {
  problem.validate();
  Budget budget;
  if (budget_override) {
    budget = *budget_override;
  } else {
    const BudgetPlan plan = plan_budget(problem.params, problem.dim(), eps);
    if (!plan.budget || plan.N.log10 + plan.M.log10 > std::log10(kMaxPlannedWork)) {
      throw PlannerOverflow(
          "planned budget is not buildable (log10 N = " + hex_double(plan.N.log10) +
          ", log10 M = " + hex_double(plan.M.log10) +
          "); pass an explicit budget override");
    }
    budget = *plan.budget;
  }
  budget.validate();
  return build_mc_average_net(problem, budget, solution_noise(problem, budget, seed));
}

}  // namespace kolmonet
