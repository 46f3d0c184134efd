#include "kolmonet/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <sstream>

#include "kolmonet/calculus.hpp"
#include "kolmonet/errors.hpp"
#include "kolmonet/parallel.hpp"
#include "kolmonet/rng.hpp"
#include "kolmonet/serialize.hpp"

namespace kolmonet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// max_{j <= n} |y_0 + ... + y_{j-1}| for n = 0..N.
std::vector<double> running_max_partial_sums(std::span<const double> inc, std::size_t d) {
  const std::size_t N = inc.size() / d;
  std::vector<double> out(N + 1, 0.0), w(d, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t i = 0; i < d; ++i) w[i] += inc[n * d + i];
    out[n + 1] = std::max(out[n], norm(w));
  }
  return out;
}

std::vector<double> space_time_input(double t, std::span<const double> x) {
  std::vector<double> in;
  in.reserve(x.size() + 1);
  in.push_back(t);
  in.insert(in.end(), x.begin(), x.end());
  return in;
}

double sqrt_of_mean(const McEstimate& m, double& se) {
  const double v = std::sqrt(std::max(m.estimate, 0.0));
  se = v > 0.0 ? m.std_error / (2.0 * v) : 0.0;
  return v;
}

// Random network with the given in/out dimensions and length. Integer mode
// draws weights and biases from {-3, ..., 3} so products are exact.
Network random_net(CounterStream& s, std::size_t in, std::size_t out, std::size_t length,
                   bool integer) {
  std::vector<std::size_t> dims{in};
  for (std::size_t k = 1; k < length; ++k) dims.push_back(1 + static_cast<std::size_t>(s.uniform() * 6.0));
  dims.push_back(out);
  auto draw = [&] {
    if (integer) return std::floor(s.uniform() * 7.0) - 3.0;
    return 2.0 * s.uniform() - 1.0;
  };
  std::vector<Layer> layers;
  for (std::size_t k = 1; k < dims.size(); ++k) {
    std::vector<double> w(dims[k] * dims[k - 1]), b(dims[k]);
    for (double& v : w) v = draw();
    for (double& v : b) v = draw();
    layers.emplace_back(WeightMatrix::from_dense(dims[k], dims[k - 1], w), std::move(b));
  }
  return Network(std::move(layers));
}

std::size_t formula_params(const std::vector<std::size_t>& dims) {
  std::size_t total = 0;
  for (std::size_t k = 1; k < dims.size(); ++k) total += dims[k] * (dims[k - 1] + 1);
  return total;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

StrongMidpointResult strong_midpoint_study(std::size_t paths, std::size_t steps,
                                           std::size_t refine, std::uint64_t seed) {
  if (paths < 2 || steps == 0) throw DomainError("need at least two paths and one step");
  if (refine < 2 || refine % 2 != 0) throw DomainError("refinement factor must be even");
  const double T = 1.0;
  const double h = T / static_cast<double>(steps);
  const std::size_t fine = steps * refine;
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(1, 1);
  std::vector<double> per_path(paths);
  parallel_for(paths, [&](std::size_t begin, std::size_t end) {
    std::vector<double> inc(fine);
    for (std::size_t m = begin; m < end; ++m) {
      brownian_path(seed, m, fine, T, b, inc);
      // Drift -y; it cancels in Y_t - Z_t but keeps the scheme nontrivial.
      double y = 1.0, acc = 0.0;
      for (std::size_t n = 0; n < steps; ++n) {
        double half = 0.0, full = 0.0;
        for (std::size_t j = 0; j < refine; ++j) {
          full += inc[n * refine + j];
          if (j < refine / 2) half += inc[n * refine + j];
        }
        const double mu = -y;
        const double y_mid = y + 0.5 * (h * mu + full);
        const double z_mid = y + mu * 0.5 * h + half;
        acc += (y_mid - z_mid) * (y_mid - z_mid);
        y = y + h * mu + full;
      }
      per_path[m] = acc / static_cast<double>(steps);
    }
  });
  StrongMidpointResult r{steps, paths, refine, h, 0.0, 0.0, 0.0, false};
  r.rms = sqrt_of_mean(mean_and_error(per_path), r.std_error);
  r.expected = interp_error_bound(2.0, h, 1.0);
  r.pass = std::abs(r.rms - r.expected) <= 3.0 * r.std_error;
  return r;
}

MomentStudy moment_study(const std::vector<std::size_t>& dims, std::size_t paths,
                         std::size_t steps, std::uint64_t seed) {
  MomentStudy study;
  const double qs[] = {2.0, 4.0};
  for (const std::string name : {"ou_linear", "heat_relu"}) {
    for (std::size_t d : dims) {
      const TestProblem tp = find_problem(name, d);
      const PdeProblem& pr = tp.problem;
      const double T = pr.params.T;
      const BrownianGrid noise = solution_noise(pr, Budget{steps, paths, 1.0}, seed);
      const double trace = 2.0 * pr.a.trace();
      const std::vector<double> x(d, 0.5);
      const double x_norm = norm(x);
      const VectorField drift = network_field(pr.drift);

      std::vector<double> norms(paths * (steps + 1));
      std::vector<std::size_t> bad(paths, 0);
      parallel_for(paths, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
          const SchemeState s = euler_grid(x, drift, noise, m);
          const auto w = running_max_partial_sums(noise.path(m), d);
          for (std::size_t n = 0; n <= steps; ++n) {
            const double v = norm(s.at(n));
            norms[m * (steps + 1) + n] = v;
            const double g = growth_g(x_norm, tp.drift_C, tp.drift_c, noise.grid().time(n), w[n]);
            if (v > g * (1.0 + 1e-12)) ++bad[m];
          }
        }
      });
      study.growth_checks += paths * (steps + 1);
      study.growth_violations += std::accumulate(bad.begin(), bad.end(), std::size_t{0});

      for (double q : qs) {
        const double bound = euler_moment_bound(q, x_norm, tp.drift_C, tp.drift_c, T, trace);
        MomentRow worst{name, d, q, 0, 0.0, 0.0, bound, true};
        double worst_margin = -std::numeric_limits<double>::infinity();
        std::vector<double> vals(paths);
        for (std::size_t n = 0; n <= steps; ++n) {
          for (std::size_t m = 0; m < paths; ++m) vals[m] = std::pow(norms[m * (steps + 1) + n], q);
          const McEstimate e = mean_and_error(vals);
          const double est = std::pow(e.estimate, 1.0 / q);
          const double se = e.estimate > 0.0 ? e.std_error * est / (q * e.estimate) : 0.0;
          const double margin = est - 3.0 * se - bound;
          if (margin > worst_margin) {
            worst_margin = margin;
            worst.step = n;
            worst.estimate = est;
            worst.std_error = se;
          }
        }
        worst.pass = worst_margin <= 0.0;
        study.rows.push_back(worst);
      }
    }
  }
  return study;
}

WeakStudy weak_error_study(const std::vector<std::size_t>& steps, std::size_t paths,
                           std::size_t fine_steps, std::uint64_t seed) {
  for (std::size_t N : steps) {
    if (N == 0 || fine_steps % N != 0) throw DomainError("coarse step counts must divide the fine one");
  }
  const double T = 1.0, x0 = 1.0;
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(1, 1);  // sqrt(2 * 0.5)
  std::vector<std::vector<double>> diffs(steps.size(), std::vector<double>(paths));
  parallel_for(paths, [&](std::size_t begin, std::size_t end) {
    std::vector<double> inc(fine_steps);
    for (std::size_t m = begin; m < end; ++m) {
      brownian_path(seed, m, fine_steps, T, b, inc);
      const double hf = T / static_cast<double>(fine_steps);
      double x = x0;
      for (double y : inc) x = x - hf * x + y;
      for (std::size_t j = 0; j < steps.size(); ++j) {
        const std::size_t N = steps[j], r = fine_steps / N;
        const double h = T / static_cast<double>(N);
        double y = x0;
        for (std::size_t n = 0; n < N; ++n) {
          double dw = 0.0;
          for (std::size_t k = 0; k < r; ++k) dw += inc[n * r + k];
          y = y - h * y + dw;
        }
        diffs[j][m] = x - y;
      }
    }
  });

  WeakErrorParams w;
  w.T = T;
  w.p = 2.0;
  w.q = 2.0;
  w.L0 = 1.0;
  w.L1 = 1.0;
  w.C = 0.0;
  w.c = 1.0;
  w.trace_bstar_b = 1.0;

  WeakStudy study;
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const McEstimate e = mean_and_error(diffs[j]);
    const double h = T / static_cast<double>(steps[j]);
    WeakRow row{steps[j], std::abs(e.estimate), e.std_error, weak_error_bound(w, x0, 0.0, h), false};
    row.dominated = row.estimate - 3.0 * row.std_error <= row.bound;
    study.rows.push_back(row);
    lx.push_back(std::log(static_cast<double>(steps[j])));
    ly.push_back(std::log(row.estimate));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  study.slope = sxx > 0.0 ? sxy / sxx : kNaN;
  return study;
}

McLpRow mc_lp_heat_study(std::size_t N, std::size_t M, std::size_t replicates,
                         std::size_t samples, std::uint64_t seed) {
  if (replicates < 2) throw DomainError("need at least two replicates");
  const TestProblem tp = heat_relu_problem(1);
  const PdeProblem& pr = tp.problem;
  const UniformSpaceTimeMeasure nu(pr.params.T, pr.alpha, pr.beta, 1);
  const UniformGrid grid(pr.params.T, N);
  std::vector<double> mse(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    const std::uint64_t rs = seed + 0x9E3779B97F4A7C15ull * (r + 1);
    const BrownianGrid noise = solution_noise(pr, Budget{N, M, 1.0}, rs);
    // Zero drift: Y_{tau_n} = x + W_n.
    std::vector<double> w((N + 1) * M, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t n = 0; n < N; ++n) w[m * (N + 1) + n + 1] = w[m * (N + 1) + n] + noise.increment(m, n)[0];
    }
    std::vector<double> sq(samples);
    parallel_for(samples, [&](std::size_t begin, std::size_t end) {
      double x[1];
      double t = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        nu.sample(rs, k, t, x);
        const auto [n, rho] = locate(grid, t);
        double sum = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
          const double lo = w[m * (N + 1) + n], hi = w[m * (N + 1) + n + 1];
          const double y = x[0] + (rho == 0.0 ? lo : rho == 1.0 ? hi : lo * (1.0 - rho) + hi * rho);
          sum += std::max(y, 0.0);
        }
        const double diff = sum / static_cast<double>(M) - tp.exact(t, x);
        sq[k] = diff * diff;
      }
    });
    mse[r] = mean_and_error(sq).estimate;
  }
  McLpRow row{N, M, 0.0, 0.0, 0.0, false};
  row.estimate = sqrt_of_mean(mean_and_error(mse), row.std_error);
  row.bound = mc_lp_error_bound(pr.params, 1, static_cast<double>(N), static_cast<double>(M), 1.0);
  row.dominated = row.estimate - 3.0 * row.std_error <= row.bound;
  return row;
}

CalculusStudy calculus_study(std::size_t instances, std::uint64_t seed) {
  CalculusStudy st;
  st.instances = instances;
  auto check = [&](bool ok, std::size_t i, const std::string& what) {
    ++st.checks;
    if (!ok) {
      ++st.failures;
      if (st.messages.size() < 20) st.messages.push_back("instance " + std::to_string(i) + ": " + what);
    }
  };
  for (std::size_t i = 0; i < instances; ++i) {
    CounterStream s(seed, static_cast<std::uint32_t>(i), 0, StreamTag::kTest);
    auto pick = [&](std::size_t lo, std::size_t hi) {
      return lo + static_cast<std::size_t>(s.uniform() * static_cast<double>(hi - lo + 1));
    };

    // Composition against nested evaluation.
    const std::size_t in = pick(1, 5), mid = pick(1, 5), out = pick(1, 4);
    const Network g = random_net(s, in, mid, pick(1, 4), false);
    const Network f = random_net(s, mid, out, pick(1, 4), false);
    const Network fg = compose(f, g);
    const Network fig = concat_with_identity(f, g);
    check(fg.length() == f.length() + g.length() - 1, i, "compose length");
    check(fig.length() == f.length() + g.length(), i, "concatenation length");
    std::vector<std::size_t> dims = g.dims();
    dims.pop_back();
    const auto fd = f.dims();
    dims.insert(dims.end(), fd.begin() + 1, fd.end());
    check(fg.dims() == dims && fg.param_count() == formula_params(dims), i, "compose dims/params");
    for (int r = 0; r < 5; ++r) {
      std::vector<double> x(in);
      for (double& v : x) v = 20.0 * s.uniform() - 10.0;
      const auto nested = realize(f, realize(g, x));
      const auto direct = realize(fg, x);
      const auto concat = realize(fig, x);
      double scale = 1.0, err = 0.0, err2 = 0.0;
      for (std::size_t j = 0; j < out; ++j) {
        scale = std::max(scale, std::abs(nested[j]));
        err = std::max(err, std::abs(direct[j] - nested[j]));
        err2 = std::max(err2, std::abs(concat[j] - nested[j]));
      }
      check(err <= 1e-10 * scale, i, "compose realization");
      check(err2 <= 1e-10 * scale, i, "concatenation realization");
    }

    // Associativity, including single-layer middle factors.
    const std::size_t a0 = pick(1, 4), a1 = pick(1, 4), a2 = pick(1, 4), a3 = pick(1, 4);
    const Network h3 = random_net(s, a0, a1, pick(1, 3), true);
    const Network g3 = random_net(s, a1, a2, pick(1, 3), true);
    const Network f3 = random_net(s, a2, a3, pick(1, 3), true);
    check(compose(compose(f3, g3), h3) == compose(f3, compose(g3, h3)), i, "associativity");

    // Identity networks.
    const std::size_t d = pick(1, 16);
    const Network id = identity_net(d);
    std::vector<double> x(d);
    for (double& v : x) v = 200.0 * s.uniform() - 100.0;
    check(realize(id, x) == x, i, "identity realization");
    check(id.param_count() == 4 * d * d + 3 * d && id.dims() == std::vector<std::size_t>{d, 2 * d, d},
          i, "identity dims/params");

    // Weighted averages.
    const Network u = random_net(s, in, 1, pick(1, 3), false);
    const Network v = random_net(s, in, 1, pick(1, 3), false);
    const double wu = 2.0 * s.uniform() - 1.0, wv = 2.0 * s.uniform() - 1.0;
    const Network both[] = {u, v};
    const double weights[] = {wu, wv};
    const Network avg = average_nets(both, weights);
    std::vector<double> xi(in);
    for (double& e : xi) e = 20.0 * s.uniform() - 10.0;
    const double expect = wu * realize(u, xi)[0] + wv * realize(v, xi)[0];
    check(std::abs(realize(avg, xi)[0] - expect) <= 1e-12 * std::max(1.0, std::abs(expect)), i,
          "average linearity");
  }
  return st;
}

SpaceTimeField mc_average_field(const PdeProblem& problem, const BrownianGrid& noise,
                                std::size_t M) {
  if (M > noise.paths()) throw ShapeError("not enough Brownian paths");
  const VectorField drift = network_field(problem.drift);
  const ScalarField f0 = network_scalar(problem.initial);
  return [&noise, drift, f0, M](double t, std::span<const double> x) {
    std::vector<double> y(x.size());
    double sum = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      interpolate_into(euler_grid(x, drift, noise, m), t, y);
      sum += f0(y);
    }
    return sum / static_cast<double>(M);
  };
}

BuilderCase builder_case(const TestProblem& tp, std::size_t N, std::size_t M, double delta,
                         std::size_t points, std::uint64_t seed) {
  const PdeProblem& pr = tp.problem;
  const std::size_t d = pr.dim();
  const double T = pr.params.T;
  const Budget budget{N, M, delta};
  const BrownianGrid noise = solution_noise(pr, budget, seed);
  const SolutionNet sol = build_mc_average_net(pr, budget, noise);
  const UniformGrid grid = noise.grid();

  BuilderCase bc{pr.name, d, N, M, delta, points, 0.0, 0.0, 0, sol.net.param_count(),
                 0.0, false, 0, 0, 0, 0};
  bc.log10_param_bound = dnn_param_bound_log(pr.params, d, static_cast<double>(N),
                                             static_cast<double>(M), delta).log10;
  bc.params_ok = std::log10(static_cast<double>(bc.param_count)) <= bc.log10_param_bound;

  std::vector<std::vector<double>> wmax(M);
  for (std::size_t m = 0; m < M; ++m) wmax[m] = running_max_partial_sums(noise.path(m), d);

  const UniformSpaceTimeMeasure nu(T, pr.alpha, pr.beta, d);
  const VectorField drift = network_field(pr.drift);
  const ScalarField f0 = network_scalar(pr.initial);

  // (a) deviation of the network from the direct Monte Carlo average.
  std::vector<double> dev(points), ratio(points);
  parallel_for(points, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(d), y(d), h2(M), h3(M);
    Workspace ws;
    double out[1];
    double t = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      nu.sample(seed, k, t, x);
      const double xn = norm(x);
      double sum = 0.0;
      for (std::size_t m = 0; m < M; ++m) {
        interpolate_into(euler_grid(x, drift, noise, m), t, y);
        sum += f0(y);
        h2[m] = aux_h(2.0, xn, tp.drift_C, tp.drift_c, T, wmax[m][N]);
        h3[m] = aux_h(3.0, xn, tp.drift_C, tp.drift_c, T, wmax[m][N]);
      }
      const double direct = sum / static_cast<double>(M);
      const auto in = space_time_input(t, x);
      realize_into(sol.net, in, out, ws);
      dev[k] = std::abs(out[0] - direct);
      const double bound =
          mc_sum_error_bound(delta, d, tp.init_exponent, tp.init_lipschitz, M, h2, h3);
      ratio[k] = bound > 0.0 ? dev[k] / bound : (dev[k] > 0.0 ? kNaN : 0.0);
    }
  });
  for (std::size_t k = 0; k < points; ++k) {
    bc.max_deviation = std::max(bc.max_deviation, dev[k]);
    if (!(ratio[k] <= 1.0)) ++bc.deviation_violations;
    if (ratio[k] > bc.max_ratio) bc.max_ratio = ratio[k];
  }

  // (c) emulation error, growth and adaptedness of single-path networks.
  const std::size_t checked_paths = std::min<std::size_t>(M, 4);
  const std::size_t per_path = std::max<std::size_t>(points / 10, 10);
  for (std::size_t m = 0; m < checked_paths; ++m) {
    const auto y = noise.path(m);
    const EulerNet e = build_euler_net(pr.drift, y, grid, delta);
    CounterStream s(seed, static_cast<std::uint32_t>(m), 1, StreamTag::kTest);
    const std::size_t cut = N >= 2 ? 1 + m % (N - 1) : 0;
    std::vector<double> z(y.begin(), y.end());
    for (std::size_t j = cut * d; j < z.size(); ++j) z[j] = std::sqrt(grid.step()) * s.normal() * 3.0;
    const EulerNet ez = build_euler_net(pr.drift, z, grid, delta);

    std::vector<double> x(d), yt(d);
    double t = 0.0;
    for (std::size_t k = 0; k < per_path; ++k) {
      nu.sample(seed ^ 0xA5A5A5A5ull, m * per_path + k, t, x);
      const SchemeState st = euler_grid(x, drift, grid, y);
      interpolate_into(st, t, yt);
      const auto in = space_time_input(t, x);
      const auto psi = realize(e.net, in);
      const auto [n, rho] = locate(grid, t);
      (void)rho;
      const double xn = norm(x);
      const double gn = growth_g(xn, tp.drift_C, tp.drift_c, grid.time(n), wmax[m][n]);
      const double gn1 = growth_g(xn, tp.drift_C, tp.drift_c, grid.time(n + 1), wmax[m][n + 1]);
      std::vector<double> diff(d);
      for (std::size_t i = 0; i < d; ++i) diff[i] = psi[i] - yt[i];
      bc.euler_checks += 2;
      if (!(norm(diff) <= euler_emulation_error_bound(delta, d, 3.0, gn, gn1))) ++bc.euler_violations;
      if (!(norm(psi) <= euler_emulation_growth_bound(d, gn, gn1))) ++bc.euler_violations;

      if (cut > 0) {
        const double tc = k == 0 ? grid.time(cut) : grid.time(cut) * (t / T);
        const auto early = space_time_input(tc, x);
        const auto a = realize(e.net, early);
        const auto b = realize(ez.net, early);
        ++bc.adapted_checks;
        if (std::memcmp(a.data(), b.data(), d * sizeof(double)) != 0) ++bc.adapted_violations;
      }
    }
  }
  return bc;
}

VerifyResult verify_solution(const SolutionNet& sol, const TestProblem& tp, std::size_t samples,
                             std::uint64_t seed) {
  const PdeProblem& pr = tp.problem;
  const Provenance& prov = sol.provenance;
  if (prov.problem_hash != problem_hash(pr)) {
    throw ParseError("$.provenance.problem_hash", "network was built for a different problem");
  }
  if (sol.net.in_dim() != pr.dim() + 1 || sol.net.out_dim() != 1) {
    throw ShapeError("network dimensions do not match the problem");
  }
  const UniformSpaceTimeMeasure nu(pr.params.T, pr.alpha, pr.beta, pr.dim());
  const Network& net = sol.net;
  const SpaceTimeField psi = [&net](double t, std::span<const double> x) {
    return realize(net, space_time_input(t, x))[0];
  };
  VerifyResult r{};
  const LpEstimate exact = lp_error_estimate(psi, tp.exact, nu, pr.params.p, samples, seed);
  r.lp_vs_exact = exact.value;
  r.lp_vs_exact_se = exact.std_error;
  const BrownianGrid noise = solution_noise(pr, prov.budget, prov.seed);
  r.lp_vs_mc_average =
      lp_error(psi, mc_average_field(pr, noise, prov.budget.M), nu, pr.params.p, samples, seed);
  r.dnn_error_bound = dnn_error_bound(pr.params, pr.dim(), static_cast<double>(prov.budget.N),
                                      static_cast<double>(prov.budget.M), prov.budget.delta, 1.0);
  r.pass = r.lp_vs_exact <= r.dnn_error_bound;
  return r;
}

std::vector<BoundsRow> bounds_report(std::uint64_t seed) {
  std::vector<BoundsRow> rows;
  auto add = [&](std::string name, std::string label, std::string inputs, double value,
                 double empirical) {
    rows.push_back({std::move(name), std::move(label), std::move(inputs), value, empirical,
                    std::isnan(empirical) ? kNaN : value - empirical});
  };

  {
    // (E|X|^4)^{1/4} for X ~ N(0, I_2).
    const std::size_t n = 100000;
    std::vector<double> v(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        CounterStream s(seed, static_cast<std::uint32_t>(k), 7, StreamTag::kTest);
        const double a = s.normal(), b = s.normal();
        v[k] = (a * a + b * b) * (a * a + b * b);
      }
    });
    add("gaussian_moment_bound", "gaussian-moments", "p=4;trace=2", gaussian_moment_bound(4.0, 2.0),
        std::pow(mean_and_error(v).estimate, 0.25));
  }
  {
    const StrongMidpointResult r = strong_midpoint_study(20000, 8, 2, seed);
    add("interp_error_bound", "interpolated-euler-iii", "p=2;h=" + fmt(r.h) + ";trace=1", r.expected,
        r.rms);
  }
  for (const MomentRow& m : moment_study({1, 2}, 2000, 16, seed).rows) {
    add("euler_moment_bound", "interpolated-euler-iv",
        m.problem + ";d=" + std::to_string(m.d) + ";q=" + fmt(m.q), m.bound, m.estimate);
  }
  for (const WeakRow& w : weak_error_study({2, 4, 8}, 2000, 512, seed).rows) {
    add("weak_error_bound", "perturbed-euler-weak", "ou;N=" + std::to_string(w.N), w.bound, w.estimate);
  }
  {
    const McLpRow r = mc_lp_heat_study(16, 16, 4, 500, seed);
    add("mc_lp_error_bound", "mc-euler-lp-ii", "heat_relu;d=1;N=16;M=16", r.bound, r.estimate);
  }
  add("frak_D", "euler-emulation-size", "eps=1;q=3", frak_D(1.0, 3.0), kNaN);
  {
    const TestProblem tp = heat_relu_problem(1);
    const RegularityParams& P = tp.problem.params;
    const std::string in = "heat_relu;d=1;N=8;M=64;delta=2^-8";
    add("dnn_error_bound", "dnn-error-ii", in, dnn_error_bound(P, 1, 8, 64, 0x1p-8, 1.0), kNaN);
    add("dnn_param_bound", "dnn-error-iii", in, dnn_param_bound(P, 1, 8, 64, 0x1p-8), kNaN);
  }
  return rows;
}

}  // namespace kolmonet
