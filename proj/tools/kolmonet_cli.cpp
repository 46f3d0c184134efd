// Batch driver: budget planning, network construction, verification and studies.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "kolmonet/bounds.hpp"
#include "kolmonet/builder.hpp"
#include "kolmonet/errors.hpp"
#include "kolmonet/reference.hpp"
#include "kolmonet/report.hpp"
#include "kolmonet/serialize.hpp"
#include "kolmonet/studies.hpp"

namespace {

using namespace kolmonet;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

struct PlanOpts {
  std::size_t d = 1;
  double eps = 1.0, kappa = 1.0, eta = 1.0, T = 1.0, p = 2.0;
};

struct BuildOpts {
  std::string problem = "heat_relu";
  std::size_t d = 1;
  std::optional<std::size_t> N, M;
  std::optional<double> delta;
  double eps = 1.0;
  std::uint64_t seed = 1;
  std::string out;
};

struct VerifyOpts {
  std::string in;
  std::string problem = "heat_relu";
  std::size_t d = 1;
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
};

struct StudyOpts {
  std::string which;
  std::uint64_t seed = 2024;
  std::string out;
};

// Writes to the file named by `path`, or to stdout when it is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void print_magnitude(const char* name, const Magnitude& m) {
  std::cout << name << "_log10 = " << format_real(m.log10) << '\n';
}

int run_plan(const PlanOpts& o) {
  RegularityParams params{o.T, o.kappa, o.eta, o.p};
  const BudgetPlan plan = plan_budget(params, o.d, o.eps);
  print_magnitude("N", plan.N);
  print_magnitude("M", plan.M);
  std::cout << "delta_log10 = " << format_real(plan.log10_delta) << '\n';
  if (plan.budget) {
    std::cout << "N = " << plan.budget->N << '\n'
              << "M = " << plan.budget->M << '\n'
              << "delta = " << format_real(plan.budget->delta) << '\n';
  } else {
    std::cout << "budget = not representable as integers\n";
  }
  std::cout << "cost_exponent = " << format_real(plan.cost_exponent) << '\n';
  print_magnitude("cost", plan.cost);
  print_magnitude("cost_constant", plan.cost_constant);
  std::cout << "constant_log10 = " << format_real(plan.log10_constant) << '\n';
  return kOk;
}

int run_build(const BuildOpts& o) {
  const TestProblem tp = find_problem(o.problem, o.d);
  std::optional<Budget> budget;
  if (o.N || o.M || o.delta) {
    if (!(o.N && o.M && o.delta)) throw DomainError("--N, --M and --delta must be given together");
    budget = Budget{*o.N, *o.M, *o.delta};
  }
  const SolutionNet sol = solve(tp.problem, o.eps, o.seed, budget);
  write_text(o.out, serialize(sol));
  const double params = static_cast<double>(sol.net.param_count());
  const double bound_log = sol.provenance.bounds.at("dnn_param_bound").log10;
  std::cout << "param_count = " << sol.net.param_count() << '\n'
            << "dnn_param_bound_log10 = " << format_real(bound_log) << '\n'
            << "ratio_log10 = " << format_real(std::log10(params) - bound_log) << '\n';
  return kOk;
}

int run_verify(const VerifyOpts& o) {
  const SolutionNet sol = deserialize_solution(read_text(o.in));
  const TestProblem tp = find_problem(o.problem, o.d);
  const VerifyResult r = verify_solution(sol, tp, o.samples, o.seed);
  write_verify_csv(std::cout, r);
  return r.pass ? kOk : kViolation;
}

int run_study(const StudyOpts& o) {
  Output out(o.out);
  std::ostream& os = out.stream();
  if (o.which == "euler") {
    const StrongMidpointResult strong = strong_midpoint_study(100000, 8, 2, o.seed);
    write_strong_csv(os, strong);
    const MomentStudy moments = moment_study({1, 2, 5}, 20000, 16, o.seed);
    write_moment_csv(os, moments);
    bool ok = strong.pass && moments.growth_violations == 0;
    for (const MomentRow& r : moments.rows) ok = ok && r.pass;
    return ok ? kOk : kViolation;
  }
  if (o.which == "weak") {
    const WeakStudy weak = weak_error_study({2, 4, 8, 16, 32, 64}, 20000, 4096, o.seed);
    write_weak_csv(os, weak);
    os << "slope," << format_real(weak.slope) << '\n';
    bool ok = weak.slope <= -0.5;
    for (const WeakRow& r : weak.rows) ok = ok && r.dominated;
    return ok ? kOk : kViolation;
  }
  if (o.which == "calculus") {
    const CalculusStudy c = calculus_study(500, o.seed);
    write_calculus_csv(os, c);
    for (const std::string& m : c.messages) std::cerr << m << '\n';
    return c.failures == 0 ? kOk : kViolation;
  }
  if (o.which == "bounds") {
    const auto rows = bounds_report(o.seed);
    write_bounds_csv(os, rows);
    bool ok = true;
    for (const BoundsRow& r : rows) ok = ok && !(r.slack < 0.0);
    return ok ? kOk : kViolation;
  }
  throw DomainError("unknown study '" + o.which + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive ReLU approximations of Kolmogorov PDE solutions"};
  app.set_config("--config", "", "Read options from a TOML/INI file (flags take precedence)");
  app.require_subcommand(1);

  PlanOpts plan;
  auto* plan_cmd = app.add_subcommand("plan", "Evaluate the budget formulas");
  plan_cmd->add_option("--d", plan.d, "Dimension")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--eps", plan.eps, "Target accuracy in (0, 1]");
  plan_cmd->add_option("--kappa", plan.kappa, "Growth exponent");
  plan_cmd->add_option("--eta", plan.eta, "Measure constant");
  plan_cmd->add_option("--T", plan.T, "Horizon");
  plan_cmd->add_option("--p", plan.p, "Integrability exponent");

  BuildOpts build;
  auto* build_cmd = app.add_subcommand("build", "Construct a solution network");
  build_cmd->add_option("--problem", build.problem, "Problem name");
  build_cmd->add_option("--d", build.d, "Dimension")->check(CLI::PositiveNumber);
  build_cmd->add_option("--N", build.N, "Euler steps");
  build_cmd->add_option("--M", build.M, "Monte Carlo samples");
  build_cmd->add_option("--delta", build.delta, "Product accuracy");
  build_cmd->add_option("--eps", build.eps, "Target accuracy when no budget is given");
  build_cmd->add_option("--seed", build.seed, "Seed of the Brownian realization");
  build_cmd->add_option("--out", build.out, "Output file")->required();

  VerifyOpts verify;
  auto* verify_cmd = app.add_subcommand("verify", "Measure the L^p error of a network");
  verify_cmd->add_option("--in", verify.in, "Network file")->required();
  verify_cmd->add_option("--problem", verify.problem, "Problem name");
  verify_cmd->add_option("--d", verify.d, "Dimension")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--samples", verify.samples, "Space-time samples")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify.seed, "Seed of the space-time samples");

  StudyOpts study;
  auto* study_cmd = app.add_subcommand("study", "Run a property or convergence study");
  study_cmd->add_option("which", study.which, "euler | weak | calculus | bounds")
      ->required()
      ->check(CLI::IsMember({"euler", "weak", "calculus", "bounds"}));
  study_cmd->add_option("--seed", study.seed, "Seed");
  study_cmd->add_option("--out", study.out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*plan_cmd) return run_plan(plan);
    if (*build_cmd) return run_build(build);
    if (*verify_cmd) return run_verify(verify);
    if (*study_cmd) return run_study(study);
  } catch (const ParseError& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return kInputError;
  } catch (const PlannerOverflow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
