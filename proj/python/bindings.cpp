#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "kolmonet/bounds.hpp"
#include "kolmonet/builder.hpp"
#include "kolmonet/calculus.hpp"
#include "kolmonet/errors.hpp"
#include "kolmonet/reference.hpp"
#include "kolmonet/serialize.hpp"
#include "kolmonet/studies.hpp"

namespace py = pybind11;
using namespace kolmonet;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Accepts a single input of shape (d,) or a batch of shape (n, d).
Array realize_array(const Network& net, const Array& x) {
  const std::size_t d = net.in_dim();
  if (x.ndim() == 1) {
    if (static_cast<std::size_t>(x.shape(0)) != d) throw ShapeError("input has the wrong width");
    const auto y = realize(net, std::span<const double>(x.data(), d));
    Array out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(y.size())});
    std::copy(y.begin(), y.end(), out.mutable_data());
    return out;
  }
  if (x.ndim() != 2 || static_cast<std::size_t>(x.shape(1)) != d) {
    throw ShapeError("expected an array of shape (n, in_dim)");
  }
  const std::size_t n = static_cast<std::size_t>(x.shape(0));
  const auto y = realize_batch(net, std::span<const double>(x.data(), n * d), n);
  Array out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(net.out_dim())});
  std::copy(y.begin(), y.end(), out.mutable_data());
  return out;
}

py::dict provenance_dict(const Provenance& p) {
  py::dict bounds;
  for (const auto& [name, v] : p.bounds) bounds[py::str(name)] = v.log10;
  py::dict out;
  out["problem"] = p.problem;
  out["problem_hash"] = p.problem_hash;
  out["seed"] = p.seed;
  out["N"] = p.budget.N;
  out["M"] = p.budget.M;
  out["delta"] = p.budget.delta;
  out["q"] = p.q;
  out["bounds_log10"] = bounds;
  return out;
}

}  // namespace

PYBIND11_MODULE(_kolmonet, m) {
  m.doc() = "ReLU network construction for Kolmogorov PDEs";

  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PlannerOverflow>(m, "PlannerOverflow", PyExc_OverflowError);

  py::class_<Network>(m, "Network")
      .def_property_readonly("dims", &Network::dims)
      .def_property_readonly("length", &Network::length)
      .def_property_readonly("in_dim", &Network::in_dim)
      .def_property_readonly("out_dim", &Network::out_dim)
      .def_property_readonly("param_count", &Network::param_count)
      .def("__call__", &realize_array, py::arg("x"))
      .def("to_json", [](const Network& n) { return serialize(n); })
      .def_static("from_json", [](const std::string& s) { return deserialize_network(s); })
      .def("__eq__", [](const Network& a, const Network& b) { return a == b; })
      .def("__repr__", [](const Network& n) {
        std::string s = "Network(dims=[";
        for (std::size_t i = 0; i < n.dims().size(); ++i) s += (i ? ", " : "") + std::to_string(n.dims()[i]);
        return s + "])";
      });

  m.def("identity_net", &identity_net, py::arg("d"));
  m.def("compose", &compose, py::arg("f"), py::arg("g"));
  m.def("scale_output", &scale_output, py::arg("f"), py::arg("factor"));
  m.def("parallel_disjoint", [](const std::vector<Network>& n) { return parallel_disjoint(n); });
  m.def("average_nets", [](const std::vector<Network>& n, const std::vector<double>& w) {
    return average_nets(n, w);
  }, py::arg("nets"), py::arg("weights"));
  m.def("product_net", [](double eps, double range_a, double range_b) {
    return product_net(eps, range_a, range_b).net;
  }, py::arg("eps"), py::arg("range_a"), py::arg("range_b"));
  m.def("square_net", [](double eps, double range) { return square_net(eps, range).net; },
        py::arg("eps"), py::arg("range"));

  py::class_<RegularityParams>(m, "RegularityParams")
      .def(py::init([](double T, double kappa, double eta, double p) {
             RegularityParams r{T, kappa, eta, p};
             r.validate();
             return r;
           }),
           py::arg("T") = 1.0, py::arg("kappa") = 1.0, py::arg("eta") = 1.0, py::arg("p") = 2.0)
      .def_readonly("T", &RegularityParams::T)
      .def_readonly("kappa", &RegularityParams::kappa)
      .def_readonly("eta", &RegularityParams::eta)
      .def_readonly("p", &RegularityParams::p);

  m.def("frak_D", &frak_D, py::arg("eps"), py::arg("q") = 3.0);
  m.def("dnn_error_bound_log10", [](const RegularityParams& p, std::size_t d, double N, double M,
                                    double delta) { return dnn_error_bound_log(p, d, N, M, delta, 1.0).log10; });
  m.def("dnn_param_bound_log10", [](const RegularityParams& p, std::size_t d, double N, double M,
                                    double delta) { return dnn_param_bound_log(p, d, N, M, delta).log10; });
  m.def("mc_lp_error_bound_log10", [](const RegularityParams& p, std::size_t d, double N, double M) {
    return mc_lp_error_bound_log(p, d, N, M, 1.0).log10;
  });
  m.def("plan_budget", [](const RegularityParams& p, std::size_t d, double eps) {
    const BudgetPlan plan = plan_budget(p, d, eps);
    py::dict out;
    out["log10_N"] = plan.N.log10;
    out["log10_M"] = plan.M.log10;
    out["log10_delta"] = plan.log10_delta;
    out["cost_exponent"] = plan.cost_exponent;
    out["log10_cost"] = plan.cost.log10;
    out["representable"] = plan.budget.has_value();
    return out;
  }, py::arg("params"), py::arg("d"), py::arg("eps"));

  m.def("problem_names", &problem_names);
  m.def("problem_params", [](const std::string& name, std::size_t d) {
    return find_problem(name, d).problem.params;
  }, py::arg("name"), py::arg("d"));
  m.def("exact_solution", [](const std::string& name, std::size_t d, double t, const std::vector<double>& x) {
    return find_problem(name, d).exact(t, x);
  }, py::arg("name"), py::arg("d"), py::arg("t"), py::arg("x"));

  py::class_<SolutionNet>(m, "Solution")
      .def_property_readonly("network", [](const SolutionNet& s) { return s.net; })
      .def_property_readonly("provenance", [](const SolutionNet& s) { return provenance_dict(s.provenance); })
      .def("__call__", [](const SolutionNet& s, const Array& x) { return realize_array(s.net, x); })
      .def("to_json", [](const SolutionNet& s) { return serialize(s); })
      .def_static("from_json", [](const std::string& s) { return deserialize_solution(s); });

  m.def("solve", [](const std::string& name, std::size_t d, std::size_t N, std::size_t M, double delta,
                    std::uint64_t seed) {
    const TestProblem tp = find_problem(name, d);
    py::gil_scoped_release release;
    return solve(tp.problem, 1.0, seed, Budget{N, M, delta});
  }, py::arg("problem"), py::arg("d"), py::arg("N"), py::arg("M"), py::arg("delta"), py::arg("seed"));

  m.def("verify", [](const SolutionNet& sol, std::size_t d, std::size_t samples, std::uint64_t seed) {
    const TestProblem tp = find_problem(sol.provenance.problem, d);
    const VerifyResult v = verify_solution(sol, tp, samples, seed);
    py::dict out;
    out["lp_error_vs_exact"] = v.lp_vs_exact;
    out["lp_error_vs_mc_average"] = v.lp_vs_mc_average;
    out["dnn_error_bound"] = v.dnn_error_bound;
    out["pass"] = v.pass;
    return out;
  }, py::arg("solution"), py::arg("d"), py::arg("samples") = 10000, py::arg("seed") = 1);
}
