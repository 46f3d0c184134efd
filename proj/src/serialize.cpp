#include "kolmonet/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "kolmonet/errors.hpp"

namespace kolmonet {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "kolmonet-network";

json network_json(const Network& net) {
  json doc;
  doc["format"] = kFormatName;
  doc["version"] = kFormatVersion;
  doc["dims"] = net.dims();
  json layers = json::array();
  for (const Layer& layer : net.layers()) {
    const WeightMatrix& w = layer.weight;
    json entry;
    const double dense_size = static_cast<double>(w.rows()) * static_cast<double>(w.cols());
    if (3.0 * static_cast<double>(w.nnz()) < dense_size) {
      entry["weight_csr"] = {{"row_ptr", w.row_ptr()}, {"col", w.col_idx()}, {"val", w.values()}};
    } else {
      entry["weight"] = w.to_dense();
    }
    entry["bias"] = layer.bias;
    layers.push_back(std::move(entry));
  }
  doc["layers"] = std::move(layers);
  return doc;
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + "." + key, "missing field");
  return *it;
}

template <class T>
std::vector<T> number_array(const json& value, const std::string& where) {
  if (!value.is_array()) throw ParseError(where, "expected an array");
  std::vector<T> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    const json& v = value[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ParseError(at, "expected a number");
      out.push_back(v.get<double>());
    } else {
      if (!v.is_number_unsigned()) throw ParseError(at, "expected a nonnegative integer");
      const auto raw = v.get<std::uint64_t>();
      if (raw > std::numeric_limits<T>::max()) throw ParseError(at, "integer out of range");
      out.push_back(static_cast<T>(raw));
    }
  }
  return out;
}

Network network_from_json(const json& doc) {
  const json& format = field(doc, "format", "$");
  if (!format.is_string() || format.get<std::string>() != kFormatName) {
    throw ParseError("$.format", "not a kolmonet network document");
  }
  const json& version = field(doc, "version", "$");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    throw ParseError("$.version", "unsupported format version");
  }
  const auto dims = number_array<std::size_t>(field(doc, "dims", "$"), "$.dims");
  const json& layers = field(doc, "layers", "$");
  if (!layers.is_array()) throw ParseError("$.layers", "expected an array");
  if (dims.size() < 2) throw ParseError("$.dims", "need at least two entries");
  if (layers.size() + 1 != dims.size()) {
    throw ParseError("$.dims", "length does not match the number of layers");
  }
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (dims[k] == 0) throw ParseError("$.dims[" + std::to_string(k) + "]", "must be positive");
  }

  std::vector<Layer> out;
  out.reserve(layers.size());
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string at = "$.layers[" + std::to_string(k) + "]";
    const json& entry = layers[k];
    const std::size_t rows = dims[k + 1], cols = dims[k];
    WeightMatrix w;
    if (entry.is_object() && entry.contains("weight_csr")) {
      const json& csr = entry["weight_csr"];
      const std::string cat = at + ".weight_csr";
      auto row_ptr = number_array<std::size_t>(field(csr, "row_ptr", cat), cat + ".row_ptr");
      auto col = number_array<std::uint32_t>(field(csr, "col", cat), cat + ".col");
      auto val = number_array<double>(field(csr, "val", cat), cat + ".val");
      try {
        w = WeightMatrix::from_csr(rows, cols, std::move(row_ptr), std::move(col), std::move(val));
      } catch (const std::exception& e) {
        throw ParseError(cat, e.what());
      }
    } else {
      const auto dense = number_array<double>(field(entry, "weight", at), at + ".weight");
      if (dense.size() != rows * cols) {
        throw ParseError(at + ".weight", "expected " + std::to_string(rows * cols) +
                                             " entries for a " + std::to_string(rows) + "x" +
                                             std::to_string(cols) + " matrix");
      }
      w = WeightMatrix::from_dense(rows, cols, dense);
    }
    auto bias = number_array<double>(field(entry, "bias", at), at + ".bias");
    if (bias.size() != rows) throw ParseError(at + ".bias", "length does not match dims");
    out.emplace_back(std::move(w), std::move(bias));
  }
  return Network(std::move(out));
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
}

json bound_json(const BoundValue& b) {
  const double v = b.value();
  json out;
  out["value"] = std::isfinite(v) ? json(v) : json(nullptr);
  out["log10"] = b.log10;
  return out;
}

std::string dump(const json& doc) { return doc.dump() + "\n"; }

}  // namespace

std::string serialize(const Network& net) { return dump(network_json(net)); }

Network deserialize_network(std::string_view text) { return network_from_json(parse_document(text)); }

std::string serialize(const SolutionNet& sol) {
  json doc = network_json(sol.net);
  const Provenance& p = sol.provenance;
  json prov;
  prov["problem"] = p.problem;
  prov["problem_hash"] = p.problem_hash;
  prov["seed"] = p.seed;
  prov["N"] = p.budget.N;
  prov["M"] = p.budget.M;
  prov["delta"] = p.budget.delta;
  prov["q"] = p.q;
  json bounds = json::object();
  for (const auto& [name, b] : p.bounds) bounds[name] = bound_json(b);
  prov["bound_values"] = std::move(bounds);
  doc["provenance"] = std::move(prov);
  return dump(doc);
}

SolutionNet deserialize_solution(std::string_view text) {
  const json doc = parse_document(text);
  Network net = network_from_json(doc);
  const json& prov = field(doc, "provenance", "$");
  const std::string at = "$.provenance";
  Provenance p;
  auto get_string = [&](const char* key) {
    const json& v = field(prov, key, at);
    if (!v.is_string()) throw ParseError(at + "." + key, "expected a string");
    return v.get<std::string>();
  };
  auto get_unsigned = [&](const char* key) {
    const json& v = field(prov, key, at);
    if (!v.is_number_unsigned()) throw ParseError(at + "." + key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  };
  auto get_number = [&](const char* key) {
    const json& v = field(prov, key, at);
    if (!v.is_number()) throw ParseError(at + "." + key, "expected a number");
    return v.get<double>();
  };
  p.problem = get_string("problem");
  p.problem_hash = get_string("problem_hash");
  p.seed = get_unsigned("seed");
  p.budget.N = get_unsigned("N");
  p.budget.M = get_unsigned("M");
  p.budget.delta = get_number("delta");
  p.q = get_number("q");
  const json& bounds = field(prov, "bound_values", at);
  if (!bounds.is_object()) throw ParseError(at + ".bound_values", "expected an object");
  for (auto it = bounds.begin(); it != bounds.end(); ++it) {
    const std::string bat = at + ".bound_values." + it.key();
    const json& lg = field(it.value(), "log10", bat);
    if (!lg.is_number()) throw ParseError(bat + ".log10", "expected a number");
    p.bounds[it.key()] = BoundValue{lg.get<double>()};
  }
  return SolutionNet{std::move(net), std::move(p)};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string problem_hash(const PdeProblem& problem) {
  json doc;
  doc["drift"] = network_json(problem.drift);
  doc["initial"] = network_json(problem.initial);
  std::vector<double> a(problem.a.data(), problem.a.data() + problem.a.size());
  doc["a"] = a;
  doc["params"] = {problem.params.T, problem.params.kappa, problem.params.eta, problem.params.p};
  doc["box"] = {problem.alpha, problem.beta};
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace kolmonet
