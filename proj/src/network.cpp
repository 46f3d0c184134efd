#include "kolmonet/network.hpp"

#include <algorithm>
#include <string>

#include "kolmonet/errors.hpp"
#include "kolmonet/parallel.hpp"

namespace kolmonet {

Layer::Layer(WeightMatrix w, std::vector<double> b) : weight(std::move(w)), bias(std::move(b)) {
  if (weight.rows() != bias.size()) {
    throw ShapeError("layer weight has " + std::to_string(weight.rows()) +
                     " rows but bias has length " + std::to_string(bias.size()));
  }
  if (weight.rows() == 0 || weight.cols() == 0) {
    throw ShapeError("layer dimensions must be at least 1");
  }
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("a network needs at least one layer");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const Layer& l = layers_[k];
    if (l.weight.rows() != l.bias.size() || l.weight.rows() == 0 || l.weight.cols() == 0) {
      throw ShapeError("malformed layer " + std::to_string(k));
    }
    if (k > 0 && layers_[k - 1].out_dim() != l.in_dim()) {
      throw ShapeError("layer " + std::to_string(k) + " expects input of length " +
                       std::to_string(l.in_dim()) + " but layer " + std::to_string(k - 1) +
                       " produces " + std::to_string(layers_[k - 1].out_dim()));
    }
  }
}

std::vector<std::size_t> Network::dims() const {
  std::vector<std::size_t> d;
  d.reserve(layers_.size() + 1);
  d.push_back(in_dim());
  for (const Layer& l : layers_) d.push_back(l.out_dim());
  return d;
}

std::size_t Network::param_count() const {
  std::size_t p = 0;
  for (const Layer& l : layers_) p += l.out_dim() * (l.in_dim() + 1);
  return p;
}

std::size_t Network::stored_entries() const {
  std::size_t s = 0;
  for (const Layer& l : layers_) s += l.weight.nnz() + l.bias.size();
  return s;
}

void realize_into(const Network& net, std::span<const double> x, std::span<double> out,
                  Workspace& ws) {
  if (x.size() != net.in_dim()) {
    throw ShapeError("network expects input of length " + std::to_string(net.in_dim()) +
                     ", got " + std::to_string(x.size()));
  }
  if (out.size() != net.out_dim()) throw ShapeError("output buffer has the wrong length");
  ws.a.assign(x.begin(), x.end());
  const std::size_t last = net.length() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    const Layer& l = net.layer(k);
    ws.b.resize(l.out_dim());
    l.weight.multiply(ws.a, ws.b);
    for (std::size_t i = 0; i < ws.b.size(); ++i) {
      const double v = ws.b[i] + l.bias[i];
      ws.b[i] = (k < last && v <= 0.0) ? 0.0 : v;
    }
    std::swap(ws.a, ws.b);
  }
  std::copy(ws.a.begin(), ws.a.end(), out.begin());
}

std::vector<double> realize(const Network& net, std::span<const double> x) {
  Workspace ws;
  std::vector<double> out(net.out_dim());
  realize_into(net, x, out, ws);
  return out;
}

std::vector<double> realize_batch(const Network& net, std::span<const double> inputs,
                                  std::size_t count) {
  const std::size_t din = net.in_dim();
  const std::size_t dout = net.out_dim();
  if (inputs.size() != count * din) throw ShapeError("batch input has the wrong length");
  std::vector<double> out(count * dout);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    Workspace ws;
    for (std::size_t i = begin; i < end; ++i) {
      realize_into(net, inputs.subspan(i * din, din),
                   std::span<double>(out).subspan(i * dout, dout), ws);
    }
  });
  return out;
}

}  // namespace kolmonet
