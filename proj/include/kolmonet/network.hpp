#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kolmonet/weight_matrix.hpp"

namespace kolmonet {

/// One affine map x -> W x + B of a feed-forward network.
struct Layer {
  WeightMatrix weight;
  std::vector<double> bias;

  Layer() = default;
  Layer(WeightMatrix w, std::vector<double> b);

  std::size_t in_dim() const noexcept { return weight.cols(); }
  std::size_t out_dim() const noexcept { return weight.rows(); }

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// A ReLU network: a nonempty chain of affine layers with the rectifier
/// applied after every layer except the last.
class Network {
 public:
  explicit Network(std::vector<Layer> layers);

  std::size_t length() const noexcept { return layers_.size(); }
  std::size_t in_dim() const noexcept { return layers_.front().in_dim(); }
  std::size_t out_dim() const noexcept { return layers_.back().out_dim(); }
  /// (l_0, ..., l_L).
  std::vector<std::size_t> dims() const;
  /// Sum over layers of l_k (l_{k-1} + 1), the dense parameter count.
  std::size_t param_count() const;
  /// Number of stored nonzero weights plus all bias entries.
  std::size_t stored_entries() const;

  const Layer& layer(std::size_t k) const { return layers_.at(k); }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<Layer> layers_;
};

/// Scratch buffers reused across evaluations of the same network.
struct Workspace {
  std::vector<double> a;
  std::vector<double> b;
};

std::vector<double> realize(const Network& net, std::span<const double> x);
void realize_into(const Network& net, std::span<const double> x, std::span<double> out,
                  Workspace& ws);

/// Evaluates `count` inputs stored back to back; output rows are in input order.
std::vector<double> realize_batch(const Network& net, std::span<const double> inputs,
                                  std::size_t count);

}  // namespace kolmonet
