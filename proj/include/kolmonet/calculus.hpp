#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kolmonet/network.hpp"

namespace kolmonet {

/// Single-layer network x -> W x + b.
Network affine_net(WeightMatrix w, std::vector<double> b);

/// Standard composition: realizes f(g(x)). The last layer of g and the first
/// layer of f are fused into one affine layer, so the length is
/// length(f) + length(g) - 1.
Network compose(const Network& f, const Network& g);

/// The (d, 2d, d) network x -> r(x) - r(-x).
Network identity_net(std::size_t d);

/// A network of the given length realizing the identity on R^d. Length 1 is
/// the plain affine identity, longer ones chain identity_net blocks.
Network identity_of_length(std::size_t d, std::size_t length);

/// f composed with (identity_net after g). Unlike compose this keeps the
/// layer structure of both factors intact.
Network concat_with_identity(const Network& f, const Network& g);

/// Prepends identity blocks on the input side until g has the given length.
Network extend_length(const Network& g, std::size_t length);

/// Extends every network to the largest length among them.
std::vector<Network> equalize_lengths(std::span<const Network> nets);

/// x -> (f_1(x), ..., f_k(x)) for networks of equal length and input size.
Network parallel_shared(std::span<const Network> nets);

/// (x_1, ..., x_k) -> (f_1(x_1), ..., f_k(x_k)) for networks of equal length.
Network parallel_disjoint(std::span<const Network> nets);

/// x -> sum_m weights[m] * f_m(x). Shorter networks are padded with identity
/// blocks first.
Network average_nets(std::span<const Network> nets, std::span<const double> weights);

/// Multiplies the output of f by a scalar.
Network scale_output(const Network& f, double factor);

/// A ReLU network approximating u -> u^2 on [-range, range] with S(0) = 0 exactly.
struct SquareNet {
  Network net;
  std::size_t levels;   // number of sawtooth refinements m
  double range;         // U
  double error_bound;   // range^2 * 4^-(m+1)
};

SquareNet square_net(double eps, double range);

/// A ReLU network approximating (a, b) -> a b.
struct ProductNet {
  Network net;
  std::size_t levels;
  double range;         // U = range_a + range_b, the bound on |a + b|
  double error_bound;   // 1.5 U^2 4^-(m+1)
};

/// |net(a,b) - a b| <= eps whenever |a| <= range_a and |b| <= range_b.
/// net(a, 0) = net(0, b) = 0 exactly.
ProductNet product_net(double eps, double range_a, double range_b);

inline ProductNet product_net(double eps, double range) {
  return product_net(eps, range, range);
}

/// Scalar network t -> clamp((t - grid[n]) / (grid[n+1] - grid[n]), 0, 1).
Network hat_time_net(std::span<const double> grid, std::size_t n);

}  // namespace kolmonet
