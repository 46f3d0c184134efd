#include "kolmonet/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kolmonet/errors.hpp"

namespace kolmonet {

namespace {

Layer fuse(const Layer& outer, const Layer& inner) {
  WeightMatrix w = outer.weight * inner.weight;
  std::vector<double> b = outer.weight * std::span<const double>(inner.bias);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += outer.bias[i];
  return Layer(std::move(w), std::move(b));
}

void require_equal_lengths(std::span<const Network> nets, const char* what) {
  if (nets.empty()) throw ShapeError(std::string(what) + ": empty network list");
  for (const Network& n : nets) {
    if (n.length() != nets.front().length()) {
      throw ShapeError(std::string(what) + ": networks must have equal length");
    }
  }
}

// Layers that follow a first hidden layer holding, for each branch b, the
// pair (r(u_b), r(-u_b)) at units 2b and 2b+1. They compute
// sum_b coef[b] * S(u_b), where S(u) = U^2 f_m(|u| / U) and f_m is the
// piecewise-linear interpolant of z^2 on 2^m + 1 uniform nodes of [0, 1],
// obtained as z - sum_k g_k(z) / 4^k with g_k the k-fold sawtooth.
std::vector<Layer> square_stack(std::size_t branches, std::size_t levels, double range,
                                std::span<const double> coef) {
  std::vector<Layer> out;
  const std::size_t in0 = 2 * branches;
  const double inv_u = 1.0 / range;
  const double u2 = range * range;

  if (levels == 0) {
    MatrixAssembler s(branches, in0);
    for (std::size_t b = 0; b < branches; ++b) {
      s.add(b, 2 * b, range);
      s.add(b, 2 * b + 1, range);
    }
    out.emplace_back(std::move(s).build(), std::vector<double>(branches, 0.0));
  } else {
    // First sawtooth layer: r(z), r(z - 1/2), r(z - 1) with z = |u| / U.
    {
      MatrixAssembler w(3 * branches, in0);
      std::vector<double> bias(3 * branches);
      for (std::size_t b = 0; b < branches; ++b) {
        for (std::size_t r = 0; r < 3; ++r) {
          w.add(3 * b + r, 2 * b, inv_u);
          w.add(3 * b + r, 2 * b + 1, inv_u);
          bias[3 * b + r] = -0.5 * static_cast<double>(r);
        }
      }
      out.emplace_back(std::move(w).build(), std::move(bias));
    }
    // Coefficients of (g_l, acc_l) in terms of the units of layer l.
    auto unit_count = [](std::size_t l) { return l == 1 ? std::size_t{3} : std::size_t{4}; };
    auto acc_row = [](std::size_t l) {
      const double s = std::ldexp(1.0, -2 * static_cast<int>(l));
      // acc_l = acc_{l-1} - g_l / 4^l with g_l = 2u1 - 4u2 + 2u3.
      if (l == 1) return std::vector<double>{1.0 - 2.0 * s, 4.0 * s, -2.0 * s};
      return std::vector<double>{-2.0 * s, 4.0 * s, -2.0 * s, 1.0};
    };
    for (std::size_t l = 1; l < levels; ++l) {
      const std::size_t prev = unit_count(l);
      MatrixAssembler w(4 * branches, prev * branches);
      std::vector<double> bias(4 * branches);
      const std::vector<double> acc = acc_row(l);
      for (std::size_t b = 0; b < branches; ++b) {
        const std::size_t c0 = prev * b;
        for (std::size_t r = 0; r < 3; ++r) {
          w.add(4 * b + r, c0 + 0, 2.0);
          w.add(4 * b + r, c0 + 1, -4.0);
          w.add(4 * b + r, c0 + 2, 2.0);
          bias[4 * b + r] = -0.5 * static_cast<double>(r);
        }
        for (std::size_t k = 0; k < prev; ++k) w.add(4 * b + 3, c0 + k, acc[k]);
        bias[4 * b + 3] = 0.0;
      }
      out.emplace_back(std::move(w).build(), std::move(bias));
    }
    // S layer: S_b = U^2 acc_m, nonnegative, so the rectifier passes it through.
    {
      const std::size_t prev = unit_count(levels);
      const std::vector<double> acc = acc_row(levels);
      MatrixAssembler w(branches, prev * branches);
      for (std::size_t b = 0; b < branches; ++b) {
        for (std::size_t k = 0; k < prev; ++k) w.add(b, prev * b + k, u2 * acc[k]);
      }
      out.emplace_back(std::move(w).build(), std::vector<double>(branches, 0.0));
    }
  }
  // Output: combine the S values, each read from its own unit so that equal
  // values cancel exactly.
  MatrixAssembler o(1, branches);
  for (std::size_t b = 0; b < branches; ++b) o.add(0, b, coef[b]);
  out.emplace_back(std::move(o).build(), std::vector<double>{0.0});
  return out;
}

std::size_t levels_for(double eps, double scale) {
  // Smallest m >= 0 with scale * 4^-(m+1) <= eps.
  std::size_t m = 0;
  double bound = scale / 4.0;
  while (bound > eps) {
    bound /= 4.0;
    ++m;
    if (m > 200) throw DomainError("requested accuracy is below double resolution");
  }
  return m;
}

}  // namespace

Network affine_net(WeightMatrix w, std::vector<double> b) {
  std::vector<Layer> layers;
  layers.emplace_back(std::move(w), std::move(b));
  return Network(std::move(layers));
}

Network compose(const Network& f, const Network& g) {
  if (f.in_dim() != g.out_dim()) {
    throw ShapeError("compose: outer network expects input of length " +
                     std::to_string(f.in_dim()) + " but inner network produces " +
                     std::to_string(g.out_dim()));
  }
  std::vector<Layer> layers;
  layers.reserve(f.length() + g.length() - 1);
  for (std::size_t k = 0; k + 1 < g.length(); ++k) layers.push_back(g.layer(k));
  layers.push_back(fuse(f.layer(0), g.layer(g.length() - 1)));
  for (std::size_t k = 1; k < f.length(); ++k) layers.push_back(f.layer(k));
  return Network(std::move(layers));
}

Network identity_net(std::size_t d) {
  if (d == 0) throw ShapeError("identity_net: dimension must be positive");
  MatrixAssembler w1(2 * d, d);
  MatrixAssembler w2(d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    w1.add(i, i, 1.0);
    w1.add(d + i, i, -1.0);
    w2.add(i, i, 1.0);
    w2.add(i, d + i, -1.0);
  }
  std::vector<Layer> layers;
  layers.emplace_back(std::move(w1).build(), std::vector<double>(2 * d, 0.0));
  layers.emplace_back(std::move(w2).build(), std::vector<double>(d, 0.0));
  return Network(std::move(layers));
}

Network identity_of_length(std::size_t d, std::size_t length) {
  if (length == 0) throw ShapeError("identity_of_length: length must be positive");
  if (d == 0) throw ShapeError("identity_of_length: dimension must be positive");
  if (length == 1) return affine_net(WeightMatrix::identity(d), std::vector<double>(d, 0.0));
  Network id = identity_net(d);
  Network acc = id;
  for (std::size_t k = 2; k < length; ++k) acc = compose(id, acc);
  return acc;
}

Network concat_with_identity(const Network& f, const Network& g) {
  return compose(f, compose(identity_net(g.out_dim()), g));
}

Network extend_length(const Network& g, std::size_t length) {
  if (length < g.length()) throw ShapeError("extend_length: target is shorter than the network");
  if (length == g.length()) return g;
  return compose(g, identity_of_length(g.in_dim(), length - g.length() + 1));
}

std::vector<Network> equalize_lengths(std::span<const Network> nets) {
  std::size_t target = 0;
  for (const Network& n : nets) target = std::max(target, n.length());
  std::vector<Network> out;
  out.reserve(nets.size());
  for (const Network& n : nets) out.push_back(extend_length(n, target));
  return out;
}

Network parallel_shared(std::span<const Network> nets) {
  require_equal_lengths(nets, "parallel_shared");
  const std::size_t din = nets.front().in_dim();
  for (const Network& n : nets) {
    if (n.in_dim() != din) throw ShapeError("parallel_shared: input dimensions differ");
  }
  std::vector<Layer> layers;
  for (std::size_t k = 0; k < nets.front().length(); ++k) {
    std::size_t rows = 0, cols = 0;
    for (const Network& n : nets) {
      rows += n.layer(k).out_dim();
      cols += n.layer(k).in_dim();
    }
    if (k == 0) cols = din;
    MatrixAssembler w(rows, cols);
    std::vector<double> bias;
    std::size_t r0 = 0, c0 = 0;
    for (const Network& n : nets) {
      const Layer& l = n.layer(k);
      w.add_block(r0, k == 0 ? 0 : c0, l.weight);
      bias.insert(bias.end(), l.bias.begin(), l.bias.end());
      r0 += l.out_dim();
      c0 += l.in_dim();
    }
    layers.emplace_back(std::move(w).build(), std::move(bias));
  }
  return Network(std::move(layers));
}

Network parallel_disjoint(std::span<const Network> nets) {
  require_equal_lengths(nets, "parallel_disjoint");
  std::vector<Layer> layers;
  for (std::size_t k = 0; k < nets.front().length(); ++k) {
    std::size_t rows = 0, cols = 0;
    for (const Network& n : nets) {
      rows += n.layer(k).out_dim();
      cols += n.layer(k).in_dim();
    }
    MatrixAssembler w(rows, cols);
    std::vector<double> bias;
    std::size_t r0 = 0, c0 = 0;
    for (const Network& n : nets) {
      const Layer& l = n.layer(k);
      w.add_block(r0, c0, l.weight);
      bias.insert(bias.end(), l.bias.begin(), l.bias.end());
      r0 += l.out_dim();
      c0 += l.in_dim();
    }
    layers.emplace_back(std::move(w).build(), std::move(bias));
  }
  return Network(std::move(layers));
}

Network average_nets(std::span<const Network> nets, std::span<const double> weights) {
  if (nets.empty()) throw ShapeError("average_nets: empty network list");
  if (weights.size() != nets.size()) {
    throw ShapeError("average_nets: need one weight per network");
  }
  for (const Network& n : nets) {
    if (n.in_dim() != nets.front().in_dim() || n.out_dim() != nets.front().out_dim()) {
      throw ShapeError("average_nets: networks must share input and output dimensions");
    }
  }
  const std::vector<Network> padded = equalize_lengths(nets);
  const std::size_t length = padded.front().length();
  const std::size_t dout = padded.front().out_dim();

  if (length == 1) {
    MatrixAssembler w(dout, padded.front().in_dim());
    std::vector<double> bias(dout, 0.0);
    for (std::size_t m = 0; m < padded.size(); ++m) {
      const Layer& l = padded[m].layer(0);
      w.add_block(0, 0, l.weight, weights[m]);
      for (std::size_t i = 0; i < dout; ++i) bias[i] += weights[m] * l.bias[i];
    }
    return affine_net(std::move(w).build(), std::move(bias));
  }

  // All layers but the last run side by side on the shared input.
  std::vector<Network> heads;
  heads.reserve(padded.size());
  for (const Network& n : padded) {
    std::vector<Layer> front(n.layers().begin(), n.layers().end() - 1);
    heads.emplace_back(std::move(front));
  }
  Network stacked = parallel_shared(heads);
  std::vector<Layer> layers = stacked.layers();

  std::size_t cols = stacked.out_dim();
  MatrixAssembler w(dout, cols);
  std::vector<double> bias(dout, 0.0);
  std::size_t c0 = 0;
  for (std::size_t m = 0; m < padded.size(); ++m) {
    const Layer& l = padded[m].layer(length - 1);
    w.add_block(0, c0, l.weight, weights[m]);
    for (std::size_t i = 0; i < dout; ++i) bias[i] += weights[m] * l.bias[i];
    c0 += l.in_dim();
  }
  layers.emplace_back(std::move(w).build(), std::move(bias));
  return Network(std::move(layers));
}

Network scale_output(const Network& f, double factor) {
  std::vector<Layer> layers = f.layers();
  Layer& last = layers.back();
  std::vector<double> bias = last.bias;
  for (double& b : bias) b *= factor;
  last = Layer(last.weight.scaled(factor), std::move(bias));
  return Network(std::move(layers));
}

SquareNet square_net(double eps, double range) {
  if (!(eps > 0.0)) throw DomainError("square_net: eps must be positive");
  if (!(range > 0.0)) throw DomainError("square_net: range must be positive");
  const std::size_t m = levels_for(eps, range * range);
  MatrixAssembler w0(2, 1);
  w0.add(0, 0, 1.0);
  w0.add(1, 0, -1.0);
  std::vector<Layer> layers;
  layers.emplace_back(std::move(w0).build(), std::vector<double>(2, 0.0));
  const double coef[] = {1.0};
  for (Layer& l : square_stack(1, m, range, coef)) layers.push_back(std::move(l));
  const double bound = range * range * std::ldexp(1.0, -2 * static_cast<int>(m + 1));
  return SquareNet{Network(std::move(layers)), m, range, bound};
}

ProductNet product_net(double eps, double range_a, double range_b) {
  if (!(eps > 0.0)) throw DomainError("product_net: eps must be positive");
  if (!(range_a > 0.0) || !(range_b > 0.0)) {
    throw DomainError("product_net: ranges must be positive");
  }
  const double u = range_a + range_b;
  const std::size_t m = levels_for(eps, 1.5 * u * u);
  // Branches: a + b, a, b, each as a (positive part, negative part) pair.
  const double rows[6][2] = {{1, 1}, {-1, -1}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  MatrixAssembler w0(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      if (rows[i][j] != 0.0) w0.add(i, j, rows[i][j]);
    }
  }
  std::vector<Layer> layers;
  layers.emplace_back(std::move(w0).build(), std::vector<double>(6, 0.0));
  const double coef[] = {0.5, -0.5, -0.5};
  for (Layer& l : square_stack(3, m, u, coef)) layers.push_back(std::move(l));
  const double bound = 1.5 * u * u * std::ldexp(1.0, -2 * static_cast<int>(m + 1));
  return ProductNet{Network(std::move(layers)), m, u, bound};
}

Network hat_time_net(std::span<const double> grid, std::size_t n) {
  if (grid.size() < 2 || n + 1 >= grid.size()) {
    throw ShapeError("hat_time_net: index must satisfy 0 <= n < N");
  }
  const double lo = grid[n];
  const double hi = grid[n + 1];
  if (!(hi > lo)) throw DomainError("hat_time_net: degenerate grid interval");
  const double inv_h = 1.0 / (hi - lo);
  MatrixAssembler w1(2, 1);
  w1.add(0, 0, 1.0);
  w1.add(1, 0, 1.0);
  MatrixAssembler w2(1, 2);
  w2.add(0, 0, inv_h);
  w2.add(0, 1, -inv_h);
  std::vector<Layer> layers;
  layers.emplace_back(std::move(w1).build(), std::vector<double>{-lo, -hi});
  layers.emplace_back(std::move(w2).build(), std::vector<double>{0.0});
  return Network(std::move(layers));
}

}  // namespace kolmonet
