#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kolmonet/bounds.hpp"
#include "kolmonet/calculus.hpp"
#include "kolmonet/errors.hpp"
#include "kolmonet/rng.hpp"

using namespace kolmonet;

namespace {

struct DenseLayer {
  std::size_t rows, cols;
  std::vector<double> w, b;
};

// Straight-line forward pass on plain arrays, used as the realization oracle.
std::vector<double> forward(const std::vector<DenseLayer>& layers, std::vector<double> x) {
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const DenseLayer& L = layers[k];
    std::vector<double> y(L.rows);
    for (std::size_t i = 0; i < L.rows; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < L.cols; ++j) acc += L.w[i * L.cols + j] * x[j];
      acc += L.b[i];
      y[i] = (k + 1 < layers.size() && acc < 0.0) ? 0.0 : acc;
    }
    x = std::move(y);
  }
  return x;
}

std::vector<DenseLayer> random_dense_layers(CounterStream& s, const std::vector<std::size_t>& dims,
                                            bool integer = false) {
  std::vector<DenseLayer> out;
  for (std::size_t k = 1; k < dims.size(); ++k) {
    DenseLayer L{dims[k], dims[k - 1], std::vector<double>(dims[k] * dims[k - 1]),
                 std::vector<double>(dims[k])};
    auto draw = [&] { return integer ? std::floor(7.0 * s.uniform()) - 3.0 : 2.0 * s.uniform() - 1.0; };
    for (double& v : L.w) v = draw();
    for (double& v : L.b) v = draw();
    out.push_back(std::move(L));
  }
  return out;
}

Network to_network(const std::vector<DenseLayer>& layers) {
  std::vector<Layer> out;
  for (const DenseLayer& L : layers) out.emplace_back(WeightMatrix::from_dense(L.rows, L.cols, L.w), L.b);
  return Network(std::move(out));
}

std::vector<double> random_vec(CounterStream& s, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * (2.0 * s.uniform() - 1.0);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("realization") {
  const Network id = identity_net(3);
  CHECK(realize(id, std::vector<double>{1.0, -2.0, 0.5}) == std::vector<double>{1.0, -2.0, 0.5});

  const Network affine = affine_net(WeightMatrix::from_dense(1, 1, std::vector<double>{2.0}), {3.0});
  CHECK(realize(affine, std::vector<double>{-1.0}) == std::vector<double>{1.0});

  CounterStream s(10, 0, 0, StreamTag::kTest);
  const auto layers = random_dense_layers(s, {3, 5, 2});
  const Network net = to_network(layers);
  for (int i = 0; i < 10; ++i) {
    const auto x = random_vec(s, 3, 5.0);
    CHECK(realize(net, x) == forward(layers, x));
  }
  CHECK_THROWS_AS(realize(net, std::vector<double>{1.0}), ShapeError);

  // Batched evaluation keeps input order and matches single evaluations.
  std::vector<double> batch;
  for (int i = 0; i < 40; ++i) {
    const auto x = random_vec(s, 3, 5.0);
    batch.insert(batch.end(), x.begin(), x.end());
  }
  const auto out = realize_batch(net, batch, 40);
  for (std::size_t i = 0; i < 40; ++i) {
    const auto one = realize(net, std::span<const double>(batch).subspan(3 * i, 3));
    CHECK(out[2 * i] == one[0]);
    CHECK(out[2 * i + 1] == one[1]);
  }
}

TEST_CASE("parameter count") {
  CHECK(identity_net(1).param_count() == 7);
  CHECK(identity_net(2).param_count() == 22);
  for (std::size_t d = 1; d <= 16; ++d) {
    CHECK(identity_net(d).param_count() == 4 * d * d + 3 * d);
    CHECK(identity_net(d).param_count() <= 7 * d * d);
  }
  CounterStream s(11, 0, 0, StreamTag::kTest);
  CHECK(to_network(random_dense_layers(s, {2, 5, 3})).param_count() == 33);
  CHECK(to_network(random_dense_layers(s, {2, 5, 3})).dims() == std::vector<std::size_t>{2, 5, 3});
}

TEST_CASE("composition") {
  CounterStream s(12, 0, 0, StreamTag::kTest);
  for (std::size_t d : {1u, 3u}) {
    const Network g = to_network(random_dense_layers(s, {4, 6, d}));
    const Network ig = compose(identity_net(d), g);
    for (int i = 0; i < 10; ++i) {
      const auto x = random_vec(s, 4, 10.0);
      CHECK(max_abs_diff(realize(ig, x), realize(g, x)) <= 1e-12);
    }
  }

  // Affine case: (W, b) o (V, c) = (W V, W c + b).
  const std::vector<double> W{1, 2, 3, 4}, V{0.5, -1, 2, 0}, b{1, -1}, c{3, 4};
  const Network fw = affine_net(WeightMatrix::from_dense(2, 2, W), b);
  const Network gv = affine_net(WeightMatrix::from_dense(2, 2, V), c);
  const Network fg = compose(fw, gv);
  CHECK(fg.length() == 1);
  CHECK(fg.layer(0).weight.to_dense() == std::vector<double>{4.5, -1, 9.5, -3});
  CHECK(fg.layer(0).bias == std::vector<double>{12, 24});

  // Length and realization for every combination of single- and multi-layer factors.
  for (std::size_t lf : {1u, 2u, 3u}) {
    for (std::size_t lg : {1u, 2u, 3u}) {
      std::vector<std::size_t> df{3}, dg{2};
      for (std::size_t k = 1; k < lg; ++k) dg.push_back(4);
      dg.push_back(3);
      for (std::size_t k = 1; k < lf; ++k) df.push_back(5);
      df.push_back(2);
      const auto f_layers = random_dense_layers(s, df);
      const auto g_layers = random_dense_layers(s, dg);
      const Network comp = compose(to_network(f_layers), to_network(g_layers));
      CHECK(comp.length() == lf + lg - 1);
      for (int i = 0; i < 5; ++i) {
        const auto x = random_vec(s, 2, 10.0);
        const auto want = forward(f_layers, forward(g_layers, x));
        CHECK(max_abs_diff(realize(comp, x), want) <= 1e-10 * std::max(1.0, std::abs(want[0])));
      }
    }
  }
  CHECK_THROWS_AS(compose(identity_net(2), identity_net(3)), ShapeError);
}

TEST_CASE("composition is associative layer for layer") {
  CounterStream s(13, 0, 0, StreamTag::kTest);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t l1 = 1 + trial % 3, l2 = 1 + (trial / 3) % 3, l3 = 1 + (trial / 9) % 3;
    auto dims = [&](std::size_t in, std::size_t out, std::size_t len) {
      std::vector<std::size_t> d{in};
      for (std::size_t k = 1; k < len; ++k) d.push_back(1 + static_cast<std::size_t>(4 * s.uniform()));
      d.push_back(out);
      return d;
    };
    const Network h = to_network(random_dense_layers(s, dims(2, 3, l3), true));
    const Network g = to_network(random_dense_layers(s, dims(3, 2, l2), true));
    const Network f = to_network(random_dense_layers(s, dims(2, 4, l1), true));
    CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
  }
}

TEST_CASE("concatenation with identities and length extension") {
  CounterStream s(14, 0, 0, StreamTag::kTest);
  const Network g = to_network(random_dense_layers(s, {3, 4, 2}));
  const Network f = to_network(random_dense_layers(s, {2, 5, 5, 1}));
  const Network fig = concat_with_identity(f, g);
  CHECK(fig.length() == f.length() + g.length());
  for (int i = 0; i < 10; ++i) {
    const auto x = random_vec(s, 3, 10.0);
    CHECK(max_abs_diff(realize(fig, x), realize(compose(f, g), x)) <= 1e-12);
  }
  for (std::size_t extra : {1u, 2u, 5u}) {
    const Network e = extend_length(g, g.length() + extra);
    CHECK(e.length() == g.length() + extra);
    const auto x = random_vec(s, 3, 10.0);
    CHECK(max_abs_diff(realize(e, x), realize(g, x)) <= 1e-12);
  }
  CHECK_THROWS_AS(extend_length(f, 1), ShapeError);
}

TEST_CASE("identity networks") {
  CHECK(realize(identity_net(1), std::vector<double>{-5.0}) == std::vector<double>{-5.0});
  CounterStream s(15, 0, 0, StreamTag::kTest);
  const auto x = random_vec(s, 64, 1e3);
  CHECK(realize(identity_net(64), x) == x);
  CHECK(identity_net(4).dims() == std::vector<std::size_t>{4, 8, 4});
  for (std::size_t len : {1u, 2u, 3u, 6u}) {
    const Network id = identity_of_length(5, len);
    CHECK(id.length() == len);
    const auto y = random_vec(s, 5, 10.0);
    CHECK(realize(id, y) == y);
  }
}

TEST_CASE("parallelization") {
  CounterStream s(16, 0, 0, StreamTag::kTest);
  const auto a = random_dense_layers(s, {3, 4, 2});
  const auto b = random_dense_layers(s, {3, 2, 1});
  const Network both[] = {to_network(a), to_network(b)};
  const Network shared = parallel_shared(both);
  const auto x = random_vec(s, 3, 5.0);
  std::vector<double> want = forward(a, x);
  want.push_back(forward(b, x)[0]);
  CHECK(max_abs_diff(realize(shared, x), want) <= 1e-14);

  const auto c = random_dense_layers(s, {2, 3, 2});
  const Network disjoint_nets[] = {to_network(a), to_network(c)};
  const Network disjoint = parallel_disjoint(disjoint_nets);
  const auto y = random_vec(s, 5, 5.0);
  std::vector<double> want2 = forward(a, {y[0], y[1], y[2]});
  const auto tail = forward(c, {y[3], y[4]});
  want2.insert(want2.end(), tail.begin(), tail.end());
  CHECK(max_abs_diff(realize(disjoint, y), want2) <= 1e-14);
}

TEST_CASE("weighted averages") {
  CounterStream s(17, 0, 0, StreamTag::kTest);
  const Network f = to_network(random_dense_layers(s, {2, 6, 1}));
  const Network single[] = {f};
  const double one[] = {1.0};
  const auto x0 = random_vec(s, 2, 5.0);
  CHECK(realize(average_nets(single, one), x0) == realize(f, x0));

  const Network pair[] = {f, scale_output(f, -1.0)};
  const double halves[] = {0.5, 0.5};
  const Network zero = average_nets(pair, halves);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(realize(zero, random_vec(s, 2, 5.0))[0]) <= 1e-15);

  std::vector<std::vector<DenseLayer>> parts;
  std::vector<Network> nets;
  for (std::size_t m = 0; m < 4; ++m) {
    std::vector<std::size_t> dims{2};
    for (std::size_t k = 0; k < m; ++k) dims.push_back(3);
    dims.push_back(1);
    parts.push_back(random_dense_layers(s, dims));
    nets.push_back(to_network(parts.back()));
  }
  const double w[] = {0.1, -0.7, 2.0, 0.25};
  const Network avg = average_nets(nets, w);
  std::size_t max_padded = 0;
  for (const Network& n : equalize_lengths(nets)) max_padded = std::max(max_padded, n.param_count());
  CHECK(avg.param_count() <= 16 * max_padded);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_vec(s, 2, 5.0);
    double want = 0.0;
    for (std::size_t m = 0; m < 4; ++m) want += w[m] * forward(parts[m], x)[0];
    CHECK(std::abs(realize(avg, x)[0] - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
  CHECK_THROWS_AS(average_nets(std::span<const Network>{}, std::span<const double>{}), ShapeError);
  const Network mismatched[] = {f, identity_net(2)};
  CHECK_THROWS_AS(average_nets(mismatched, halves), ShapeError);
}

TEST_CASE("square and product networks") {
  const ProductNet p = product_net(1e-3, 1.0);
  CHECK(realize(p.net, std::vector<double>{0.0, 0.7}) == std::vector<double>{0.0});
  CHECK(realize(p.net, std::vector<double>{-0.3, 0.0}) == std::vector<double>{0.0});
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const double a = -1.0 + 0.01 * i, b = -1.0 + 0.01 * j;
      worst = std::max(worst, std::abs(realize(p.net, std::vector<double>{a, b})[0] - a * b));
    }
  }
  CHECK(worst <= 1e-3);

  // Unequal ranges, zero annihilation at large arguments.
  const ProductNet q = product_net(1e-4, 1.0, 50.0);
  CHECK(realize(q.net, std::vector<double>{0.0, -37.25})[0] == 0.0);
  for (double a : {-1.0, -0.4, 0.3, 1.0}) {
    for (double b : {-50.0, -3.3, 12.0, 49.5}) {
      CHECK(std::abs(realize(q.net, std::vector<double>{a, b})[0] - a * b) <= 1e-4);
    }
  }

  const double fine = static_cast<double>(product_net(0x1p-10, 1.0).net.param_count());
  const double coarse = static_cast<double>(product_net(0x1p-5, 1.0).net.param_count());
  CHECK(fine / coarse <= 3.0);
  MESSAGE("product size / frak_D at eps = 2^-10: " << fine / frak_D(0x1p-10, 3.0));

  const SquareNet sq = square_net(1e-3, 4.0);
  for (int i = 0; i <= 800; ++i) {
    const double u = -4.0 + 0.01 * i;
    CHECK(std::abs(realize(sq.net, std::vector<double>{u})[0] - u * u) <= 1e-3);
  }
  CHECK(realize(sq.net, std::vector<double>{0.0})[0] == 0.0);
  CHECK_THROWS_AS(product_net(0.0, 1.0), DomainError);
}

TEST_CASE("hat time networks") {
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  const Network h = hat_time_net(grid, 1);
  CHECK(realize(h, std::vector<double>{0.25})[0] == 0.0);
  CHECK(realize(h, std::vector<double>{0.5})[0] == 1.0);
  CHECK(realize(h, std::vector<double>{0.375})[0] == doctest::Approx(0.5));
  CounterStream s(18, 0, 0, StreamTag::kTest);
  for (int i = 0; i < 1000; ++i) {
    const double t = s.uniform();
    const double want = std::clamp((t - 0.25) / 0.25, 0.0, 1.0);
    CHECK(realize(h, std::vector<double>{t})[0] == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK_THROWS(hat_time_net(grid, 4));
  const std::vector<double> flat{0.0, 0.5, 0.5};
  CHECK_THROWS_AS(hat_time_net(flat, 1), DomainError);
}
