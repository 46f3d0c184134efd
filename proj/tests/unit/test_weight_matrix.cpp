#include <doctest.h>

#include <vector>

#include "kolmonet/errors.hpp"
#include "kolmonet/rng.hpp"
#include "kolmonet/weight_matrix.hpp"

using namespace kolmonet;

namespace {

std::vector<double> random_dense(CounterStream& s, std::size_t n, double zero_fraction) {
  std::vector<double> v(n);
  for (double& x : v) x = s.uniform() < zero_fraction ? 0.0 : 2.0 * s.uniform() - 1.0;
  return v;
}

}  // namespace

TEST_CASE("dense round trip drops zeros") {
  const std::vector<double> a{1.0, 0.0, -2.0, 0.0, 0.0, 3.5};
  const WeightMatrix w = WeightMatrix::from_dense(2, 3, a);
  CHECK(w.nnz() == 3);
  CHECK(w.to_dense() == a);
  CHECK(w.at(0, 2) == -2.0);
  CHECK(w.at(1, 0) == 0.0);
  CHECK_THROWS_AS(w.at(2, 0), ShapeError);
  CHECK_THROWS_AS(WeightMatrix::from_dense(2, 2, a), ShapeError);
  CHECK(WeightMatrix::identity(3, 2.0).to_dense() ==
        std::vector<double>{2, 0, 0, 0, 2, 0, 0, 0, 2});
}

TEST_CASE("matrix-vector product equals the dense loop bitwise") {
  CounterStream s(1, 0, 0, StreamTag::kTest);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 1 + trial % 7, c = 1 + (trial * 3) % 11;
    const auto dense = random_dense(s, r * c, 0.4);
    const auto x = random_dense(s, c, 0.0);
    const WeightMatrix w = WeightMatrix::from_dense(r, c, dense);
    const auto y = w * std::span<const double>(x);
    for (std::size_t i = 0; i < r; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < c; ++j) acc += dense[i * c + j] * x[j];
      CHECK(y[i] == acc);
    }
  }
}

TEST_CASE("matrix product matches the dense triple loop") {
  CounterStream s(2, 0, 0, StreamTag::kTest);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 5, k = 1 + trial % 4, m = 1 + trial % 6;
    const auto a = random_dense(s, n * k, 0.3);
    const auto b = random_dense(s, k * m, 0.3);
    const WeightMatrix p = WeightMatrix::from_dense(n, k, a) * WeightMatrix::from_dense(k, m, b);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < k; ++l) acc += a[i * k + l] * b[l * m + j];
        CHECK(p.at(i, j) == doctest::Approx(acc).epsilon(1e-14));
      }
    }
  }
  CHECK_THROWS_AS(WeightMatrix(2, 3) * WeightMatrix(2, 3), ShapeError);
}

TEST_CASE("compressed-row construction is validated") {
  const WeightMatrix ok = WeightMatrix::from_csr(2, 3, {0, 1, 3}, {1, 0, 2}, {5.0, 1.0, 2.0});
  CHECK(ok.to_dense() == std::vector<double>{0, 5, 0, 1, 0, 2});
  CHECK_THROWS_AS(WeightMatrix::from_csr(2, 3, {0, 1}, {1}, {5.0}), ShapeError);
  CHECK_THROWS_AS(WeightMatrix::from_csr(2, 3, {0, 1, 2}, {1, 3}, {5.0, 1.0}), ShapeError);
  CHECK_THROWS_AS(WeightMatrix::from_csr(1, 3, {0, 2}, {2, 1}, {5.0, 1.0}), ShapeError);
}

TEST_CASE("assembler sums duplicates and drops cancellations") {
  MatrixAssembler a(2, 2);
  a.add(0, 1, 1.5);
  a.add(0, 1, 2.5);
  a.add(1, 0, 1.0);
  a.add(1, 0, -1.0);
  const WeightMatrix w = std::move(a).build();
  CHECK(w.nnz() == 1);
  CHECK(w.at(0, 1) == 4.0);
  CHECK(w == WeightMatrix::from_dense(2, 2, std::vector<double>{0, 4, 0, 0}));

  MatrixAssembler b(3, 4);
  b.add_block(1, 2, WeightMatrix::identity(2), -2.0);
  CHECK(std::move(b).build().to_dense() ==
        std::vector<double>{0, 0, 0, 0, 0, 0, -2, 0, 0, 0, 0, -2});
  MatrixAssembler c(2, 2);
  CHECK_THROWS_AS(c.add(2, 0, 1.0), ShapeError);
  CHECK_THROWS_AS(c.add_block(1, 1, WeightMatrix::identity(2)), ShapeError);
}
