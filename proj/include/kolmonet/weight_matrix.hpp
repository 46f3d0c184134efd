#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace kolmonet {

/// Dense real matrix held in compressed-row form.
///
/// Semantically this is an ordinary rows x cols matrix. Only nonzero entries
/// are stored, so two matrices compare equal exactly when their dense forms
/// do, and products skip terms that are exactly zero. Skipping such terms
/// never changes a floating-point sum of finite values, so every result
/// equals the one a dense loop in increasing column order would produce.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols);

  static WeightMatrix from_dense(std::size_t rows, std::size_t cols,
                                 std::span<const double> row_major);
  static WeightMatrix identity(std::size_t n, double scale = 1.0);
  static WeightMatrix from_csr(std::size_t rows, std::size_t cols,
                               std::vector<std::size_t> row_ptr,
                               std::vector<std::uint32_t> col_idx,
                               std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  double at(std::size_t i, std::size_t j) const;
  std::vector<double> to_dense() const;

  /// out = W x, summing each row in increasing column order.
  void multiply(std::span<const double> x, std::span<double> out) const;
  WeightMatrix operator*(const WeightMatrix& rhs) const;
  std::vector<double> operator*(std::span<const double> x) const;
  WeightMatrix scaled(double factor) const;

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::uint32_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const WeightMatrix& a, const WeightMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;

  friend class MatrixAssembler;
};

/// Collects entries in any order and emits a WeightMatrix. Entries added to
/// the same position are summed in insertion order.
class MatrixAssembler {
 public:
  MatrixAssembler(std::size_t rows, std::size_t cols);

  void add(std::size_t i, std::size_t j, double value);
  /// Adds `block` with its (0,0) entry placed at (row0, col0).
  void add_block(std::size_t row0, std::size_t col0, const WeightMatrix& block,
                 double scale = 1.0);
  WeightMatrix build() &&;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> entries_;
};

}  // namespace kolmonet
