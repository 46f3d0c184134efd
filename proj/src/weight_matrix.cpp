#include "kolmonet/weight_matrix.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "kolmonet/errors.hpp"

namespace kolmonet {

namespace {

void check_index_width(std::size_t cols) {
  if (cols > std::numeric_limits<std::uint32_t>::max()) {
    throw ShapeError("matrix has more columns than the index type can address");
  }
}

}  // namespace

WeightMatrix::WeightMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {
  check_index_width(cols);
}

WeightMatrix WeightMatrix::from_dense(std::size_t rows, std::size_t cols,
                                      std::span<const double> row_major) {
  if (row_major.size() != rows * cols) {
    throw ShapeError("dense weight array has " + std::to_string(row_major.size()) +
                     " entries, expected " + std::to_string(rows * cols));
  }
  WeightMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = row_major[i * cols + j];
      if (v != 0.0) {
        m.col_idx_.push_back(static_cast<std::uint32_t>(j));
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[i + 1] = m.values_.size();
  }
  return m;
}

WeightMatrix WeightMatrix::identity(std::size_t n, double scale) {
  WeightMatrix m(n, n);
  if (scale == 0.0) return m;
  m.col_idx_.resize(n);
  m.values_.assign(n, scale);
  for (std::size_t i = 0; i < n; ++i) {
    m.col_idx_[i] = static_cast<std::uint32_t>(i);
    m.row_ptr_[i + 1] = i + 1;
  }
  return m;
}

WeightMatrix WeightMatrix::from_csr(std::size_t rows, std::size_t cols,
                                    std::vector<std::size_t> row_ptr,
                                    std::vector<std::uint32_t> col_idx,
                                    std::vector<double> values) {
  check_index_width(cols);
  if (row_ptr.size() != rows + 1 || row_ptr.front() != 0 ||
      row_ptr.back() != values.size() || col_idx.size() != values.size()) {
    throw ShapeError("inconsistent compressed-row arrays");
  }
  MatrixAssembler a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_ptr[i] > row_ptr[i + 1]) throw ShapeError("row pointers must be nondecreasing");
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (col_idx[k] >= cols) throw ShapeError("column index out of range");
      if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1]) {
        throw ShapeError("column indices must increase within a row");
      }
      a.add(i, col_idx[k], values[k]);
    }
  }
  return std::move(a).build();
}

double WeightMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw ShapeError("matrix index out of range");
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<double> WeightMatrix::to_dense() const {
  std::vector<double> out(rows_ * cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      out[i * cols_ + col_idx_[k]] = values_[k];
    }
  }
  return out;
}

void WeightMatrix::multiply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != cols_ || out.size() != rows_) {
    throw ShapeError("matrix-vector product: expected input of length " +
                     std::to_string(cols_) + ", got " + std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      acc += values_[k] * x[col_idx_[k]];
    }
    out[i] = acc;
  }
}

std::vector<double> WeightMatrix::operator*(std::span<const double> x) const {
  std::vector<double> out(rows_);
  multiply(x, out);
  return out;
}

WeightMatrix WeightMatrix::operator*(const WeightMatrix& rhs) const {
  if (cols_ != rhs.rows_) {
    throw ShapeError("matrix product: inner dimensions " + std::to_string(cols_) +
                     " and " + std::to_string(rhs.rows_) + " differ");
  }
  WeightMatrix out(rows_, rhs.cols_);
  std::vector<double> acc(rhs.cols_, 0.0);
  std::vector<char> touched(rhs.cols_, 0);
  std::vector<std::uint32_t> touched_cols;
  for (std::size_t i = 0; i < rows_; ++i) {
    touched_cols.clear();
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const double a = values_[k];
      const std::size_t r = col_idx_[k];
      for (std::size_t l = rhs.row_ptr_[r]; l < rhs.row_ptr_[r + 1]; ++l) {
        const std::uint32_t j = rhs.col_idx_[l];
        if (!touched[j]) {
          touched[j] = 1;
          touched_cols.push_back(j);
        }
        acc[j] += a * rhs.values_[l];
      }
    }
    std::sort(touched_cols.begin(), touched_cols.end());
    for (const std::uint32_t j : touched_cols) {
      if (acc[j] != 0.0) {
        out.col_idx_.push_back(j);
        out.values_.push_back(acc[j]);
      }
      acc[j] = 0.0;
      touched[j] = 0;
    }
    out.row_ptr_[i + 1] = out.values_.size();
  }
  return out;
}

WeightMatrix WeightMatrix::scaled(double factor) const {
  MatrixAssembler a(rows_, cols_);
  a.add_block(0, 0, *this, factor);
  return std::move(a).build();
}

bool operator==(const WeightMatrix& a, const WeightMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ &&
         a.col_idx_ == b.col_idx_ && a.values_ == b.values_;
}

MatrixAssembler::MatrixAssembler(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows) {
  check_index_width(cols);
}

void MatrixAssembler::add(std::size_t i, std::size_t j, double value) {
  if (i >= rows_ || j >= cols_) {
    throw ShapeError("assembler index (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  entries_[i].emplace_back(static_cast<std::uint32_t>(j), value);
}

void MatrixAssembler::add_block(std::size_t row0, std::size_t col0, const WeightMatrix& block,
                                double scale) {
  if (row0 + block.rows() > rows_ || col0 + block.cols() > cols_) {
    throw ShapeError("block does not fit inside the assembled matrix");
  }
  for (std::size_t i = 0; i < block.rows(); ++i) {
    for (std::size_t k = block.row_ptr_[i]; k < block.row_ptr_[i + 1]; ++k) {
      entries_[row0 + i].emplace_back(static_cast<std::uint32_t>(col0 + block.col_idx_[k]),
                                      scale * block.values_[k]);
    }
  }
}

WeightMatrix MatrixAssembler::build() && {
  WeightMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto& row = entries_[i];
    std::stable_sort(row.begin(), row.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row.size();) {
      const std::uint32_t j = row[k].first;
      double sum = row[k].second;
      std::size_t l = k + 1;
      for (; l < row.size() && row[l].first == j; ++l) sum += row[l].second;
      if (sum != 0.0) {
        m.col_idx_.push_back(j);
        m.values_.push_back(sum);
      }
      k = l;
    }
    m.row_ptr_[i + 1] = m.values_.size();
    row.clear();
    row.shrink_to_fit();
  }
  return m;
}

}  // namespace kolmonet
