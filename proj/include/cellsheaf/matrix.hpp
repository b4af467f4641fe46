#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cellsheaf/errors.hpp"
#include "cellsheaf/field.hpp"

namespace cellsheaf {

/// Dense row-major matrix over a field. Entries are always canonical field values.
template <Field F>
class Matrix {
 public:
  using field_type = F;
  using value_type = typename F::value_type;

  explicit Matrix(F field, std::size_t rows = 0, std::size_t cols = 0)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  static Matrix from_rows(const F& field, const std::vector<std::vector<value_type>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(field, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged row list");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = field.normalize(rows[i][j]);
    }
    return m;
  }

  /// Integer literal convenience for tests and fixtures.
  static Matrix from_ints(const F& field, const std::vector<std::vector<long>>& rows) {
    std::vector<std::vector<value_type>> converted;
    converted.reserve(rows.size());
    for (const auto& row : rows) {
      std::vector<value_type> out;
      out.reserve(row.size());
      for (long v : row) out.push_back(field.from_int(v));
      converted.push_back(std::move(out));
    }
    return from_rows(field, converted);
  }

  const F& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::size_t entry_count() const noexcept { return data_.size(); }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& v : data_) {
      if (!field_.is_zero(v)) return false;
    }
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix negated() const {
    Matrix out(field_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = field_.neg(data_[k]);
    return out;
  }

  Matrix scaled(const value_type& s) const {
    Matrix out(field_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = field_.mul(s, data_[k]);
    return out;
  }

  Matrix& operator+=(const Matrix& other) {
    check_same_shape(other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = field_.add(data_[k], other.data_[k]);
    return *this;
  }

  Matrix& operator-=(const Matrix& other) {
    check_same_shape(other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = field_.sub(data_[k], other.data_[k]);
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

  /// Copy of the rows [row, row + count) and columns [col, col + width).
  Matrix block(std::size_t row, std::size_t col, std::size_t count, std::size_t width) const {
    if (row + count > rows_ || col + width > cols_) throw DimensionMismatch("block out of range");
    Matrix out(field_, count, width);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < width; ++j) out(i, j) = (*this)(row + i, col + j);
    return out;
  }

  void set_block(std::size_t row, std::size_t col, const Matrix& b) {
    if (row + b.rows_ > rows_ || col + b.cols_ > cols_) throw DimensionMismatch("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(row + i, col + j) = b(i, j);
  }

  void add_to_block(std::size_t row, std::size_t col, const Matrix& b) {
    if (row + b.rows_ > rows_ || col + b.cols_ > cols_) throw DimensionMismatch("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j)
        (*this)(row + i, col + j) = field_.add((*this)(row + i, col + j), b(i, j));
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << ' ';
        os << field_.to_string((*this)(i, j));
      }
    }
    os << ']';
    return os.str();
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (!(a.field_ == b.field_) || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k) {
      if (!a.field_.equal(a.data_[k], b.data_[k])) return false;
    }
    return true;
  }

 private:
  void check_same_shape(const Matrix& other) const {
    if (!(field_ == other.field_)) throw FieldMismatch("matrices over different fields");
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      throw DimensionMismatch("shape " + std::to_string(rows_) + "x" + std::to_string(cols_) + " vs " +
                              std::to_string(other.rows_) + "x" + std::to_string(other.cols_));
    }
  }

  F field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<value_type> data_;
};

/// Naive cubic product a * b.
template <Field F>
Matrix<F> mat_mul(const Matrix<F>& a, const Matrix<F>& b) {
  if (!(a.field() == b.field())) throw FieldMismatch("mat_mul over different fields");
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const F& f = a.field();
  Matrix<F> out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& aik = a(i, k);
      if (f.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (f.is_zero(b(k, j))) continue;
        out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
      }
    }
  }
  return out;
}

template <Field F>
Matrix<F> operator*(const Matrix<F>& a, const Matrix<F>& b) {
  return mat_mul(a, b);
}

/// Gauss-Jordan inverse; nullopt for singular or non-square input.
template <Field F>
std::optional<Matrix<F>> try_invert(const Matrix<F>& a) {
  if (!a.is_square()) return std::nullopt;
  const F& f = a.field();
  const std::size_t n = a.rows();
  Matrix<F> work = a;
  Matrix<F> inv = Matrix<F>::identity(f, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && f.is_zero(work(pivot, col))) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const auto scale = f.inv(work(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) = f.mul(scale, work(col, j));
      inv(col, j) = f.mul(scale, inv(col, j));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || f.is_zero(work(r, col))) continue;
      const auto factor = work(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        work(r, j) = f.sub(work(r, j), f.mul(factor, work(col, j)));
        inv(r, j) = f.sub(inv(r, j), f.mul(factor, inv(col, j)));
      }
    }
  }
  return inv;
}

/// Result of reducing a matrix to reduced row echelon form.
template <Field F>
struct Echelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row, increasing
};

template <Field F>
Echelon<F> rref(Matrix<F> m) {
  const F& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && f.is_zero(m(pivot, col))) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    }
    const auto scale = f.inv(m(row, col));
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = f.mul(scale, m(row, j));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || f.is_zero(m(r, col))) continue;
      const auto factor = m(r, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(r, j) = f.sub(m(r, j), f.mul(factor, m(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <Field F>
std::size_t rank(const Matrix<F>& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  return rref(a).pivots.size();
}

template <Field F>
Matrix<F> transpose(const Matrix<F>& a) {
  return a.transpose();
}

/// Columns form a basis of the null space of a (RREF convention: free variable set to 1).
template <Field F>
Matrix<F> kernel_basis(const Matrix<F>& a) {
  const F& f = a.field();
  auto [reduced, pivots] = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  Matrix<F> basis(f, a.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t fc = free_cols[k];
    basis(fc, k) = f.one();
    for (std::size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], k) = f.neg(reduced(r, fc));
  }
  return basis;
}

/// [a | b] side by side.
template <Field F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack row mismatch");
  Matrix<F> out(a.field(), a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

}  // namespace cellsheaf
