#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fk/zmod.hpp"

namespace fk {

// Dense row-major matrix with residues as entries. The modulus lives with the caller.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<Entry>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols && j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Entry& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Entry operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Entry> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Entry> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Vec column(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> data_;
};

inline Matrix mat_mul(const ZMod& R, const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Entry x = a(i, k);
      if (x) R.axpy(c.row(i), b.row(k), x);
    }
  return c;
}

inline Vec mat_vec(const ZMod& R, const Matrix& a, std::span<const Entry> x) {
  Vec y(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Entry s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s = R.add(s, R.mul(a(i, j), x[j]));
    y[i] = s;
  }
  return y;
}

// Inverse over Z/p^e by Gauss-Jordan; the matrix must be invertible mod p.
inline Matrix mat_inverse(const ZMod& R, const Matrix& A) {
  const std::size_t n = A.rows();
  check(A.cols() == n, ErrorCode::InvalidInput, "matrix is not square");
  Matrix M = A, I = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (M(i, c) % R.p() != 0) {
        piv = i;
        break;
      }
    check(piv < n, ErrorCode::InvalidInput, "matrix is not invertible");
    M.swap_rows(c, piv);
    I.swap_rows(c, piv);
    Entry u = R.inv_unit(M(c, c));
    R.scale(M.row(c), u);
    R.scale(I.row(c), u);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || !M(i, c)) continue;
      Entry f = R.neg(M(i, c));
      R.axpy(M.row(i), M.row(c), f);
      R.axpy(I.row(i), I.row(c), f);
    }
  }
  return I;
}

// Compressed sparse rows. Used for cochain differentials.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_start{0};
  std::vector<std::size_t> col_index;
  std::vector<Entry> values;

  // Entries may repeat a column; repeated entries are summed.
  void push_row(const ZMod& R, std::vector<std::pair<std::size_t, Entry>> entries) {
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size();) {
      std::size_t c = entries[i].first;
      Entry v = 0;
      for (; i < entries.size() && entries[i].first == c; ++i) v = R.add(v, entries[i].second);
      if (v == 0) continue;
      col_index.push_back(c);
      values.push_back(v);
    }
    row_start.push_back(col_index.size());
    ++rows;
  }

  std::size_t nnz() const { return values.size(); }

  Vec apply(const ZMod& R, std::span<const Entry> x) const {
    Vec y(rows, 0);
    for (std::size_t i = 0; i < rows; ++i) {
      Entry s = 0;
      for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) s = R.add(s, R.mul(values[k], x[col_index[k]]));
      y[i] = s;
    }
    return y;
  }

  Vec dense_row(std::size_t i) const {
    Vec v(cols, 0);
    for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k) v[col_index[k]] = values[k];
    return v;
  }

  // Columns as dense vectors; column j is the image of the j-th basis vector.
  std::vector<Vec> dense_columns(const ZMod& R) const {
    std::vector<Vec> out(cols, Vec(rows, 0));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k)
        out[col_index[k]][i] = R.add(out[col_index[k]][i], values[k]);
    return out;
  }
};

}  // namespace fk
