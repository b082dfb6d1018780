#pragma once

// Smith normal form over Z/p^e (column transforms tracked) and over the integers.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <vector>

#include "fk/matrix.hpp"
#include "fk/zmod.hpp"

namespace fk {

struct SmithResult {
  // valuation of the d-th diagonal entry; e for a zero (or missing) diagonal entry
  std::vector<int> diag_val;
  Matrix W;     // A * W has the diagonal form up to invertible row operations
  Matrix W_inv;
};

// Diagonalizes A (rows are relations) by row and column operations, tracking the column
// transform W and its inverse. Diagonal valuations come out nondecreasing.
inline SmithResult smith_columns(const ZMod& R, Matrix A) {
  const std::size_t m = A.rows(), t = A.cols();
  SmithResult res{std::vector<int>(t, R.e()), Matrix::identity(t), Matrix::identity(t)};
  for (std::size_t d = 0; d < std::min(m, t); ++d) {
    int best = R.e();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = d; i < m && best > 0; ++i)
      for (std::size_t j = d; j < t; ++j) {
        Entry x = A(i, j);
        if (!x) continue;
        int v = R.val(x);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == R.e()) break;
    A.swap_rows(d, bi);
    A.swap_cols(d, bj);
    res.W.swap_cols(d, bj);
    res.W_inv.swap_rows(d, bj);
    Entry u = R.unit_part_inv(A(d, d));
    R.scale(A.row(d), u);
    const Entry pv = R.pow(best);
    for (std::size_t i = d + 1; i < m; ++i) {
      Entry x = A(i, d);
      if (!x) continue;
      R.axpy(A.row(i), A.row(d), R.neg(x / pv), d);
    }
    for (std::size_t j = d + 1; j < t; ++j) {
      Entry x = A(d, j);
      if (!x) continue;
      Entry f = x / pv;
      A(d, j) = 0;  // column d is zero off the diagonal
      for (std::size_t i = 0; i < t; ++i) res.W(i, j) = R.sub(res.W(i, j), R.mul(f, res.W(i, d)));
      R.axpy(res.W_inv.row(d), res.W_inv.row(j), f);
    }
    res.diag_val[d] = best;
  }
  return res;
}

// Integer diagonalization for abelianizations. Relations are rows; returns diagonal entries
// (0 for free factors) and the column transform V, so generator i maps to row i of V.
struct IntSmithResult {
  std::vector<std::int64_t> diag;  // length = number of columns
  std::vector<std::vector<std::int64_t>> V;
};

namespace detail {
inline std::int64_t checked(__int128 x) {
  check(x < (__int128{1} << 62) && x > -(__int128{1} << 62), ErrorCode::TooLarge,
        "integer overflow during Smith reduction");
  return static_cast<std::int64_t>(x);
}
}  // namespace detail

inline IntSmithResult int_smith(std::vector<std::vector<std::int64_t>> A, std::size_t cols) {
  const std::size_t m = A.size(), t = cols;
  IntSmithResult res;
  res.diag.assign(t, 0);
  res.V.assign(t, std::vector<std::int64_t>(t, 0));
  for (std::size_t i = 0; i < t; ++i) res.V[i][i] = 1;

  auto col_op = [&](std::size_t dst, std::size_t src, std::int64_t f) {  // col_dst -= f * col_src
    if (!f) return;
    for (std::size_t i = 0; i < m; ++i)
      if (A[i][src]) A[i][dst] = detail::checked(__int128{A[i][dst]} - __int128{f} * A[i][src]);
    for (std::size_t i = 0; i < t; ++i)
      if (res.V[i][src]) res.V[i][dst] = detail::checked(__int128{res.V[i][dst]} - __int128{f} * res.V[i][src]);
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& r : A) std::swap(r[a], r[b]);
    for (auto& r : res.V) std::swap(r[a], r[b]);
  };

  std::size_t d = 0;
  for (; d < std::min(m, t); ++d) {
    while (true) {
      std::int64_t best = 0;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = d; i < m; ++i)
        for (std::size_t j = d; j < t; ++j) {
          std::int64_t x = std::llabs(A[i][j]);
          if (x && (best == 0 || x < best)) {
            best = x;
            bi = i;
            bj = j;
          }
        }
      if (best == 0) {
        d = std::min(m, t);
        break;
      }
      std::swap(A[d], A[bi]);
      swap_cols(d, bj);
      bool clean = true;
      for (std::size_t i = d + 1; i < m; ++i) {
        if (!A[i][d]) continue;
        std::int64_t f = A[i][d] / A[d][d];
        for (std::size_t j = d; j < t; ++j)
          if (A[d][j]) A[i][j] = detail::checked(__int128{A[i][j]} - __int128{f} * A[d][j]);
        if (A[i][d]) clean = false;
      }
      for (std::size_t j = d + 1; j < t; ++j) {
        if (!A[d][j]) continue;
        col_op(j, d, A[d][j] / A[d][d]);
        if (A[d][j]) clean = false;
      }
      if (clean) break;
    }
    if (d >= std::min(m, t)) break;
    res.diag[d] = std::llabs(A[d][d]);
  }
  return res;
}

// Prime-power decomposition of a list of cyclic orders, regrouped as invariant factors
// n_1 | n_2 | ... ; zeros (free factors) are kept at the end.
inline std::vector<std::int64_t> invariant_factors(const std::vector<std::int64_t>& orders) {
  std::map<std::int64_t, std::vector<std::int64_t>> by_prime;
  std::size_t free_rank = 0;
  for (std::int64_t n : orders) {
    if (n == 0) {
      ++free_rank;
      continue;
    }
    for (std::int64_t q = 2; n > 1; ++q) {
      if (q * q > n) q = n;
      if (n % q) continue;
      std::int64_t pp = 1;
      while (n % q == 0) {
        n /= q;
        pp *= q;
      }
      by_prime[q].push_back(pp);
    }
  }
  std::size_t len = 0;
  for (auto& [p, v] : by_prime) {
    std::sort(v.begin(), v.end());
    len = std::max(len, v.size());
  }
  std::vector<std::int64_t> out(len, 1);
  for (auto& [p, v] : by_prime)
    for (std::size_t i = 0; i < v.size(); ++i) out[len - v.size() + i] *= v[i];
  out.insert(out.end(), free_rank, 0);
  return out;
}

}  // namespace fk
