#pragma once

// Howell normal form over Z/p^e and triangular generating sets of submodules of (Z/p^e)^n.
//
// A HowellForm keeps at most one row per pivot column. Pivot entries are normalized to p^v,
// entries of other rows in a pivot column are reduced into [0, p^v), and for every row with
// v > 0 the annihilator multiple p^(e-v) * row lies in the span of the rows below it. With these
// three properties the row set is a canonical description of the submodule it spans.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fk/matrix.hpp"
#include "fk/zmod.hpp"

namespace fk {

// Generators g_0, ..., g_{m-1} of a submodule Z, each with a key column k_i whose entry is
// exactly p^{v_i}, such that g_i vanishes on the keys of all earlier generators. Every z in Z then
// has a unique standard representation z = sum t_i g_i with 0 <= t_i < p^{e - v_i}.
class TriangularBasis {
 public:
  TriangularBasis() = default;
  TriangularBasis(ZMod R, std::size_t n) : R_(R), n_(n) {}

  const ZMod& ring() const { return R_; }
  std::size_t ambient_dim() const { return n_; }
  std::size_t size() const { return gens_.size(); }
  const Vec& gen(std::size_t i) const { return gens_[i]; }
  std::size_t key(std::size_t i) const { return keys_[i]; }
  int key_val(std::size_t i) const { return key_vals_[i]; }

  void push(Vec g, std::size_t key, int key_val) {
    gens_.push_back(std::move(g));
    keys_.push_back(key);
    key_vals_.push_back(key_val);
  }

  // Standard representation; std::nullopt if z is not in the span.
  std::optional<Vec> standard_rep(Vec z) const {
    Vec t(gens_.size(), 0);
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      Entry x = z[keys_[i]];
      if (x == 0) continue;
      Entry pk = R_.pow(key_vals_[i]);
      if (x % pk != 0) return std::nullopt;
      t[i] = x / pk;
      R_.axpy(z, gens_[i], R_.neg(t[i]));
    }
    if (!is_zero(z)) return std::nullopt;
    return t;
  }

  // Relations p^{e-v_i} e_i - rep(p^{e-v_i} g_i) among the generators; together with q * e_i they
  // generate all relations.
  std::vector<Vec> relations() const {
    std::vector<Vec> rels;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      int v = key_vals_[i];
      if (v == 0) continue;
      Entry m = R_.pow(R_.e() - v);
      Vec w = gens_[i];
      R_.scale(w, m);
      auto t = standard_rep(std::move(w));
      check(t.has_value(), ErrorCode::Internal, "triangular basis is not closed under annihilators");
      Vec rel(gens_.size(), 0);
      for (std::size_t j = 0; j < gens_.size(); ++j) rel[j] = R_.neg((*t)[j]);
      rel[i] = R_.add(rel[i], m);
      rels.push_back(std::move(rel));
    }
    return rels;
  }

  Vec combine(std::span<const Entry> coeffs) const {
    Vec z(n_, 0);
    for (std::size_t i = 0; i < gens_.size(); ++i) R_.axpy(z, gens_[i], coeffs[i]);
    return z;
  }

 private:
  ZMod R_;
  std::size_t n_ = 0;
  std::vector<Vec> gens_;
  std::vector<std::size_t> keys_;
  std::vector<int> key_vals_;
};

class HowellForm {
 public:
  struct Row {
    std::size_t col;
    int val;
    Vec v;
  };

  HowellForm() = default;
  HowellForm(ZMod R, std::size_t n) : R_(R), n_(n), slot_(n, -1) {}

  const ZMod& ring() const { return R_; }
  std::size_t ambient_dim() const { return n_; }

  void insert(Vec v) {
    pending_.push_back(std::move(v));
    drain();
    closed_ = false;
  }

  void insert_sparse(const SparseMatrix& m, std::size_t row) {
    Vec v(n_, 0);
    for (std::size_t k = m.row_start[row]; k < m.row_start[row + 1]; ++k) v[m.col_index[k]] = m.values[k];
    insert(std::move(v));
  }

  // Restores the annihilator property; called lazily by every query.
  void close() const {
    if (closed_) return;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t s = 0; s < rows_.size(); ++s) {
        int v = rows_[s].val;
        if (v == 0) continue;
        Vec w = rows_[s].v;
        R_.scale(w, R_.pow(R_.e() - v));
        if (!reduces_to_zero(w)) {
          pending_.push_back(std::move(w));
          drain();
          changed = true;
          break;
        }
      }
    }
    closed_ = true;
  }

  std::size_t rank() const {
    close();
    return rows_.size();
  }

  // Rows in ascending pivot-column order.
  std::vector<Row> rows() const {
    close();
    std::vector<Row> out(rows_.begin(), rows_.end());
    std::sort(out.begin(), out.end(), [](const Row& a, const Row& b) { return a.col < b.col; });
    return out;
  }

  // log_p of the order of the spanned submodule.
  std::size_t log_order() const {
    close();
    std::size_t s = 0;
    for (const auto& r : rows_) s += static_cast<std::size_t>(R_.e() - r.val);
    return s;
  }

  bool contains(Vec v) const {
    close();
    return reduces_to_zero(v);
  }

  // Clears the columns of v below `limit` using the rows pivoting there. Returns false if some
  // such column cannot be cleared; on success v keeps the residual in columns >= limit.
  bool reduce_prefix(Vec& v, std::size_t limit) const {
    close();
    for (std::size_t c = 0; c < limit; ++c) {
      if (!v[c]) continue;
      int s = slot_[c];
      if (s < 0) return false;
      const Row& r = rows_[s];
      if (R_.val(v[c]) < r.val) return false;
      R_.axpy(v, r.v, R_.neg(v[c] / R_.pow(r.val)), c);
    }
    return true;
  }

  // Tails (columns >= limit) of the rows whose pivot lies at or beyond `limit`. For a row span U
  // these generate {x : (0, x) in U}.
  std::vector<Vec> tail_rows(std::size_t limit) const {
    std::vector<Vec> out;
    for (auto& r : rows())
      if (r.col >= limit) out.emplace_back(r.v.begin() + static_cast<std::ptrdiff_t>(limit), r.v.end());
    return out;
  }

  bool operator==(const HowellForm& o) const {
    if (!(R_ == o.R_) || n_ != o.n_) return false;
    auto a = rows();
    auto b = o.rows();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].col != b[i].col || a[i].val != b[i].val || a[i].v != b[i].v) return false;
    return true;
  }

  TriangularBasis row_basis() const {
    TriangularBasis tb(R_, n_);
    for (auto& r : rows()) tb.push(std::move(r.v), r.col, r.val);
    return tb;
  }

  // Generators of {x : <row, x> = 0 for every row}, i.e. the kernel of the matrix whose rows are
  // the Howell rows (equivalently of any matrix with the same row span).
  TriangularBasis kernel() const {
    auto rs = rows();
    std::vector<char> is_pivot(n_, 0);
    for (const auto& r : rs) is_pivot[r.col] = 1;
    const int e = R_.e();
    TriangularBasis tb(R_, n_);

    // Solve pivot variables from the bottom row up, for rows whose pivot column is < limit.
    auto back_substitute = [&](Vec& x, std::vector<std::size_t>& nz, std::size_t limit) {
      for (std::size_t ii = rs.size(); ii-- > 0;) {
        const auto& r = rs[ii];
        if (r.col >= limit) continue;
        Entry s = 0;
        for (std::size_t c : nz)
          if (c > r.col) s = R_.add(s, R_.mul(r.v[c], x[c]));
        if (s == 0) continue;
        Entry pv = R_.pow(r.val);
        check(s % pv == 0, ErrorCode::Internal, "Howell kernel back-substitution failed");
        x[r.col] = R_.neg(s / pv);
        if (x[r.col]) nz.push_back(r.col);
      }
    };

    for (std::size_t c = 0; c < n_; ++c) {
      if (is_pivot[c]) continue;
      Vec x(n_, 0);
      x[c] = 1;
      if (e == 1) {
        // Reduced echelon rows vanish on other pivot columns.
        for (const auto& r : rs)
          if (r.col < c && r.v[c]) x[r.col] = R_.neg(r.v[c]);
      } else {
        std::vector<std::size_t> nz{c};
        back_substitute(x, nz, c);
      }
      tb.push(std::move(x), c, 0);
    }
    for (std::size_t ii = rs.size(); ii-- > 0;) {
      const auto& r = rs[ii];
      if (r.val == 0) continue;
      Vec x(n_, 0);
      x[r.col] = R_.pow(e - r.val);
      std::vector<std::size_t> nz{r.col};
      back_substitute(x, nz, r.col);
      tb.push(std::move(x), r.col, e - r.val);
    }
    return tb;
  }

 private:
  bool reduces_to_zero(Vec& v) const {
    for (std::size_t c = 0; c < n_; ++c) {
      if (!v[c]) continue;
      int s = slot_[c];
      if (s < 0) return false;
      const Row& r = rows_[s];
      if (R_.val(v[c]) < r.val) return false;
      R_.axpy(v, r.v, R_.neg(v[c] / R_.pow(r.val)), c);
    }
    return true;
  }

  void reduce_tail(Vec& v, std::size_t from, int own_slot) const {
    for (std::size_t c = from; c < n_; ++c) {
      if (!v[c]) continue;
      int s = slot_[c];
      if (s < 0 || s == own_slot) continue;
      const Row& r = rows_[s];
      Entry t = v[c] / R_.pow(r.val);
      if (t) R_.axpy(v, r.v, R_.neg(t), c);
    }
  }

  void drain() const {
    while (!pending_.empty()) {
      Vec v = std::move(pending_.back());
      pending_.pop_back();
      place(std::move(v));
    }
  }

  void place(Vec v) const {
    for (std::size_t c = 0; c < n_; ++c) {
      if (!v[c]) continue;
      int s = slot_[c];
      int vv = R_.val(v[c]);
      if (s >= 0 && rows_[s].val <= vv) {
        R_.axpy(v, rows_[s].v, R_.neg(v[c] / R_.pow(rows_[s].val)), c);
        continue;
      }
      Entry u = R_.unit_part_inv(v[c]);
      for (std::size_t i = c; i < n_; ++i) v[i] = R_.mul(v[i], u);
      reduce_tail(v, c + 1, s);
      if (vv > 0) {
        Vec a = v;
        R_.scale(a, R_.pow(R_.e() - vv));
        if (!is_zero(a)) pending_.push_back(std::move(a));
      }
      int slot;
      if (s >= 0) {
        pending_.push_back(std::move(rows_[s].v));
        rows_[s] = Row{c, vv, std::move(v)};
        slot = s;
      } else {
        slot = static_cast<int>(rows_.size());
        rows_.push_back(Row{c, vv, std::move(v)});
        slot_[c] = slot;
      }
      const Row& piv = rows_[slot];
      Entry pv = R_.pow(vv);
      for (std::size_t o = 0; o < rows_.size(); ++o) {
        if (static_cast<int>(o) == slot) continue;
        Row& r = rows_[o];
        if (r.col > c || !r.v[c]) continue;
        Entry t = r.v[c] / pv;
        if (!t) continue;
        R_.axpy(r.v, piv.v, R_.neg(t), c);
        reduce_tail(r.v, c + 1, static_cast<int>(o));
      }
      return;
    }
  }

  ZMod R_;
  std::size_t n_ = 0;
  // Closing the form is lazy, so queries may still rewrite the rows.
  mutable std::vector<Row> rows_;
  mutable std::vector<int> slot_;
  mutable std::vector<Vec> pending_;
  mutable bool closed_ = true;
};

}  // namespace fk
