#pragma once

// Finite abelian p-groups in coordinates: subquotients of (Z/p^e)^n, homomorphisms between
// groups of the form Z/p^{a_1} + ... + Z/p^{a_n}, and their subgroups in canonical form.

#include <algorithm>
#include <optional>
#include <vector>

#include "fk/howell.hpp"
#include "fk/smith.hpp"

namespace fk {

// Z/B for B <= Z <= (Z/p^e)^n, with Z given by a triangular basis. Generators of the quotient
// follow the Smith diagonal, so their exponents come out nondecreasing.
class Subquotient {
 public:
  Subquotient() = default;

  Subquotient(TriangularBasis Z, const std::vector<Vec>& B) : Z_(std::move(Z)) {
    const ZMod& R = Z_.ring();
    const std::size_t t = Z_.size();
    HowellForm rel(R, t);
    for (auto& r : Z_.relations()) rel.insert(std::move(r));
    for (const auto& b : B) {
      auto rep = Z_.standard_rep(b);
      check(rep.has_value(), ErrorCode::Internal, "boundary is not a cycle");
      rel.insert(std::move(*rep));
    }
    auto rows = rel.rows();
    Matrix A(rows.size(), t);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < t; ++j) A(i, j) = rows[i].v[j];
    auto sm = smith_columns(R, std::move(A));
    W_ = std::move(sm.W);
    W_inv_ = std::move(sm.W_inv);
    for (std::size_t d = 0; d < t; ++d) {
      int f = sm.diag_val[d];
      if (f == 0) continue;
      active_.push_back(d);
      exps_.push_back(f);
    }
  }

  const ZMod& ring() const { return Z_.ring(); }
  std::size_t ngens() const { return active_.size(); }
  const std::vector<int>& exps() const { return exps_; }
  const TriangularBasis& cycles() const { return Z_; }

  std::size_t log_order() const {
    std::size_t s = 0;
    for (int f : exps_) s += static_cast<std::size_t>(f);
    return s;
  }

  std::optional<Vec> try_coords(const Vec& z) const {
    auto t = Z_.standard_rep(z);
    if (!t) return std::nullopt;
    const ZMod& R = ring();
    Vec y(active_.size(), 0);
    for (std::size_t i = 0; i < t->size(); ++i) {
      Entry c = (*t)[i];
      if (!c) continue;
      for (std::size_t a = 0; a < active_.size(); ++a) y[a] = R.add(y[a], R.mul(c, W_(i, active_[a])));
    }
    for (std::size_t a = 0; a < active_.size(); ++a) y[a] %= R.pow(exps_[a]);
    return y;
  }

  Vec coords(const Vec& z) const {
    auto y = try_coords(z);
    check(y.has_value(), ErrorCode::Internal, "vector does not lie in the cycle module");
    return *y;
  }

  Vec rep(std::size_t i) const { return Z_.combine(W_inv_.row(active_[i])); }

 private:
  TriangularBasis Z_;
  Matrix W_, W_inv_;
  std::vector<std::size_t> active_;
  std::vector<int> exps_;
};

struct AbelianGroup {
  std::uint32_t p = 2;
  std::vector<int> exps;

  std::size_t rank() const { return exps.size(); }
  int max_exp() const {
    int m = 1;
    for (int a : exps) m = std::max(m, a);
    return m;
  }
  std::size_t log_order() const {
    std::size_t s = 0;
    for (int a : exps) s += static_cast<std::size_t>(a);
    return s;
  }
  ZMod ring() const { return ZMod(p, max_exp()); }
  bool operator==(const AbelianGroup& o) const = default;
};

class AbSubgroup;

// Homomorphism given by a matrix acting on coordinate columns; row i is kept reduced mod p^{b_i}.
class Hom {
 public:
  Hom() = default;
  Hom(AbelianGroup src, AbelianGroup dst, Matrix m) : src_(std::move(src)), dst_(std::move(dst)), m_(std::move(m)) {
    check(m_.rows() == dst_.rank() && m_.cols() == src_.rank(), ErrorCode::Internal, "hom matrix shape");
    for (std::size_t i = 0; i < m_.rows(); ++i) {
      Entry qi = ZMod(dst_.p, std::max(dst_.exps[i], 1)).pow(dst_.exps[i]);
      for (std::size_t j = 0; j < m_.cols(); ++j) m_(i, j) %= qi;
    }
  }

  static Hom identity(const AbelianGroup& A) { return Hom(A, A, Matrix::identity(A.rank())); }
  static Hom zero(const AbelianGroup& A, const AbelianGroup& B) { return Hom(A, B, Matrix(B.rank(), A.rank())); }

  const AbelianGroup& src() const { return src_; }
  const AbelianGroup& dst() const { return dst_; }
  const Matrix& matrix() const { return m_; }

  ZMod ring() const { return ZMod(src_.p, std::max(src_.max_exp(), dst_.max_exp())); }

  // p^{a_j} * column j vanishes in the target.
  bool well_defined() const {
    ZMod R = ring();
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = 0; j < m_.cols(); ++j)
        if (R.mul(m_(i, j), R.pow(src_.exps[j])) % R.pow(dst_.exps[i]) != 0) return false;
    return true;
  }

  Vec apply(std::span<const Entry> x) const {
    ZMod R = ring();
    Vec y = mat_vec(R, m_, x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] %= R.pow(dst_.exps[i]);
    return y;
  }

  bool is_zero() const {
    for (std::size_t i = 0; i < m_.rows(); ++i)
      if (!fk::is_zero(m_.row(i))) return false;
    return true;
  }

  bool operator==(const Hom& o) const = default;

  AbSubgroup kernel() const;
  AbSubgroup image() const;

 private:
  AbelianGroup src_, dst_;
  Matrix m_;
};

// b after a.
inline Hom compose(const Hom& b, const Hom& a) {
  check(a.dst() == b.src(), ErrorCode::Internal, "composing homs with mismatched groups");
  int E = std::max({a.src().max_exp(), a.dst().max_exp(), b.dst().max_exp()});
  return Hom(a.src(), b.dst(), mat_mul(ZMod(a.src().p, E), b.matrix(), a.matrix()));
}

inline Hom operator+(const Hom& a, const Hom& b) {
  check(a.src() == b.src() && a.dst() == b.dst(), ErrorCode::Internal, "adding homs with mismatched groups");
  ZMod R = a.ring();
  Matrix m = a.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) R.axpy(m.row(i), b.matrix().row(i), 1);
  return Hom(a.src(), a.dst(), std::move(m));
}

inline Hom scaled(const Hom& a, Entry c) {
  ZMod R = a.ring();
  Matrix m = a.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) R.scale(m.row(i), R.red(c));
  return Hom(a.src(), a.dst(), std::move(m));
}

inline Hom operator-(const Hom& a, const Hom& b) {
  ZMod R = a.ring();
  return a + scaled(b, R.neg(1));
}

inline Hom power(const Hom& a, std::uint64_t n) {
  Hom result = Hom::identity(a.src());
  Hom base = a;
  while (n) {
    if (n & 1) result = compose(base, result);
    n >>= 1;
    if (n) base = compose(base, base);
  }
  return result;
}

// AbSubgroup U of A = sum Z/p^{a_j}, stored as the Howell form of its preimage in (Z/p^E)^n, which
// also contains the relation vectors p^{a_j} e_j. The form is canonical, so equality is syntactic.
class AbSubgroup {
 public:
  AbSubgroup() = default;
  AbSubgroup(AbelianGroup A, const std::vector<Vec>& gens) : A_(std::move(A)), H_(A_.ring(), A_.rank()) {
    for (auto& r : relation_rows(A_)) H_.insert(std::move(r));
    for (const auto& g : gens) H_.insert(g);
  }

  static AbSubgroup whole(const AbelianGroup& A) {
    std::vector<Vec> g;
    for (std::size_t i = 0; i < A.rank(); ++i) {
      Vec e(A.rank(), 0);
      e[i] = 1;
      g.push_back(std::move(e));
    }
    return AbSubgroup(A, g);
  }
  static AbSubgroup zero(const AbelianGroup& A) { return AbSubgroup(A, {}); }

  const AbelianGroup& ambient() const { return A_; }

  bool contains(const Vec& x) const { return H_.contains(x); }
  bool operator==(const AbSubgroup& o) const { return A_ == o.A_ && H_ == o.H_; }
  bool subset_of(const AbSubgroup& o) const {
    for (const auto& g : generators())
      if (!o.contains(g)) return false;
    return true;
  }

  std::size_t log_order() const {
    std::size_t s = H_.log_order();
    for (int a : A_.exps) s -= static_cast<std::size_t>(A_.max_exp() - a);
    return s;
  }

  // Nonzero Howell rows, reduced into the coordinate ranges of A.
  std::vector<Vec> generators() const {
    std::vector<Vec> out;
    ZMod R = A_.ring();
    for (auto& r : H_.rows()) {
      Vec v = r.v;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] %= R.pow(A_.exps[j]);
      if (!is_zero(v)) out.push_back(std::move(v));
    }
    return out;
  }

  std::vector<int> invariant_factors() const {
    return Subquotient(H_.row_basis(), relation_rows(A_)).exps();
  }

  AbSubgroup intersect(const AbSubgroup& o) const {
    check(A_ == o.A_, ErrorCode::Internal, "intersecting subgroups of different groups");
    const std::size_t n = A_.rank();
    HowellForm h(A_.ring(), 2 * n);
    for (const auto& r : H_.rows()) {
      Vec v(2 * n, 0);
      std::copy(r.v.begin(), r.v.end(), v.begin());
      std::copy(r.v.begin(), r.v.end(), v.begin() + static_cast<std::ptrdiff_t>(n));
      h.insert(std::move(v));
    }
    for (const auto& r : o.H_.rows()) {
      Vec v(2 * n, 0);
      std::copy(r.v.begin(), r.v.end(), v.begin());
      h.insert(std::move(v));
    }
    return AbSubgroup(A_, h.tail_rows(n));
  }

  AbSubgroup sum(const AbSubgroup& o) const {
    auto g = generators();
    for (auto& x : o.generators()) g.push_back(std::move(x));
    return AbSubgroup(A_, g);
  }

  static std::vector<Vec> relation_rows(const AbelianGroup& A) {
    std::vector<Vec> rows;
    ZMod R = A.ring();
    for (std::size_t j = 0; j < A.rank(); ++j) {
      if (A.exps[j] >= R.e()) continue;
      Vec v(A.rank(), 0);
      v[j] = R.pow(A.exps[j]);
      rows.push_back(std::move(v));
    }
    return rows;
  }

 private:
  AbelianGroup A_;
  HowellForm H_;
};

inline AbSubgroup Hom::kernel() const {
  const std::size_t nb = dst_.rank(), na = src_.rank();
  ZMod R = ring();
  HowellForm h(R, nb + na);
  for (std::size_t j = 0; j < na; ++j) {
    Vec v(nb + na, 0);
    for (std::size_t i = 0; i < nb; ++i) v[i] = m_(i, j);
    v[nb + j] = 1;
    h.insert(std::move(v));
  }
  for (std::size_t i = 0; i < nb; ++i) {
    if (dst_.exps[i] >= R.e()) continue;
    Vec v(nb + na, 0);
    v[i] = R.pow(dst_.exps[i]);
    h.insert(std::move(v));
  }
  auto tails = h.tail_rows(nb);
  ZMod Ra = src_.ring();
  for (auto& t : tails)
    for (auto& x : t) x = Ra.red(x);
  return AbSubgroup(src_, tails);
}

inline AbSubgroup Hom::image() const {
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < m_.cols(); ++j) cols.push_back(m_.column(j));
  return AbSubgroup(dst_, cols);
}

// Image of U under h.
inline AbSubgroup image_of(const Hom& h, const AbSubgroup& U) {
  std::vector<Vec> g;
  for (const auto& x : U.generators()) g.push_back(h.apply(x));
  return AbSubgroup(h.dst(), g);
}

}  // namespace fk
