#pragma once

// Cochain complexes over Z/p^e and their cohomology, the normalized bar complex of a subgroup,
// and the maps between bar complexes: restriction, transfer, twisted maps, maps induced by
// coefficient homomorphisms, and connecting homomorphisms.

#include <functional>
#include <memory>
#include <mutex>
#include <random>

#include "fk/abelian.hpp"
#include "fk/module.hpp"
#include "fk/parallel.hpp"

namespace fk {

// Kernel of x -> d x. Tall matrices are first compressed to random combinations of their rows;
// the candidate kernel is then checked against every row, and failing rows are added until the
// check passes, so the result is exact.
inline TriangularBasis sparse_kernel(const ZMod& R, const SparseMatrix& d) {
  const std::size_t n = d.cols;
  HowellForm h(R, n);
  if (d.rows <= 2 * n + 64) {
    for (std::size_t i = 0; i < d.rows; ++i) h.insert_sparse(d, i);
    return h.kernel();
  }
  const std::size_t batch = n + 32;
  std::vector<Vec> acc(n, Vec(batch, 0));  // acc[col][b]
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ (d.rows * 131 + n));
  Vec c(batch);
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (auto& x : c) x = R.red(rng());
    for (std::size_t k = d.row_start[i]; k < d.row_start[i + 1]; ++k) {
      Entry v = d.values[k];
      auto& a = acc[d.col_index[k]];
      for (std::size_t b = 0; b < batch; ++b) a[b] = R.red(a[b] + v * c[b]);
    }
  }
  for (std::size_t b = 0; b < batch; ++b) {
    Vec row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = acc[j][b];
    h.insert(std::move(row));
  }
  acc.clear();
  while (true) {
    auto K = h.kernel();
    std::vector<std::size_t> bad;
    for (std::size_t g = 0; g < K.size() && bad.size() < 64; ++g) {
      Vec y = d.apply(R, K.gen(g));
      for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i]) bad.push_back(i);
    }
    if (bad.empty()) return K;
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    for (std::size_t i : bad) h.insert_sparse(d, i);
  }
}

class CohomologyGroup {
 public:
  CohomologyGroup(int k, TriangularBasis Z, const std::vector<Vec>& B) : k_(k), sq_(std::move(Z), B) {}

  int degree() const { return k_; }
  std::size_t ngens() const { return sq_.ngens(); }
  const std::vector<int>& exps() const { return sq_.exps(); }
  std::size_t log_order() const { return sq_.log_order(); }
  AbelianGroup group() const { return AbelianGroup{sq_.ring().p(), sq_.exps()}; }
  std::vector<std::int64_t> invariant_factors() const {
    std::vector<std::int64_t> out;
    for (int f : sq_.exps()) {
      std::int64_t q = 1;
      for (int i = 0; i < f; ++i) q *= sq_.ring().p();
      out.push_back(q);
    }
    return out;
  }
  const TriangularBasis& cocycles() const { return sq_.cycles(); }
  bool is_cocycle(const Vec& z) const { return sq_.cycles().standard_rep(z).has_value(); }
  Vec coords(const Vec& z) const { return sq_.coords(z); }
  Vec rep(std::size_t i) const { return sq_.rep(i); }

 private:
  int k_;
  Subquotient sq_;
};

// Cochain complex with lazily built differentials d_k: C^k -> C^{k+1}, k < max_degree.
class CochainComplex {
 public:
  CochainComplex(ZMod R, int max_degree) : R_(R), D_(max_degree) {}
  virtual ~CochainComplex() = default;

  const ZMod& ring() const { return R_; }
  int max_degree() const { return D_; }
  virtual std::size_t dim(int k) const = 0;

  const SparseMatrix& differential(int k) const {
    check(k >= 0 && k < D_, ErrorCode::DegreeOutOfRange, "differential degree out of range");
    std::lock_guard<std::recursive_mutex> lock(mu_);
    if (d_.size() <= static_cast<std::size_t>(k)) d_.resize(k + 1);
    if (!d_[k]) d_[k] = std::make_unique<SparseMatrix>(build(k));
    return *d_[k];
  }

  const CohomologyGroup& cohomology(int k) const {
    check(k >= 0 && k + 1 <= D_, ErrorCode::DegreeOutOfRange,
          "H^" + std::to_string(k) + " needs degree cap at least " + std::to_string(k + 1));
    std::lock_guard<std::recursive_mutex> lock(mu_);
    if (h_.size() <= static_cast<std::size_t>(k)) h_.resize(k + 1);
    if (!h_[k]) {
      TriangularBasis Z = sparse_kernel(R_, differential(k));
      std::vector<Vec> B;
      if (k > 0) B = differential(k - 1).dense_columns(R_);
      h_[k] = std::make_unique<CohomologyGroup>(k, std::move(Z), B);
    }
    return *h_[k];
  }

  Vec apply_d(int k, const Vec& f) const { return differential(k).apply(R_, f); }

 protected:
  virtual SparseMatrix build(int k) const = 0;

 private:
  ZMod R_;
  int D_;
  mutable std::recursive_mutex mu_;
  mutable std::vector<std::unique_ptr<SparseMatrix>> d_;
  mutable std::vector<std::unique_ptr<CohomologyGroup>> h_;
};

// The map H^k(src) -> H^k'(dst) induced by a cochain map given on vectors.
inline Hom induced_map(const CohomologyGroup& src, const CohomologyGroup& dst,
                       const std::function<Vec(const Vec&)>& f) {
  Matrix m(dst.ngens(), src.ngens());
  for (std::size_t i = 0; i < src.ngens(); ++i) {
    Vec y = dst.coords(f(src.rep(i)));
    for (std::size_t j = 0; j < y.size(); ++j) m(j, i) = y[j];
  }
  return Hom(src.group(), dst.group(), std::move(m));
}

// Normalized inhomogeneous bar complex of P with coefficients in M. A k-cochain is a vector of
// length r (|P|-1)^k; chains (g_1, ..., g_k) of non-identity elements are numbered in mixed radix
// with g_1 most significant, and component a of the value at chain c sits at c*r + a.
class BarComplex : public CochainComplex {
 public:
  static constexpr std::size_t kMaxRows = std::size_t{1} << 22;

  BarComplex(GroupPtr G, Subgroup P, CoefModule M, int max_degree)
      : CochainComplex(M.ring(), max_degree), G_(std::move(G)), P_(std::move(P)), M_(std::move(M)) {
    for (Elem x : P_.elems) {
      check(M_.acts(x), ErrorCode::InvalidInput, "module action undefined on the subgroup");
      if (x != 0) nontriv_.push_back(x);
    }
    pos_.assign(G_->order(), -1);
    for (std::size_t i = 0; i < nontriv_.size(); ++i) pos_[nontriv_[i]] = static_cast<int>(i);
    std::size_t rows = M_.rank();
    for (int k = 0; k < max_degree; ++k) rows *= std::max<std::size_t>(nontriv_.size(), 1);
    check(rows <= kMaxRows, ErrorCode::DegreeTooLarge,
          "C^" + std::to_string(max_degree) + " would have " + std::to_string(rows) + " coordinates");
    for (Elem x : P_.elems) act_.emplace(x, M_.action(x));
  }

  const FiniteGroup& group() const { return *G_; }
  const GroupPtr& group_ptr() const { return G_; }
  const Subgroup& subgroup() const { return P_; }
  const CoefModule& module() const { return M_; }
  std::size_t rank() const { return M_.rank(); }
  std::size_t m() const { return nontriv_.size(); }
  const std::vector<Elem>& nontrivial() const { return nontriv_; }
  const Matrix& action(Elem x) const { return act_.at(x); }

  std::size_t num_chains(int k) const {
    std::size_t c = 1;
    for (int i = 0; i < k; ++i) c *= m();
    return c;
  }
  std::size_t dim(int k) const override { return num_chains(k) * M_.rank(); }

  // Chain number of (g_1, ..., g_k); -1 if some g_i is the identity.
  long chain_index(std::span<const Elem> g) const {
    std::size_t idx = 0;
    for (Elem x : g) {
      int p = pos_[x];
      if (p < 0) return -1;
      idx = idx * m() + static_cast<std::size_t>(p);
    }
    return static_cast<long>(idx);
  }

  std::vector<Elem> chain(int k, std::size_t idx) const {
    std::vector<Elem> g(k);
    for (int i = k - 1; i >= 0; --i) {
      g[i] = nontriv_[idx % m()];
      idx /= m();
    }
    return g;
  }

 protected:
  SparseMatrix build(int k) const override {
    const ZMod& R = ring();
    const std::size_t r = M_.rank();
    SparseMatrix d;
    d.cols = dim(k);
    const std::size_t out = num_chains(k + 1);
    const Entry sign_last = (k + 1) % 2 ? R.neg(1) : 1;
    std::vector<std::pair<std::size_t, Entry>> row;
    std::vector<Elem> tmp;
    for (std::size_t c = 0; c < out; ++c) {
      auto g = chain(k + 1, c);
      const Matrix& A = action(g[0]);
      std::span<const Elem> gs(g);
      long first = k == 0 ? 0 : chain_index(gs.subspan(1));
      long last = k == 0 ? 0 : chain_index(gs.subspan(0, k));
      std::vector<long> inner;
      for (int i = 1; i <= k; ++i) {
        tmp.assign(g.begin(), g.end());
        Elem prod = G_->mul(g[i - 1], g[i]);
        if (prod == 0) {
          inner.push_back(-1);
          continue;
        }
        tmp[i - 1] = prod;
        tmp.erase(tmp.begin() + i);
        inner.push_back(chain_index(tmp));
      }
      for (std::size_t a = 0; a < r; ++a) {
        row.clear();
        for (std::size_t b = 0; b < r; ++b)
          if (A(a, b)) row.emplace_back(first * r + b, A(a, b));
        for (int i = 1; i <= k; ++i)
          if (inner[i - 1] >= 0) row.emplace_back(inner[i - 1] * r + a, i % 2 ? R.neg(1) : 1);
        row.emplace_back(last * r + a, sign_last);
        d.push_row(R, row);
      }
    }
    return d;
  }

 private:
  GroupPtr G_;
  Subgroup P_;
  CoefModule M_;
  std::vector<Elem> nontriv_;
  std::vector<int> pos_;
  std::map<Elem, Matrix> act_;
};

using BarPtr = std::shared_ptr<const BarComplex>;

// Bar complexes of the subgroups of one group with one module, built on demand and shared.
class BarFamily {
 public:
  BarFamily(GroupPtr G, CoefModule M, int max_degree) : G_(std::move(G)), M_(std::move(M)), D_(max_degree) {}

  const CoefModule& module() const { return M_; }
  int max_degree() const { return D_; }

  BarPtr at(const Subgroup& P) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(P.elems);
    if (it != cache_.end()) return it->second;
    auto cx = std::make_shared<const BarComplex>(G_, P, M_, D_);
    cache_.emplace(P.elems, cx);
    return cx;
  }

 private:
  GroupPtr G_;
  CoefModule M_;
  int D_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<Elem>, BarPtr> cache_;
};

// f -> alpha^{-1} o f o phi^k, from C^k(P1) to C^k(P0). phi is a table on the elements of P0.
inline Vec twisted_cochain(const BarComplex& src, const BarComplex& dst, int k, const std::vector<Elem>& phi,
                           const Matrix& alpha_inv, const Vec& f) {
  const ZMod& R = dst.ring();
  const std::size_t r = dst.rank();
  const Subgroup& P0 = dst.subgroup();
  Vec out(dst.dim(k), 0);
  std::vector<Elem> img(k);
  for (std::size_t c = 0; c < dst.num_chains(k); ++c) {
    auto g = dst.chain(k, c);
    for (int i = 0; i < k; ++i) img[i] = phi[static_cast<std::size_t>(P0.pos(g[i]))];
    long s = src.chain_index(img);
    if (s < 0) continue;
    std::span<const Entry> v(f.data() + s * r, r);
    Vec w = mat_vec(R, alpha_inv, v);
    std::copy(w.begin(), w.end(), out.begin() + static_cast<std::ptrdiff_t>(c * r));
  }
  return out;
}

// The map H^k(P1, M) -> H^k(P0, M) of a morphism phi: P0 -> P1 together with an automorphism
// alpha of M such that x . alpha^{-1}(m) = alpha^{-1}(phi(x) . m) for x in P0.
inline Hom twisted_map(const BarComplex& cx1, const BarComplex& cx0, const std::vector<Elem>& phi,
                       const Matrix& alpha, int k) {
  const ZMod& R = cx0.ring();
  const Subgroup& P0 = cx0.subgroup();
  check(phi.size() == P0.order(), ErrorCode::InvalidInput, "map table size differs from the domain");
  for (Elem y : phi) check(cx1.subgroup().contains(y), ErrorCode::InvalidInput, "map leaves the target");
  Matrix ainv = mat_inverse(R, alpha);
  for (std::size_t i = 0; i < P0.order(); ++i) {
    Matrix lhs = mat_mul(R, cx0.action(P0.elems[i]), ainv);
    Matrix rhs = mat_mul(R, ainv, cx1.action(phi[i]));
    check(lhs == rhs, ErrorCode::EquivarianceViolated, "coefficient map is not equivariant along the morphism");
  }
  return induced_map(cx1.cohomology(k), cx0.cohomology(k),
                     [&](const Vec& f) { return twisted_cochain(cx1, cx0, k, phi, ainv, f); });
}

inline Hom restriction(const BarComplex& cxQ, const BarComplex& cxP, int k) {
  check(cxP.subgroup().subset_of(cxQ.subgroup()), ErrorCode::NotSubgroup, "restriction to a non-subgroup");
  return twisted_map(cxQ, cxP, cxP.subgroup().elems, Matrix::identity(cxP.rank()), k);
}

// Right cosets P u of P in Q with representatives u; t(x) is the representative of P x.
struct CosetData {
  std::vector<Elem> reps;
  std::vector<Elem> rep_of;  // indexed by element of G, valid on Q
};

inline CosetData right_cosets(const FiniteGroup& G, const Subgroup& P, const Subgroup& Q, bool alt = false) {
  CosetData cd;
  cd.rep_of.assign(G.order(), 0);
  std::vector<char> seen(G.order(), 0);
  std::vector<Elem> order = Q.elems;
  if (alt) std::reverse(order.begin(), order.end());
  for (Elem u : order) {
    if (seen[u]) continue;
    cd.reps.push_back(u);
    for (Elem p : P.elems) {
      Elem x = G.mul(p, u);
      seen[x] = 1;
      cd.rep_of[x] = u;
    }
  }
  return cd;
}

// Transfer C^k(P) -> C^k(Q) for P <= Q: with rbar(x) = x t(x)^{-1} in P,
// tr f(g_1..g_k) = sum_u u^{-1} . f(h_1, h_1^{-1} h_2, ..., h_{k-1}^{-1} h_k), h_i = rbar(u g_1 ... g_i).
inline Vec transfer_cochain(const BarComplex& cxP, const BarComplex& cxQ, int k, const CosetData& cd,
                            const Vec& f) {
  const FiniteGroup& G = cxQ.group();
  const ZMod& R = cxQ.ring();
  const std::size_t r = cxQ.rank();
  Vec out(cxQ.dim(k), 0);
  std::vector<Elem> args(k);
  for (std::size_t c = 0; c < cxQ.num_chains(k); ++c) {
    auto g = cxQ.chain(k, c);
    for (Elem u : cd.reps) {
      Elem acc = u, prev = 0;
      for (int i = 0; i < k; ++i) {
        acc = G.mul(acc, g[i]);
        Elem h = G.mul(acc, G.inv(cd.rep_of[acc]));
        args[i] = G.mul(G.inv(prev), h);
        prev = h;
      }
      long s = cxP.chain_index(args);
      if (s < 0) continue;
      Vec w = mat_vec(R, cxQ.action(G.inv(u)), std::span<const Entry>(f.data() + s * r, r));
      R.axpy(std::span<Entry>(out.data() + c * r, r), w, 1);
    }
  }
  return out;
}

inline Hom transfer(const BarComplex& cxP, const BarComplex& cxQ, int k, bool alt_reps = false) {
  check(cxP.subgroup().subset_of(cxQ.subgroup()), ErrorCode::NotSubgroup, "transfer from a non-subgroup");
  CosetData cd = right_cosets(cxQ.group(), cxP.subgroup(), cxQ.subgroup(), alt_reps);
  return induced_map(cxP.cohomology(k), cxQ.cohomology(k),
                     [&](const Vec& f) { return transfer_cochain(cxP, cxQ, k, cd, f); });
}

// Value-wise application of a module map, C^k(P; M) -> C^k(P; N).
inline Vec module_cochain(const BarComplex& cxM, const BarComplex& cxN, int k, const ModuleMap& A, const Vec& f) {
  const std::size_t rm = cxM.rank(), rn = cxN.rank();
  Vec out(cxN.dim(k), 0);
  for (std::size_t c = 0; c < cxM.num_chains(k); ++c) {
    Vec w = A.apply(std::span<const Entry>(f.data() + c * rm, rm));
    std::copy(w.begin(), w.end(), out.begin() + static_cast<std::ptrdiff_t>(c * rn));
  }
  return out;
}

inline Hom module_map_induced(const BarComplex& cxM, const BarComplex& cxN, const ModuleMap& A, int k) {
  check(cxM.subgroup() == cxN.subgroup(), ErrorCode::InvalidInput, "module map between different groups");
  check(A.equivariant(cxM.module(), cxN.module(), cxM.subgroup().elems), ErrorCode::EquivarianceViolated,
        "module map is not equivariant");
  return induced_map(cxM.cohomology(k), cxN.cohomology(k),
                     [&](const Vec& f) { return module_cochain(cxM, cxN, k, A, f); });
}

// delta: H^k(P; N) -> H^{k+1}(P; L), z -> iota^{-1}(d(s o z)) for the set-level section s.
inline Hom connecting_hom(const ShortExactSeq& ses, const BarComplex& cxL, const BarComplex& cxM,
                          const BarComplex& cxN, int k, bool alt_section = false) {
  const std::size_t rl = cxL.rank(), rm = cxM.rank(), rn = cxN.rank();
  auto lift = [&](const Vec& z) {
    Vec m(cxM.dim(k), 0);
    for (std::size_t c = 0; c < cxN.num_chains(k); ++c) {
      Vec s = ses.section(std::span<const Entry>(z.data() + c * rn, rn), alt_section);
      std::copy(s.begin(), s.end(), m.begin() + static_cast<std::ptrdiff_t>(c * rm));
    }
    Vec dm = cxM.apply_d(k, m);
    Vec y(cxL.dim(k + 1), 0);
    for (std::size_t c = 0; c < cxM.num_chains(k + 1); ++c) {
      Vec v(dm.begin() + static_cast<std::ptrdiff_t>(c * rm), dm.begin() + static_cast<std::ptrdiff_t>((c + 1) * rm));
      auto pre = ses.preimage(v);
      check(pre.has_value(), ErrorCode::NotExact, "lifted coboundary leaves the image of iota");
      std::copy(pre->begin(), pre->end(), y.begin() + static_cast<std::ptrdiff_t>(c * rl));
    }
    return y;
  };
  return induced_map(cxN.cohomology(k), cxL.cohomology(k + 1), lift);
}

}  // namespace fk
