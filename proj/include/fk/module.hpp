#pragma once

// Coefficient modules M = (Z/p^e)^r with a group action, module maps between them, and short
// exact sequences.

#include <optional>
#include <vector>

#include "fk/abelian.hpp"
#include "fk/group.hpp"
#include "fk/matrix.hpp"

namespace fk {

// Extends matrices given on the generators of G to all elements, checking the relations met on
// the way. Matrices must be invertible.
inline std::vector<Matrix> extend_action(const FiniteGroup& G, const ZMod& R, std::size_t rank,
                                         const std::vector<Matrix>& on_gens) {
  check(on_gens.size() == G.generators().size(), ErrorCode::InvalidInput, "one matrix per generator expected");
  for (const auto& m : on_gens) {
    check(m.rows() == rank && m.cols() == rank, ErrorCode::InvalidInput, "action matrix size differs from rank");
    mat_inverse(R, m);
  }
  std::vector<std::optional<Matrix>> act(G.order());
  act[0] = Matrix::identity(rank);
  std::vector<Elem> order{0};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t k = 0; k < on_gens.size(); ++k) {
      Elem y = G.mul(G.generator_index(k), order[i]);
      Matrix m = mat_mul(R, on_gens[k], *act[order[i]]);
      if (!act[y]) {
        act[y] = std::move(m);
        order.push_back(y);
      } else if (!(*act[y] == m)) {
        fail(ErrorCode::RelationViolated, "action does not respect the relations of the group (generator " +
                                              std::to_string(k) + ")");
      }
    }
  std::vector<Matrix> out;
  for (auto& m : act) out.push_back(std::move(*m));
  return out;
}

class CoefModule {
 public:
  CoefModule() = default;
  CoefModule(ZMod R, std::size_t rank) : R_(R), r_(rank) {}
  // act[x] is the action of group element x; empty matrices mark elements outside the domain.
  CoefModule(ZMod R, std::size_t rank, std::vector<Matrix> act) : R_(R), r_(rank), act_(std::move(act)) {
    for (const auto& m : act_)
      if (m.rows()) check(m.rows() == r_ && m.cols() == r_, ErrorCode::InvalidInput, "action matrix size");
  }

  const ZMod& ring() const { return R_; }
  std::uint32_t p() const { return R_.p(); }
  int e() const { return R_.e(); }
  std::size_t rank() const { return r_; }
  bool trivial_action() const {
    for (const auto& m : act_)
      if (m.rows() && !(m == Matrix::identity(r_))) return false;
    return true;
  }
  bool acts(Elem x) const { return act_.empty() || (x < act_.size() && act_[x].rows()); }

  Matrix action(Elem x) const {
    if (act_.empty()) return Matrix::identity(r_);
    check(x < act_.size() && act_[x].rows() == r_, ErrorCode::InvalidInput, "element outside the acting group");
    return act_[x];
  }
  const std::vector<Matrix>& action_table() const { return act_; }

  // Same action over a different ring; used for the exponent-compatible maps of a sequence.
  AbelianGroup as_group() const { return AbelianGroup{R_.p(), std::vector<int>(r_, R_.e())}; }

  // Fixed points of the action of the listed elements.
  AbSubgroup invariants(const std::vector<Elem>& elems) const {
    const std::size_t r = r_;
    HowellForm h(R_, r);
    for (Elem x : elems) {
      Matrix a = action(x);
      for (std::size_t i = 0; i < r; ++i) a(i, i) = R_.sub(a(i, i), 1);
      for (std::size_t i = 0; i < r; ++i) h.insert(Vec(a.row(i).begin(), a.row(i).end()));
    }
    auto K = h.kernel();
    std::vector<Vec> g;
    for (std::size_t i = 0; i < K.size(); ++i) g.push_back(K.gen(i));
    return AbSubgroup(as_group(), g);
  }

 private:
  ZMod R_;
  std::size_t r_ = 0;
  std::vector<Matrix> act_;
};

// An integer matrix read between (Z/p^a)^n and (Z/p^b)^m; requires p^a A = 0 mod p^b.
class ModuleMap {
 public:
  ModuleMap() = default;
  ModuleMap(ZMod dom, std::size_t dom_rank, ZMod cod, std::size_t cod_rank, Matrix A)
      : dom_(dom), cod_(cod), n_(dom_rank), m_(cod_rank), A_(std::move(A)) {
    check(dom_.p() == cod_.p(), ErrorCode::InvalidInput, "module map between different primes");
    check(A_.rows() == m_ && A_.cols() == n_, ErrorCode::InvalidInput, "module map matrix shape");
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        A_(i, j) = cod_.red(A_(i, j));
        std::uint64_t scaled = A_(i, j) * dom_.q();
        check(scaled % cod_.q() == 0, ErrorCode::InvalidInput, "module map is not exponent-compatible");
      }
  }

  const ZMod& dom_ring() const { return dom_; }
  const ZMod& cod_ring() const { return cod_; }
  std::size_t dom_rank() const { return n_; }
  std::size_t cod_rank() const { return m_; }
  const Matrix& matrix() const { return A_; }

  Vec apply(std::span<const Entry> v) const {
    Vec w(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      Entry s = 0;
      for (std::size_t j = 0; j < n_; ++j) s = cod_.add(s, cod_.mul(A_(i, j), cod_.red(v[j])));
      w[i] = s;
    }
    return w;
  }

  Hom as_hom() const {
    AbelianGroup a{dom_.p(), std::vector<int>(n_, dom_.e())};
    AbelianGroup b{cod_.p(), std::vector<int>(m_, cod_.e())};
    return Hom(a, b, A_);
  }

  bool equivariant(const CoefModule& M, const CoefModule& N, const std::vector<Elem>& elems) const {
    for (Elem x : elems) {
      Matrix ax = M.action(x), bx = N.action(x);
      for (std::size_t j = 0; j < n_; ++j) {
        Vec col = ax.column(j);
        Vec lhs = apply(col);
        Vec ej(n_, 0);
        ej[j] = 1;
        Vec rhs = mat_vec(cod_, bx, apply(ej));
        if (lhs != rhs) return false;
      }
    }
    return true;
  }

 private:
  ZMod dom_, cod_;
  std::size_t n_ = 0, m_ = 0;
  Matrix A_;
};

// 0 -> L -> M -> N -> 0. The section picks the lexicographically least m_j with sigma(m_j) = e_j;
// the alternative section adds the last nonzero element of im(iota) for every nonzero n_j.
class ShortExactSeq {
 public:
  ShortExactSeq(CoefModule L, CoefModule M, CoefModule N, ModuleMap iota, ModuleMap sigma,
                const std::vector<Elem>& acting)
      : L_(std::move(L)), M_(std::move(M)), N_(std::move(N)), iota_(std::move(iota)), sigma_(std::move(sigma)) {
    check(iota_.dom_rank() == L_.rank() && iota_.cod_rank() == M_.rank() && sigma_.dom_rank() == M_.rank() &&
              sigma_.cod_rank() == N_.rank(),
          ErrorCode::NotExact, "maps do not match the modules");
    Hom i = iota_.as_hom(), s = sigma_.as_hom();
    check(i.well_defined() && s.well_defined(), ErrorCode::NotExact, "maps are not well defined");
    check(i.kernel() == AbSubgroup::zero(i.src()), ErrorCode::NotExact, "iota is not injective");
    check(s.image() == AbSubgroup::whole(s.dst()), ErrorCode::NotExact, "sigma is not surjective");
    check(i.image() == s.kernel(), ErrorCode::NotExact, "image of iota differs from kernel of sigma");
    check(iota_.equivariant(L_, M_, acting) && sigma_.equivariant(M_, N_, acting), ErrorCode::NotExact,
          "maps are not equivariant");
    // set-level section
    const ZMod& RM = M_.ring();
    std::vector<Vec> all{Vec{}};
    for (std::size_t j = 0; j < M_.rank(); ++j) {
      std::vector<Vec> next;
      for (const auto& v : all)
        for (Entry a = 0; a < RM.q(); ++a) {
          Vec w = v;
          w.push_back(a);
          next.push_back(std::move(w));
        }
      all = std::move(next);
      check(all.size() <= (1u << 20), ErrorCode::TooLarge, "module too large for section search");
    }
    for (std::size_t j = 0; j < N_.rank(); ++j) {
      Vec ej(N_.rank(), 0);
      ej[j] = 1;
      for (const auto& m : all)
        if (sigma_.apply(m) == ej) {
          section_.push_back(m);
          break;
        }
    }
    check(section_.size() == N_.rank(), ErrorCode::NotExact, "sigma has no section");
    shift_.assign(M_.rank(), 0);
    for (const auto& m : all)
      if (!is_zero(m) && preimage(m)) shift_ = m;
  }

  const CoefModule& L() const { return L_; }
  const CoefModule& M() const { return M_; }
  const CoefModule& N() const { return N_; }
  const ModuleMap& iota() const { return iota_; }
  const ModuleMap& sigma() const { return sigma_; }

  // s(n) = sum n_j m_j, with the n_j read as integers.
  Vec section(std::span<const Entry> n, bool alt = false) const {
    const ZMod& RM = M_.ring();
    Vec m(M_.rank(), 0);
    for (std::size_t j = 0; j < n.size(); ++j) {
      RM.axpy(m, section_[j], RM.red(n[j]));
      if (alt && n[j]) RM.axpy(m, shift_, 1);
    }
    return m;
  }

  // The unique y with iota(y) = m, or nullopt if m is not in the image.
  std::optional<Vec> preimage(const Vec& m) const {
    const ZMod& RM = M_.ring();
    const std::size_t rm = M_.rank(), rl = L_.rank();
    if (!solver_) {
      solver_.emplace(RM, rm + rl);
      for (std::size_t j = 0; j < rl; ++j) {
        Vec row(rm + rl, 0);
        for (std::size_t i = 0; i < rm; ++i) row[i] = iota_.matrix()(i, j);
        row[rm + j] = 1;
        solver_->insert(std::move(row));
      }
    }
    Vec v(rm + rl, 0);
    std::copy(m.begin(), m.end(), v.begin());
    if (!solver_->reduce_prefix(v, rm)) return std::nullopt;
    const ZMod& RL = L_.ring();
    Vec y(rl);
    for (std::size_t j = 0; j < rl; ++j) y[j] = RL.red(RM.neg(v[rm + j]));
    return y;
  }

 private:
  CoefModule L_, M_, N_;
  ModuleMap iota_, sigma_;
  std::vector<Vec> section_;
  Vec shift_;
  mutable std::optional<HowellForm> solver_;
};

}  // namespace fk
