#pragma once

// The centric linking system L^c_S(G): objects are the F-centric subgroups, and
// Mor(P, Q) = T_G(P, Q) / O^p(C_G(P)). Morphisms are numbered by (source, target, coset
// representative), the representative being the least element index in the coset.

#include <map>
#include <optional>
#include <set>

#include "fk/fusion.hpp"
#include "fk/matrix.hpp"
#include "fk/smith.hpp"

namespace fk {

struct LinkMorphism {
  std::size_t src, tgt;  // object positions
  Elem rep;
};

struct AxiomReport {
  bool A = true, B = true, C = true;
  bool associative = true;
  bool counts = true;  // |Mor(P,Q)| * |O^p(C_G(P))| = |T_G(P,Q)|
  std::vector<std::size_t> orbit_sizes;
  std::string failure;
  bool ok() const { return A && B && C && associative && counts; }
};

class LinkingSystem {
 public:
  static constexpr std::size_t kMaxMorphisms = 8192;

  explicit LinkingSystem(FusionPtr F) : LinkingSystem(F, F->centric_objects()) {}

  // Full subcategory on the given subgroups (indices into F's subgroup list), which must contain S.
  LinkingSystem(FusionPtr F, std::vector<std::size_t> objects) : F_(std::move(F)), objs_(std::move(objects)) {
    std::sort(objs_.begin(), objs_.end());
    objs_.erase(std::unique(objs_.begin(), objs_.end()), objs_.end());
    check(!objs_.empty() && objs_.back() == F_->s_index(), ErrorCode::InvalidInput,
          "linking system objects must include S");
    const FiniteGroup& G = F_->G();
    const Subgroup all = whole_group(G);
    for (std::size_t o : objs_) {
      Subgroup C = centralizer(G, all, F_->sub(o));
      opc_.push_back(op_residual(G, C, F_->p()));
    }
    for (std::size_t a = 0; a < objs_.size(); ++a)
      for (std::size_t b = 0; b < objs_.size(); ++b) {
        auto T = transporter(G, F_->sub(objs_[a]), F_->sub(objs_[b]));
        tcount_.push_back(T.size());
        std::set<Elem> reps;
        for (Elem g : T) reps.insert(coset_rep(a, g));
        for (Elem r : reps) {
          check(morphs_.size() < kMaxMorphisms, ErrorCode::TooLarge, "linking system has too many morphisms");
          index_.emplace(std::make_tuple(a, b, r), morphs_.size());
          morphs_.push_back({a, b, r});
        }
      }
    const std::size_t n = morphs_.size();
    out_.resize(objs_.size());
    in_.resize(objs_.size());
    for (std::size_t i = 0; i < n; ++i) {
      out_[morphs_[i].src].push_back(i);
      in_[morphs_[i].tgt].push_back(i);
    }
    comp_.assign(n * n, kNone);
    for (std::size_t f = 0; f < n; ++f)
      for (std::size_t g : out_[morphs_[f].tgt]) {
        Elem h = G.mul(morphs_[g].rep, morphs_[f].rep);
        comp_[g * n + f] = static_cast<std::uint32_t>(find(morphs_[f].src, morphs_[g].tgt, h));
      }
    for (std::size_t a = 0; a < objs_.size(); ++a) ident_.push_back(find(a, a, 0));
  }

  const FusionSystem& fusion() const { return *F_; }
  const FusionPtr& fusion_ptr() const { return F_; }
  std::size_t num_objects() const { return objs_.size(); }
  std::size_t object(std::size_t a) const { return objs_[a]; }  // subgroup index in F
  const std::vector<std::size_t>& objects() const { return objs_; }
  std::size_t s_object() const { return objs_.size() - 1; }
  std::optional<std::size_t> object_of(std::size_t subgroup) const {
    auto it = std::lower_bound(objs_.begin(), objs_.end(), subgroup);
    if (it == objs_.end() || *it != subgroup) return std::nullopt;
    return static_cast<std::size_t>(it - objs_.begin());
  }
  const Subgroup& op_centralizer(std::size_t a) const { return opc_[a]; }

  std::size_t num_morphisms() const { return morphs_.size(); }
  const LinkMorphism& morphism(std::size_t i) const { return morphs_[i]; }
  const std::vector<std::size_t>& out_of(std::size_t a) const { return out_[a]; }
  const std::vector<std::size_t>& into(std::size_t a) const { return in_[a]; }
  std::size_t identity(std::size_t a) const { return ident_[a]; }
  bool is_identity(std::size_t i) const { return ident_[morphs_[i].src] == i; }

  // g after f, or nullopt when not composable.
  std::optional<std::size_t> compose(std::size_t g, std::size_t f) const {
    std::uint32_t c = comp_[g * morphs_.size() + f];
    if (c == kNone) return std::nullopt;
    return c;
  }
  std::size_t compose_or_throw(std::size_t g, std::size_t f) const {
    auto c = compose(g, f);
    check(c.has_value(), ErrorCode::Internal, "morphisms are not composable");
    return *c;
  }

  // delta_{P,Q}(g) for g in T_G(P, Q).
  std::size_t delta(std::size_t a, std::size_t b, Elem g) const { return find(a, b, coset_rep(a, g)); }
  std::size_t incl(std::size_t a, std::size_t b) const { return delta(a, b, 0); }
  std::size_t delta_s(Elem s) const { return delta(s_object(), s_object(), s); }

  // pi(f) as a map table on the source subgroup.
  std::vector<Elem> pi_table(std::size_t i) const {
    const auto& m = morphs_[i];
    std::vector<Elem> t;
    for (Elem x : F_->sub(objs_[m.src]).elems) t.push_back(F_->G().conj(m.rep, x));
    return t;
  }

  // Least-id (or greatest-id) morphism a -> b whose pi equals the given table.
  std::size_t lift(std::size_t a, std::size_t b, const std::vector<Elem>& table, bool highest = false) const {
    std::optional<std::size_t> best;
    for (std::size_t i : out_[a]) {
      if (morphs_[i].tgt != b || pi_table(i) != table) continue;
      if (!best || highest) best = i;
      if (!highest) break;
    }
    check(best.has_value(), ErrorCode::Internal, "no lift of a fusion morphism");
    return *best;
  }

  AxiomReport check_axioms() const {
    AxiomReport rep;
    const FiniteGroup& G = F_->G();
    const std::size_t n = morphs_.size();
    auto fail_with = [&](bool& flag, const std::string& why) {
      if (flag && rep.failure.empty()) rep.failure = why;
      flag = false;
    };
    for (std::size_t a = 0; a < objs_.size(); ++a)
      for (std::size_t b = 0; b < objs_.size(); ++b) {
        std::size_t cnt = 0;
        for (std::size_t i : out_[a]) cnt += morphs_[i].tgt == b;
        if (cnt * opc_[a].order() != tcount_[a * objs_.size() + b])
          fail_with(rep.counts, "morphism count mismatch");
      }

    // (A): C_S(P) acts freely by right composition with delta_P, and pi is the orbit map.
    for (std::size_t a = 0; a < objs_.size(); ++a) {
      const Subgroup& P = F_->sub(objs_[a]);
      Subgroup Z = centralizer(G, F_->S(), P);
      for (std::size_t b = 0; b < objs_.size(); ++b) {
        std::vector<std::size_t> here;
        for (std::size_t i : out_[a])
          if (morphs_[i].tgt == b) here.push_back(i);
        std::set<std::size_t> done;
        std::set<std::vector<Elem>> images;
        for (std::size_t i : here) {
          if (done.count(i)) continue;
          std::set<std::size_t> orbit;
          for (Elem z : Z.elems) orbit.insert(compose_or_throw(i, delta(a, a, z)));
          if (orbit.size() != Z.order()) fail_with(rep.A, "C_S(P) does not act freely");
          rep.orbit_sizes.push_back(orbit.size());
          auto t = pi_table(i);
          for (std::size_t j : orbit) {
            if (pi_table(j) != t) fail_with(rep.A, "pi is not constant on an orbit");
            done.insert(j);
          }
          if (!images.insert(t).second) fail_with(rep.A, "pi separates fewer orbits than expected");
        }
        std::set<std::vector<Elem>> homs;
        for (const auto& f : F_->hom(objs_[a], objs_[b])) homs.insert(f.table);
        if (homs != images) fail_with(rep.A, "pi is not onto Hom_F(P,Q)");
      }
    }

    // (B): pi(delta(g)) = c_g for g in T_S(P, Q).
    for (std::size_t a = 0; a < objs_.size(); ++a)
      for (std::size_t b = 0; b < objs_.size(); ++b)
        for (Elem g : transporter(G, F_->sub(objs_[a]), F_->sub(objs_[b]))) {
          if (!F_->S().contains(g)) continue;
          std::vector<Elem> cg;
          for (Elem x : F_->sub(objs_[a]).elems) cg.push_back(G.conj(g, x));
          if (pi_table(delta(a, b, g)) != cg) fail_with(rep.B, "pi(delta(g)) differs from c_g");
        }

    // (C): psi o delta_P(g) = delta_Q(pi(psi)(g)) o psi.
    for (std::size_t i = 0; i < n; ++i) {
      const auto& m = morphs_[i];
      const Subgroup& P = F_->sub(objs_[m.src]);
      auto t = pi_table(i);
      for (std::size_t k = 0; k < P.order(); ++k) {
        std::size_t lhs = compose_or_throw(i, delta(m.src, m.src, P.elems[k]));
        std::size_t rhs = compose_or_throw(delta(m.tgt, m.tgt, t[k]), i);
        if (lhs != rhs) fail_with(rep.C, "axiom (C) square does not commute");
      }
    }

    for (std::size_t f = 0; f < n; ++f)
      for (std::size_t g : out_[morphs_[f].tgt]) {
        std::size_t gf = compose_or_throw(g, f);
        for (std::size_t h : out_[morphs_[g].tgt])
          if (compose_or_throw(h, gf) != compose_or_throw(compose_or_throw(h, g), f))
            fail_with(rep.associative, "composition is not associative");
      }
    return rep;
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  Elem coset_rep(std::size_t a, Elem g) const {
    Elem best = g;
    for (Elem k : opc_[a].elems) best = std::min(best, F_->G().mul(g, k));
    return best;
  }

  std::size_t find(std::size_t a, std::size_t b, Elem rep) const {
    auto it = index_.find(std::make_tuple(a, b, rep));
    check(it != index_.end(), ErrorCode::AxiomViolation, "composite is not a morphism");
    return it->second;
  }

  FusionPtr F_;
  std::vector<std::size_t> objs_;
  std::vector<Subgroup> opc_;
  std::vector<std::size_t> tcount_;
  std::vector<LinkMorphism> morphs_;
  std::map<std::tuple<std::size_t, std::size_t, Elem>, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_, in_;
  std::vector<std::uint32_t> comp_;
  std::vector<std::size_t> ident_;
};

using LinkingPtr = std::shared_ptr<const LinkingSystem>;

// Presentation of pi_1(|L|, S): one generator per morphism, relations [g][f] = [g o f] and
// [iota_P^S] = 1. The abelianization comes from the integer Smith form of the relation matrix.
struct Pi1Presentation {
  std::size_t generators = 0;
  std::vector<std::vector<std::int64_t>> relations;
  std::vector<std::int64_t> diag;                 // Smith diagonal, one per generator
  std::vector<std::vector<std::int64_t>> V;       // generator i maps to row i of V
  std::vector<std::int64_t> h1;                   // invariant factors, 0 for Z

  // Homomorphisms h1 -> Z/p^f, one per Smith coordinate that admits one with f >= 1.
  // Entry j is (coordinate, f) with f = min(e, v_p(d_j)) or e when d_j = 0.
  std::vector<std::pair<std::size_t, int>> characters(std::uint32_t p, int e) const {
    std::vector<std::pair<std::size_t, int>> out;
    for (std::size_t j = 0; j < diag.size(); ++j) {
      int f = 0;
      if (diag[j] == 0) {
        f = e;
      } else {
        std::int64_t d = diag[j];
        while (d % p == 0 && f < e) {
          d /= p;
          ++f;
        }
      }
      if (f > 0) out.emplace_back(j, f);
    }
    return out;
  }
};

inline Pi1Presentation pi1_presentation(const LinkingSystem& L) {
  Pi1Presentation pr;
  const std::size_t n = L.num_morphisms();
  pr.generators = n;
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t g : L.out_of(L.morphism(f).tgt)) {
      std::vector<std::int64_t> r(n, 0);
      r[g] += 1;
      r[f] += 1;
      r[L.compose_or_throw(g, f)] -= 1;
      pr.relations.push_back(std::move(r));
    }
  for (std::size_t a = 0; a < L.num_objects(); ++a) {
    std::vector<std::int64_t> r(n, 0);
    r[L.incl(a, L.s_object())] = 1;
    pr.relations.push_back(std::move(r));
  }
  auto sm = int_smith(pr.relations, n);
  pr.diag = sm.diag;
  pr.V = sm.V;
  std::vector<std::int64_t> nontriv;
  for (auto d : pr.diag)
    if (d != 1) nontriv.push_back(d);
  pr.h1 = invariant_factors(nontriv);
  return pr;
}

// A decomposition of phi: P -> S as restrictions of automorphisms psi_i of centric Q_i, each
// psi_i a chosen lift in Aut_L(Q_i) (least id, or greatest id for the alternative choice).
struct AlperinDecomposition {
  struct Step {
    std::size_t Q;            // object position in L
    std::size_t lift;         // morphism id of psi_i
    std::size_t from, to;     // subgroup indices of P_{i-1}, P_i
  };
  std::size_t source = 0;     // subgroup index of P
  std::vector<Step> steps;
};

inline AlperinDecomposition alperin_factorize(const LinkingSystem& L, const FusionMorphism& phi,
                                              bool alternative = false) {
  const FusionSystem& F = L.fusion();
  check(phi.cod == F.s_index(), ErrorCode::InvalidInput, "decomposition expects a morphism into S");
  AlperinDecomposition d;
  d.source = phi.dom;
  for (const auto& st : F.alperin_search(phi, alternative, L.objects())) {
    auto a = L.object_of(st.Q);
    check(a.has_value(), ErrorCode::FactorizationNotFound, "step through a subgroup outside L");
    std::size_t lift = L.lift(*a, *a, F.aut(st.Q)[st.aut].table, alternative);
    d.steps.push_back({*a, lift, st.from, st.to});
  }
  return d;
}

// A functor from L to the automorphisms of M = (Z/p^e)^r, normalized so that every inclusion
// iota_P^S acts as the identity.
class LocalSystem {
 public:
  LocalSystem(LinkingPtr L, ZMod R, std::size_t rank, std::vector<Matrix> rho)
      : L_(std::move(L)), R_(R), r_(rank), rho_(std::move(rho)) {
    check(rho_.size() == L_->num_morphisms(), ErrorCode::InvalidInput, "one matrix per morphism expected");
    normalize();
    verify();
  }

  static LocalSystem trivial(LinkingPtr L, ZMod R, std::size_t rank) {
    std::vector<Matrix> rho(L->num_morphisms(), Matrix::identity(rank));
    return LocalSystem(std::move(L), R, rank, std::move(rho));
  }

  // rho(f) = action of the coset representative of f, for an action of G given on generators.
  // The action must be trivial on every O^p(C_G(P)).
  static LocalSystem from_group_action(LinkingPtr L, ZMod R, std::size_t rank, const std::vector<Matrix>& on_elements) {
    std::vector<Matrix> rho;
    for (std::size_t a = 0; a < L->num_objects(); ++a)
      for (Elem k : L->op_centralizer(a).elems)
        check(on_elements[k] == Matrix::identity(rank), ErrorCode::RelationViolated,
              "action is nontrivial on O^p(C_G(P))");
    for (std::size_t i = 0; i < L->num_morphisms(); ++i) rho.push_back(on_elements[L->morphism(i).rep]);
    return LocalSystem(std::move(L), R, rank, std::move(rho));
  }

  // rho = [[1, c(f)], [0, 1]] on (Z/p^e)^2 where c is a character of h1(L) with values in
  // p^{e-f} Z/p^e. Returns nullopt when h1(L) has no p-torsion or free part.
  static std::optional<LocalSystem> unipotent(LinkingPtr L, const Pi1Presentation& pr, ZMod R) {
    auto chars = pr.characters(R.p(), R.e());
    if (chars.empty()) return std::nullopt;
    // Prefer a character that is nontrivial on delta_S(S).
    std::size_t pick = 0;
    for (std::size_t c = 0; c < chars.size(); ++c) {
      bool hits_s = false;
      for (Elem s : L->fusion().S().elems)
        hits_s = hits_s || value(pr, chars[c], L->delta_s(s), R) != 0;
      if (hits_s) {
        pick = c;
        break;
      }
    }
    std::vector<Matrix> rho;
    for (std::size_t i = 0; i < L->num_morphisms(); ++i) {
      Matrix m = Matrix::identity(2);
      m(0, 1) = value(pr, chars[pick], i, R);
      rho.push_back(m);
    }
    return LocalSystem(std::move(L), R, 2, std::move(rho));
  }

  // Extends an assignment on some morphisms to all of L through composition.
  static LocalSystem from_assignment(LinkingPtr L, ZMod R, std::size_t rank,
                                     const std::map<std::size_t, Matrix>& given) {
    const std::size_t n = L->num_morphisms();
    std::vector<std::optional<Matrix>> rho(n);
    for (std::size_t a = 0; a < L->num_objects(); ++a) rho[L->identity(a)] = Matrix::identity(rank);
    for (const auto& [i, m] : given) {
      check(i < n, ErrorCode::InvalidInput, "morphism id out of range");
      check(m.rows() == rank && m.cols() == rank, ErrorCode::InvalidInput, "matrix size differs from module rank");
      rho[i] = m;
    }
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t f = 0; f < n; ++f) {
        if (!rho[f]) continue;
        for (std::size_t g : L->out_of(L->morphism(f).tgt)) {
          if (!rho[g]) continue;
          std::size_t h = L->compose_or_throw(g, f);
          Matrix m = mat_mul(R, *rho[g], *rho[f]);
          if (!rho[h]) {
            rho[h] = std::move(m);
            grew = true;
          } else if (!(*rho[h] == m)) {
            fail(ErrorCode::RelationViolated,
                 "assignment is not functorial at the pair (" + std::to_string(g) + ", " + std::to_string(f) + ")");
          }
        }
      }
    }
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < n; ++i) {
      check(rho[i].has_value(), ErrorCode::InvalidInput,
            "assignment does not determine morphism " + std::to_string(i));
      out.push_back(*rho[i]);
    }
    return LocalSystem(std::move(L), R, rank, std::move(out));
  }

  const LinkingSystem& linking() const { return *L_; }
  const LinkingPtr& linking_ptr() const { return L_; }
  const ZMod& ring() const { return R_; }
  std::size_t rank() const { return r_; }
  const Matrix& rho(std::size_t i) const { return rho_[i]; }
  const std::vector<Matrix>& matrices() const { return rho_; }

  // The induced action of S on M, indexed by element of G (empty matrices off S).
  std::vector<Matrix> s_action() const {
    std::vector<Matrix> act(L_->fusion().G().order());
    for (Elem s : L_->fusion().S().elems) act[s] = rho_[L_->delta_s(s)];
    return act;
  }

  bool is_trivial() const {
    for (const auto& m : rho_)
      if (!(m == Matrix::identity(r_))) return false;
    return true;
  }

 private:
  static Entry value(const Pi1Presentation& pr, std::pair<std::size_t, int> ch, std::size_t i, const ZMod& R) {
    std::int64_t pf = 1;
    for (int k = 0; k < ch.second; ++k) pf *= R.p();
    std::int64_t v = pr.V[i][ch.first] % pf;
    if (v < 0) v += pf;
    return R.mul(static_cast<Entry>(v), R.pow(R.e() - ch.second));
  }

  // Replace rho(f: P -> Q) by g_Q rho(f) g_P^{-1} with g_P = rho(iota_P^S).
  void normalize() {
    const LinkingSystem& L = *L_;
    std::vector<Matrix> g, ginv;
    for (std::size_t a = 0; a < L.num_objects(); ++a) {
      g.push_back(rho_[L.incl(a, L.s_object())]);
      ginv.push_back(mat_inverse(R_, g.back()));
    }
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      const auto& m = L.morphism(i);
      rho_[i] = mat_mul(R_, mat_mul(R_, g[m.tgt], rho_[i]), ginv[m.src]);
    }
  }

  void verify() const {
    const LinkingSystem& L = *L_;
    for (std::size_t a = 0; a < L.num_objects(); ++a)
      check(rho_[L.identity(a)] == Matrix::identity(r_), ErrorCode::RelationViolated, "identity acts nontrivially");
    for (std::size_t f = 0; f < rho_.size(); ++f)
      for (std::size_t g : L.out_of(L.morphism(f).tgt))
        if (!(rho_[L.compose_or_throw(g, f)] == mat_mul(R_, rho_[g], rho_[f])))
          fail(ErrorCode::RelationViolated,
               "rho is not functorial at the pair (" + std::to_string(g) + ", " + std::to_string(f) + ")");
  }

  LinkingPtr L_;
  ZMod R_;
  std::size_t r_;
  std::vector<Matrix> rho_;
};

}  // namespace fk
