#pragma once

// The fusion system F_S(G): morphisms are conjugation maps c_g between subgroups of a Sylow
// p-subgroup S, stored as element tables.

#include <deque>
#include <map>
#include <mutex>
#include <set>

#include "fk/group.hpp"
#include "fk/zmod.hpp"

namespace fk {

struct FusionMorphism {
  std::size_t dom = 0, cod = 0;  // subgroup indices
  Elem witness = 0;              // some g with c_g = this map
  std::vector<Elem> table;       // table[i] = image of the i-th element of dom

  bool operator==(const FusionMorphism& o) const {
    return dom == o.dom && cod == o.cod && table == o.table;
  }
};

struct AlperinStep {
  std::size_t Q;         // centric subgroup whose automorphism is restricted
  std::size_t aut;       // position in aut(Q)
  std::size_t from, to;  // P_{i-1} and P_i
};

struct FusionPredicates {
  std::size_t op;  // O_p(F)
  bool constrained;
  std::vector<std::size_t> weakly_closed;
  std::vector<std::size_t> normal_in_F;
};

class FusionSystem {
 public:
  FusionSystem(GroupPtr G, Subgroup S, std::uint32_t p) : G_(std::move(G)), S_(std::move(S)), p_(p) {
    check(is_prime(p_), ErrorCode::InvalidInput, "p must be prime");
    check(is_p_power(S_.order(), p_), ErrorCode::InvalidInput, "S is not a p-group");
    check((G_->order() / S_.order()) % p_ != 0, ErrorCode::InvalidInput, "S is not a Sylow p-subgroup");
    check(is_subgroup(*G_, S_.elems), ErrorCode::NotSubgroup, "S is not a subgroup of G");
    subs_ = all_subgroups(*G_, S_);
    for (std::size_t i = 0; i < subs_.size(); ++i) index_.emplace(subs_[i].elems, i);
  }

  static std::shared_ptr<FusionSystem> from_group(GroupPtr G, std::uint32_t p) {
    check(is_prime(p), ErrorCode::InvalidInput, "p must be prime");
    Subgroup S = sylow(*G, p);
    return std::make_shared<FusionSystem>(std::move(G), std::move(S), p);
  }

  const FiniteGroup& G() const { return *G_; }
  const GroupPtr& group_ptr() const { return G_; }
  const Subgroup& S() const { return S_; }
  std::uint32_t p() const { return p_; }
  const std::vector<Subgroup>& subgroups() const { return subs_; }
  const Subgroup& sub(std::size_t i) const { return subs_[i]; }
  std::size_t s_index() const { return subs_.size() - 1; }

  std::size_t index_of(const std::vector<Elem>& sorted_elems) const {
    auto it = index_.find(sorted_elems);
    check(it != index_.end(), ErrorCode::NotSubgroup, "not a subgroup of S");
    return it->second;
  }
  std::size_t index_of(const Subgroup& P) const { return index_of(P.elems); }

  // Hom_F(P, Q), one entry per distinct map, ordered by least witness.
  const std::vector<FusionMorphism>& hom(std::size_t P, std::size_t Q) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(P, Q);
    auto it = hom_cache_.find(key);
    if (it != hom_cache_.end()) return it->second;
    std::vector<FusionMorphism> out;
    std::set<std::vector<Elem>> seen;
    const Subgroup& SP = subs_[P];
    for (Elem g : transporter(*G_, SP, subs_[Q])) {
      std::vector<Elem> t;
      t.reserve(SP.order());
      for (Elem x : SP.elems) t.push_back(G_->conj(g, x));
      if (!seen.insert(t).second) continue;
      out.push_back(FusionMorphism{P, Q, g, std::move(t)});
    }
    return hom_cache_.emplace(key, std::move(out)).first->second;
  }

  const std::vector<FusionMorphism>& aut(std::size_t P) const { return hom(P, P); }

  // Index of the image subgroup phi(P).
  std::size_t image(const FusionMorphism& f) const { return image_of_table(f.table); }
  std::size_t image_of_table(std::vector<Elem> t) const {
    std::sort(t.begin(), t.end());
    return index_of(t);
  }

  // F-conjugates of P inside S.
  std::vector<std::size_t> conjugates(std::size_t P) const {
    std::set<std::size_t> out;
    for (const auto& f : hom(P, s_index())) out.insert(image(f));
    return {out.begin(), out.end()};
  }

  bool is_centric(std::size_t P) const {
    for (std::size_t Q : conjugates(P)) {
      Subgroup C = centralizer(*G_, S_, subs_[Q]);
      if (!C.subset_of(subs_[Q])) return false;
    }
    return true;
  }

  std::vector<std::size_t> centric_objects() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < subs_.size(); ++i)
      if (is_centric(i)) out.push_back(i);
    return out;
  }

  Elem apply(const FusionMorphism& f, Elem x) const {
    long i = subs_[f.dom].pos(x);
    check(i >= 0, ErrorCode::Internal, "element outside the domain");
    return f.table[static_cast<std::size_t>(i)];
  }

  // Subgroup generated by P and Q.
  std::size_t join(std::size_t P, std::size_t Q) const {
    auto g = subs_[P].gens;
    g.insert(g.end(), subs_[Q].gens.begin(), subs_[Q].gens.end());
    return index_of(closure(*G_, g));
  }

  // Q is normal in F: Q is normal in S and every phi in Hom_F(P,R) extends to some
  // psi in Hom_F(PQ,RQ) with psi(Q) = Q.
  bool normal_in_F(std::size_t Q) const {
    for (Elem x : S_.elems)
      for (Elem y : subs_[Q].gens)
        if (!subs_[Q].contains(G_->conj(x, y))) return false;
    for (std::size_t P = 0; P < subs_.size(); ++P) {
      std::size_t PQ = join(P, Q);
      for (std::size_t R = 0; R < subs_.size(); ++R) {
        const auto& homs = hom(P, R);
        if (homs.empty()) continue;
        std::size_t RQ = join(R, Q);
        const auto& ext = hom(PQ, RQ);
        for (const auto& phi : homs) {
          bool found = false;
          for (const auto& psi : ext) {
            bool ok = true;
            for (std::size_t i = 0; i < subs_[P].order() && ok; ++i)
              ok = apply(psi, subs_[P].elems[i]) == phi.table[i];
            for (std::size_t i = 0; i < subs_[Q].order() && ok; ++i)
              ok = subs_[Q].contains(apply(psi, subs_[Q].elems[i]));
            if (ok) {
              found = true;
              break;
            }
          }
          if (!found) return false;
        }
      }
    }
    return true;
  }

  FusionPredicates predicates() const {
    FusionPredicates r{};
    for (std::size_t Q = 0; Q < subs_.size(); ++Q)
      if (normal_in_F(Q)) r.normal_in_F.push_back(Q);
    r.op = r.normal_in_F.back();  // canonical order ends with the largest
    for (std::size_t Q : r.normal_in_F)
      check(subs_[Q].subset_of(subs_[r.op]), ErrorCode::Internal, "normal subgroups of F without a maximum");
    r.constrained = is_centric(r.op);
    for (std::size_t P = 0; P < subs_.size(); ++P) {
      auto c = conjugates(P);
      if (c.size() == 1 && c[0] == P) r.weakly_closed.push_back(P);
    }
    return r;
  }

  // Breadth-first search for a shortest decomposition of phi: P -> S into restrictions of
  // automorphisms of centric subgroups. States are the accumulated element tables; moves are the
  // non-identity elements of Aut_F(Q) for centric Q containing the current image, scanned in
  // canonical order (or in reverse when `reverse` is set). `through` restricts the Q used; by
  // default all centric subgroups.
  std::vector<AlperinStep> alperin_search(const FusionMorphism& phi, bool reverse = false,
                                          std::vector<std::size_t> through = {}) const {
    const Subgroup& P = subs_[phi.dom];
    auto centrics = through.empty() ? centric_objects() : std::move(through);
    if (reverse) std::reverse(centrics.begin(), centrics.end());
    struct Node {
      std::vector<Elem> table;
      long parent;
      AlperinStep step;
    };
    std::vector<Node> nodes{{P.elems, -1, {}}};
    std::map<std::vector<Elem>, std::size_t> seen{{P.elems, 0}};
    long goal = (P.elems == phi.table) ? 0 : -1;
    for (std::size_t i = 0; i < nodes.size() && goal < 0; ++i) {
      const std::vector<Elem> cur = nodes[i].table;
      std::size_t from = image_of_table(cur);
      for (std::size_t Q : centrics) {
        if (!subs_[from].subset_of(subs_[Q])) continue;
        const auto& auts = aut(Q);
        for (std::size_t k = 0; k < auts.size() && goal < 0; ++k) {
          std::size_t a = reverse ? auts.size() - 1 - k : k;
          if (auts[a].table == subs_[Q].elems) continue;
          std::vector<Elem> next(cur.size());
          for (std::size_t j = 0; j < cur.size(); ++j) next[j] = apply(auts[a], cur[j]);
          if (seen.count(next)) continue;
          seen.emplace(next, nodes.size());
          nodes.push_back({next, static_cast<long>(i), {Q, a, from, image_of_table(next)}});
          if (next == phi.table) goal = static_cast<long>(nodes.size() - 1);
        }
        if (goal >= 0) break;
      }
    }
    check(goal >= 0, ErrorCode::FactorizationNotFound, "no decomposition into centric automorphisms");
    std::vector<AlperinStep> steps;
    for (long n = goal; nodes[n].parent >= 0; n = nodes[n].parent) steps.push_back(nodes[n].step);
    std::reverse(steps.begin(), steps.end());
    return steps;
  }

 private:
  GroupPtr G_;
  Subgroup S_;
  std::uint32_t p_;
  std::vector<Subgroup> subs_;
  std::map<std::vector<Elem>, std::size_t> index_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::vector<FusionMorphism>> hom_cache_;
};

using FusionPtr = std::shared_ptr<const FusionSystem>;

}  // namespace fk
