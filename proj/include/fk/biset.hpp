#pragma once

// Left-free bisets between subgroups of one ambient group. A transitive class [K, phi] over (A, B)
// is (A x B)/Delta(K, phi) with g.x.h = (g, h^{-1}) x. Classes are stored by a canonical
// representative of the conjugacy class of Delta(K, phi), so multiset equality is syntactic.

#include <map>
#include <numeric>

#include "fk/fusion.hpp"

namespace fk {

// Delta(K, phi) as pairs (k, phi(k)) sorted by k.
using ClassKey = std::vector<std::pair<Elem, Elem>>;

struct ClassKeyLess {
  bool operator()(const ClassKey& a, const ClassKey& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

struct BisetClass {
  Subgroup K;
  std::vector<Elem> phi;  // phi[i] = image of K.elems[i]

  ClassKey key() const {
    ClassKey k;
    for (std::size_t i = 0; i < K.order(); ++i) k.emplace_back(K.elems[i], phi[i]);
    return k;
  }
  Elem apply(Elem x) const {
    long i = K.pos(x);
    check(i >= 0, ErrorCode::Internal, "element outside the class domain");
    return phi[static_cast<std::size_t>(i)];
  }
};

// Greedy generating set of a subgroup given by its sorted elements.
inline Subgroup subgroup_from_elems(const FiniteGroup& G, std::vector<Elem> elems) {
  std::vector<Elem> gens;
  Subgroup cur = trivial_subgroup();
  for (Elem x : elems) {
    if (cur.contains(x)) continue;
    gens.push_back(x);
    cur = closure(G, gens);
  }
  check(cur.elems == elems, ErrorCode::NotSubgroup, "element set is not a subgroup");
  return cur;
}

// Checks that phi is an injective homomorphism K -> B.
inline void check_class(const FiniteGroup& G, const Subgroup& A, const Subgroup& B, const Subgroup& K,
                        const std::vector<Elem>& phi) {
  check(K.subset_of(A), ErrorCode::NotSubgroup, "class subgroup is not contained in the left group");
  check(phi.size() == K.order(), ErrorCode::InvalidInput, "class map table size differs from |K|");
  for (Elem y : phi) check(B.contains(y), ErrorCode::InvalidInput, "class map leaves the right group");
  for (std::size_t i = 0; i < K.order(); ++i)
    for (std::size_t j = 0; j < K.order(); ++j) {
      Elem xy = G.mul(K.elems[i], K.elems[j]);
      check(phi[static_cast<std::size_t>(K.pos(xy))] == G.mul(phi[i], phi[j]), ErrorCode::InvalidInput,
            "class map is not a homomorphism");
    }
  std::vector<Elem> img(phi);
  std::sort(img.begin(), img.end());
  check(std::adjacent_find(img.begin(), img.end()) == img.end(), ErrorCode::NotLeftFree,
        "class map is not injective, so the left action is not free");
}

// Least conjugate of Delta(K, phi) under A x B.
inline ClassKey canonical_key(const FiniteGroup& G, const Subgroup& A, const Subgroup& B, const ClassKey& d) {
  ClassKey best = d, cur(d.size());
  std::sort(best.begin(), best.end());
  for (Elem g : A.elems)
    for (Elem h : B.elems) {
      for (std::size_t i = 0; i < d.size(); ++i) cur[i] = {G.conj(g, d[i].first), G.conj(h, d[i].second)};
      std::sort(cur.begin(), cur.end());
      if (cur < best) best = cur;
    }
  return best;
}

class Biset {
 public:
  Biset(GroupPtr G, Subgroup A, Subgroup B) : G_(std::move(G)), A_(std::move(A)), B_(std::move(B)) {}

  const FiniteGroup& group() const { return *G_; }
  const GroupPtr& group_ptr() const { return G_; }
  const Subgroup& left() const { return A_; }
  const Subgroup& right() const { return B_; }
  const std::map<ClassKey, std::size_t, ClassKeyLess>& classes() const { return classes_; }

  void add(const Subgroup& K, const std::vector<Elem>& phi, std::size_t mult = 1) {
    check_class(*G_, A_, B_, K, phi);
    BisetClass c{K, phi};
    add_key(canonical_key(*G_, A_, B_, c.key()), mult);
  }
  void add(const BisetClass& c, std::size_t mult = 1) { add(c.K, c.phi, mult); }
  // Adds a key that is already canonical.
  void add_key(const ClassKey& k, std::size_t mult) {
    if (mult) classes_[k] += mult;
  }

  BisetClass decode(const ClassKey& k) const {
    std::vector<Elem> elems, phi;
    for (auto [x, y] : k) {
      elems.push_back(x);
      phi.push_back(y);
    }
    return BisetClass{subgroup_from_elems(*G_, elems), phi};
  }
  std::vector<std::pair<BisetClass, std::size_t>> expanded() const {
    std::vector<std::pair<BisetClass, std::size_t>> out;
    for (const auto& [k, m] : classes_) out.emplace_back(decode(k), m);
    return out;
  }

  std::size_t num_classes() const { return classes_.size(); }
  // |X| = sum mult |A| |B| / |K|
  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& [k, m] : classes_) s += m * A_.order() * B_.order() / k.size();
    return s;
  }

  Biset scaled(std::size_t n) const {
    Biset out(G_, A_, B_);
    for (const auto& [k, m] : classes_) out.add_key(k, m * n);
    return out;
  }
  Biset& operator+=(const Biset& o) {
    check(A_ == o.A_ && B_ == o.B_, ErrorCode::GroupMismatch, "sum of bisets over different groups");
    for (const auto& [k, m] : o.classes_) add_key(k, m);
    return *this;
  }
  bool operator==(const Biset& o) const { return A_ == o.A_ && B_ == o.B_ && classes_ == o.classes_; }

 private:
  GroupPtr G_;
  Subgroup A_, B_;
  std::map<ClassKey, std::size_t, ClassKeyLess> classes_;
};

// [K, phi] o [L, psi] = sum over x in phi(K)\B/L of [phi^{-1}(phi(K) cap x L x^{-1}), psi o c_{x^{-1}} o phi].
inline Biset compose_classes(const GroupPtr& G, const Subgroup& A, const Subgroup& B, const Subgroup& C,
                             const BisetClass& a, const BisetClass& b) {
  const FiniteGroup& g = *G;
  Biset out(G, A, C);
  std::vector<char> seen(g.order(), 0);
  std::vector<Elem> phiK(a.phi);
  for (Elem x : B.elems) {
    if (seen[x]) continue;
    for (Elem u : phiK)
      for (Elem l : b.K.elems) seen[g.mul(g.mul(u, x), l)] = 1;
    Elem xi = g.inv(x);
    std::vector<Elem> elems, img;
    for (std::size_t i = 0; i < a.K.order(); ++i) {
      Elem y = g.mul(g.mul(xi, a.phi[i]), x);
      if (!b.K.contains(y)) continue;
      elems.push_back(a.K.elems[i]);
      img.push_back(b.apply(y));
    }
    ClassKey k;
    for (std::size_t i = 0; i < elems.size(); ++i) k.emplace_back(elems[i], img[i]);
    out.add_key(canonical_key(g, A, C, k), 1);
  }
  return out;
}

inline Biset compose(const Biset& X, const Biset& Y) {
  check(X.right() == Y.left(), ErrorCode::GroupMismatch, "middle groups of the composition differ");
  Biset out(X.group_ptr(), X.left(), Y.right());
  auto xs = X.expanded(), ys = Y.expanded();
  for (const auto& [a, m] : xs)
    for (const auto& [b, n] : ys) {
      Biset c = compose_classes(X.group_ptr(), X.left(), X.right(), Y.right(), a, b);
      out += c.scaled(m * n);
    }
  return out;
}

// Single-class biset [K, phi] over (A, B).
inline Biset class_biset(const GroupPtr& G, const Subgroup& A, const Subgroup& B, const Subgroup& K,
                         const std::vector<Elem>& phi) {
  Biset out(G, A, B);
  out.add(K, phi);
  return out;
}

// A finite biset given by explicit action tables: left[i][x] = A.elems[i] . x, right[j][x] = x . B.elems[j].
struct FiniteBiset {
  GroupPtr G;
  Subgroup A, B;
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> left, right;

  // Checks the action laws and that the actions commute.
  void validate() const {
    const FiniteGroup& g = *G;
    for (std::size_t i = 0; i < A.order(); ++i)
      for (std::size_t j = 0; j < A.order(); ++j) {
        auto ij = static_cast<std::size_t>(A.pos(g.mul(A.elems[i], A.elems[j])));
        for (std::size_t x = 0; x < n; ++x)
          check(left[i][left[j][x]] == left[ij][x], ErrorCode::InvalidInput, "left action law fails");
      }
    for (std::size_t i = 0; i < B.order(); ++i)
      for (std::size_t j = 0; j < B.order(); ++j) {
        auto ij = static_cast<std::size_t>(B.pos(g.mul(B.elems[i], B.elems[j])));
        for (std::size_t x = 0; x < n; ++x)
          check(right[j][right[i][x]] == right[ij][x], ErrorCode::InvalidInput, "right action law fails");
      }
    for (std::size_t i = 0; i < A.order(); ++i)
      for (std::size_t j = 0; j < B.order(); ++j)
        for (std::size_t x = 0; x < n; ++x)
          check(left[i][right[j][x]] == right[j][left[i][x]], ErrorCode::InvalidInput, "actions do not commute");
  }
};

// The set (A x B)/Delta(K, phi).
inline FiniteBiset explicit_class(const GroupPtr& G, const Subgroup& A, const Subgroup& B, const BisetClass& c) {
  const FiniteGroup& g = *G;
  std::map<std::pair<Elem, Elem>, std::size_t> index;
  std::vector<std::pair<Elem, Elem>> reps;
  auto coset = [&](Elem a, Elem b) {
    std::pair<Elem, Elem> best{a, b};
    for (std::size_t i = 0; i < c.K.order(); ++i)
      best = std::min(best, {g.mul(a, c.K.elems[i]), g.mul(b, c.phi[i])});
    return best;
  };
  for (Elem a : A.elems)
    for (Elem b : B.elems) {
      auto r = coset(a, b);
      if (index.emplace(r, reps.size()).second) reps.push_back(r);
    }
  FiniteBiset X{G, A, B, reps.size(), {}, {}};
  for (Elem x : A.elems) {
    std::vector<std::size_t> t;
    for (auto [a, b] : reps) t.push_back(index.at(coset(g.mul(x, a), b)));
    X.left.push_back(std::move(t));
  }
  for (Elem h : B.elems) {
    std::vector<std::size_t> t;
    for (auto [a, b] : reps) t.push_back(index.at(coset(a, g.mul(g.inv(h), b))));
    X.right.push_back(std::move(t));
  }
  return X;
}

// X x_B Y with (x, h y) ~ (x h, y).
inline FiniteBiset explicit_product(const FiniteBiset& X, const FiniteBiset& Y) {
  check(X.B == Y.A, ErrorCode::GroupMismatch, "middle groups of the product differ");
  const std::size_t n = X.n * Y.n;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t j = 0; j < X.B.order(); ++j)
    for (std::size_t x = 0; x < X.n; ++x)
      for (std::size_t y = 0; y < Y.n; ++y) {
        std::size_t u = find(x * Y.n + Y.left[j][y]), v = find(X.right[j][x] * Y.n + y);
        if (u != v) parent[std::max(u, v)] = std::min(u, v);
      }
  std::vector<std::size_t> cls(n, 0), roots;
  std::map<std::size_t, std::size_t> id;
  for (std::size_t v = 0; v < n; ++v) {
    auto r = find(v);
    auto it = id.emplace(r, id.size()).first;
    cls[v] = it->second;
  }
  FiniteBiset Z{X.G, X.A, Y.B, id.size(), {}, {}};
  std::vector<std::size_t> rep(Z.n);
  for (std::size_t v = n; v-- > 0;) rep[cls[v]] = v;
  for (std::size_t i = 0; i < X.A.order(); ++i) {
    std::vector<std::size_t> t(Z.n);
    for (std::size_t c = 0; c < Z.n; ++c) t[c] = cls[X.left[i][rep[c] / Y.n] * Y.n + rep[c] % Y.n];
    Z.left.push_back(std::move(t));
  }
  for (std::size_t j = 0; j < Y.B.order(); ++j) {
    std::vector<std::size_t> t(Z.n);
    for (std::size_t c = 0; c < Z.n; ++c) t[c] = cls[(rep[c] / Y.n) * Y.n + Y.right[j][rep[c] % Y.n]];
    Z.right.push_back(std::move(t));
  }
  return Z;
}

// Orbit decomposition. The stabilizer of a point under (g, h) x = g x h^{-1} is Delta(K, phi).
inline Biset decompose_biset(const FiniteBiset& X) {
  const FiniteGroup& g = *X.G;
  Biset out(X.G, X.A, X.B);
  std::vector<char> seen(X.n, 0);
  for (std::size_t x = 0; x < X.n; ++x) {
    if (seen[x]) continue;
    for (std::size_t i = 0; i < X.A.order(); ++i)
      for (std::size_t j = 0; j < X.B.order(); ++j) seen[X.right[j][X.left[i][x]]] = 1;
    ClassKey k;
    for (std::size_t i = 0; i < X.A.order(); ++i)
      for (std::size_t j = 0; j < X.B.order(); ++j) {
        std::size_t inv = static_cast<std::size_t>(X.B.pos(g.inv(X.B.elems[j])));
        if (X.right[inv][X.left[i][x]] != x) continue;
        check(!(X.A.elems[i] != 0 && X.B.elems[j] == 0), ErrorCode::NotLeftFree,
              "left stabilizer of a point is nontrivial");
        k.emplace_back(X.A.elems[i], X.B.elems[j]);
      }
    for (std::size_t t = 1; t < k.size(); ++t)
      check(k[t].first != k[t - 1].first, ErrorCode::InvalidInput, "right action is not free");
    out.add_key(canonical_key(g, X.A, X.B, k), 1);
  }
  return out;
}

// All homomorphisms K -> B as tables on K.elems, by assigning images to generators.
inline std::vector<std::vector<Elem>> all_homs(const FiniteGroup& G, const Subgroup& K, const Subgroup& B,
                                               bool injective_only = true) {
  std::vector<std::vector<Elem>> out;
  const std::size_t r = K.gens.size();
  std::vector<std::size_t> choice(r, 0);
  while (true) {
    std::vector<long> img(K.order(), -1);
    img[0] = 0;
    std::vector<Elem> queue{0};
    bool ok = true;
    for (std::size_t i = 0; i < queue.size() && ok; ++i)
      for (std::size_t t = 0; t < r && ok; ++t) {
        Elem y = G.mul(K.gens[t], queue[i]);
        auto py = static_cast<std::size_t>(K.pos(y));
        Elem v = G.mul(B.elems[choice[t]], static_cast<Elem>(img[static_cast<std::size_t>(K.pos(queue[i]))]));
        if (img[py] < 0) {
          img[py] = v;
          queue.push_back(y);
        } else if (static_cast<Elem>(img[py]) != v) {
          ok = false;
        }
      }
    if (ok) {
      std::vector<Elem> t(img.begin(), img.end());
      std::vector<Elem> s(t);
      std::sort(s.begin(), s.end());
      if (!injective_only || std::adjacent_find(s.begin(), s.end()) == s.end()) out.push_back(std::move(t));
    }
    std::size_t t = 0;
    while (t < r && ++choice[t] == B.order()) choice[t++] = 0;
    if (t == r) break;
  }
  return out;
}

// Every transitive left-free class over (A, B), once each.
inline std::vector<BisetClass> all_classes(const GroupPtr& G, const Subgroup& A, const Subgroup& B) {
  std::map<ClassKey, BisetClass, ClassKeyLess> found;
  for (const auto& K : all_subgroups(*G, A))
    for (auto& phi : all_homs(*G, K, B)) {
      BisetClass c{K, phi};
      auto key = canonical_key(*G, A, B, c.key());
      if (!found.count(key)) found.emplace(key, Biset(G, A, B).decode(key));
    }
  std::vector<BisetClass> out;
  for (auto& [k, c] : found) out.push_back(std::move(c));
  return out;
}

struct CharacteristicReport {
  bool f_generated = true, left_stable = true, right_stable = true, nondegenerate = true;
  bool fc_generated = true;
  std::size_t ratio = 0;  // |Omega| / |S|
  std::vector<std::string> failures;

  bool ok() const { return f_generated && left_stable && right_stable && nondegenerate; }
};

inline CharacteristicReport characteristic_checks(const Biset& omega, const FusionSystem& F) {
  CharacteristicReport rep;
  const GroupPtr& G = F.group_ptr();
  const Subgroup& S = F.S();
  check(omega.left() == S && omega.right() == S, ErrorCode::GroupMismatch, "characteristic biset must be over (S, S)");
  for (const auto& [c, m] : omega.expanded()) {
    std::size_t K = F.index_of(c.K);
    bool in_F = false;
    for (const auto& f : F.hom(K, F.s_index())) in_F = in_F || f.table == c.phi;
    if (!in_F) {
      rep.f_generated = false;
      rep.failures.push_back("class with |K|=" + std::to_string(c.K.order()) + " is not a morphism of F");
    }
    if (!F.is_centric(K)) rep.fc_generated = false;
  }
  for (std::size_t P = 0; P < F.subgroups().size(); ++P) {
    const Subgroup& SP = F.sub(P);
    Biset incl_left = compose(class_biset(G, SP, S, SP, SP.elems), omega);
    Biset id_right = compose(omega, class_biset(G, S, SP, SP, SP.elems));
    for (const auto& f : F.hom(P, F.s_index())) {
      if (rep.left_stable && !(compose(class_biset(G, SP, S, SP, f.table), omega) == incl_left)) {
        rep.left_stable = false;
        rep.failures.push_back("left stability fails for a morphism out of a subgroup of order " +
                               std::to_string(SP.order()));
      }
      // [phi(P), phi^{-1}] over (S, P)
      const Subgroup& Q = F.sub(F.image(f));
      std::vector<Elem> inv(Q.order());
      for (std::size_t i = 0; i < SP.order(); ++i) inv[static_cast<std::size_t>(Q.pos(f.table[i]))] = SP.elems[i];
      if (rep.right_stable && !(compose(omega, class_biset(G, S, SP, Q, inv)) == id_right)) {
        rep.right_stable = false;
        rep.failures.push_back("right stability fails for a morphism out of a subgroup of order " +
                               std::to_string(SP.order()));
      }
    }
  }
  rep.ratio = omega.size() / S.order();
  check(rep.ratio * S.order() == omega.size(), ErrorCode::Internal, "|Omega| is not a multiple of |S|");
  rep.nondegenerate = rep.ratio % F.p() != 0;
  if (!rep.nondegenerate) rep.failures.push_back("|Omega|/|S| is divisible by p");
  return rep;
}

// G with S acting by left and right multiplication.
inline FiniteBiset group_as_biset(const GroupPtr& G, const Subgroup& S) {
  const FiniteGroup& g = *G;
  FiniteBiset X{G, S, S, g.order(), {}, {}};
  for (Elem s : S.elems) {
    std::vector<std::size_t> l(g.order()), r(g.order());
    for (Elem x = 0; x < g.order(); ++x) {
      l[x] = g.mul(s, x);
      r[x] = g.mul(x, s);
    }
    X.left.push_back(std::move(l));
    X.right.push_back(std::move(r));
  }
  return X;
}

inline Biset characteristic_from_group(const FusionSystem& F) {
  return decompose_biset(group_as_biset(F.group_ptr(), F.S()));
}

// True if every class [R, phi] has R containing P0.
inline bool classes_contain(const Biset& X, const Subgroup& P0) {
  for (const auto& [k, m] : X.classes()) {
    std::vector<Elem> elems;
    for (auto [x, y] : k) elems.push_back(x);
    for (Elem x : P0.elems)
      if (!std::binary_search(elems.begin(), elems.end(), x)) return false;
  }
  return true;
}

}  // namespace fk
