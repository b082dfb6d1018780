#pragma once

// Permutation groups with every element enumerated. Elements are addressed by index; the
// identity is index 0. Subgroups are sorted index sets.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "fk/error.hpp"

namespace fk {

using Elem = std::uint32_t;

struct Permutation {
  std::vector<std::uint32_t> img;

  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> images) : img(std::move(images)) {
    std::vector<char> hit(img.size(), 0);
    for (auto x : img) {
      check(x < img.size() && !hit[x], ErrorCode::InvalidPermutation, "image array is not a bijection");
      hit[x] = 1;
    }
  }
  static Permutation identity(std::size_t n) {
    Permutation p;
    p.img.resize(n);
    std::iota(p.img.begin(), p.img.end(), 0u);
    return p;
  }

  std::size_t degree() const { return img.size(); }
  // (a * b)(x) = a(b(x))
  Permutation operator*(const Permutation& b) const {
    Permutation r;
    r.img.resize(img.size());
    for (std::size_t x = 0; x < img.size(); ++x) r.img[x] = img[b.img[x]];
    return r;
  }
  Permutation inverse() const {
    Permutation r;
    r.img.resize(img.size());
    for (std::size_t x = 0; x < img.size(); ++x) r.img[img[x]] = static_cast<std::uint32_t>(x);
    return r;
  }
  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;
};

struct PermHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

class FiniteGroup {
 public:
  static constexpr std::size_t kDefaultBound = 10000;
  static constexpr std::size_t kTableBound = 2048;

  FiniteGroup(std::size_t degree, std::vector<Permutation> gens, std::size_t bound = kDefaultBound)
      : degree_(degree), gens_(std::move(gens)) {
    for (const auto& g : gens_)
      check(g.degree() == degree_, ErrorCode::InvalidPermutation, "generator degree mismatch");
    add(Permutation::identity(degree_));
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      for (const auto& g : gens_) {
        Permutation x = g * elems_[i];
        if (index_.count(x.img)) continue;
        check(elems_.size() < bound, ErrorCode::ClosureTooLarge,
              "group closure exceeds " + std::to_string(bound) + " elements");
        add(std::move(x));
      }
    }
    const std::size_t n = elems_.size();
    inv_.resize(n);
    for (std::size_t i = 0; i < n; ++i) inv_[i] = index_of(elems_[i].inverse());
    if (n <= kTableBound) {
      table_.resize(n * n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) table_[a * n + b] = index_of(elems_[a] * elems_[b]);
    }
  }

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elems_.size(); }
  const std::vector<Permutation>& generators() const { return gens_; }
  const Permutation& elem(Elem i) const { return elems_[i]; }

  Elem index_of(const Permutation& x) const {
    auto it = index_.find(x.img);
    check(it != index_.end(), ErrorCode::Internal, "permutation outside the group");
    return it->second;
  }

  Elem mul(Elem a, Elem b) const {
    if (!table_.empty()) return table_[a * elems_.size() + b];
    return index_of(elems_[a] * elems_[b]);
  }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv_[g]); }  // g x g^-1

  std::size_t elem_order(Elem a) const {
    std::size_t k = 1;
    for (Elem x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }

  // Index of generator i in the element list.
  Elem generator_index(std::size_t i) const { return index_of(gens_[i]); }

 private:
  void add(Permutation x) {
    index_.emplace(x.img, static_cast<Elem>(elems_.size()));
    elems_.push_back(std::move(x));
  }

  std::size_t degree_;
  std::vector<Permutation> gens_;
  std::vector<Permutation> elems_;
  std::unordered_map<std::vector<std::uint32_t>, Elem, PermHash> index_;
  std::vector<Elem> inv_;
  std::vector<Elem> table_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// A subgroup of a fixed FiniteGroup, as the sorted list of its element indices.
struct Subgroup {
  std::vector<Elem> elems;
  std::vector<Elem> gens;

  std::size_t order() const { return elems.size(); }
  bool contains(Elem x) const { return std::binary_search(elems.begin(), elems.end(), x); }
  // Position of x in elems, or -1.
  long pos(Elem x) const {
    auto it = std::lower_bound(elems.begin(), elems.end(), x);
    return (it != elems.end() && *it == x) ? it - elems.begin() : -1;
  }
  bool operator==(const Subgroup& o) const { return elems == o.elems; }
  bool subset_of(const Subgroup& o) const {
    return std::includes(o.elems.begin(), o.elems.end(), elems.begin(), elems.end());
  }
};

// Canonical order: by order, then lexicographically by element list.
inline bool canonical_less(const Subgroup& a, const Subgroup& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a.elems < b.elems;
}

inline Subgroup closure(const FiniteGroup& G, std::vector<Elem> gens) {
  std::vector<char> in(G.order(), 0);
  std::vector<Elem> elems{0};
  in[0] = 1;
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  gens.erase(std::remove(gens.begin(), gens.end(), Elem{0}), gens.end());
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (Elem g : gens) {
      Elem x = G.mul(g, elems[i]);
      if (!in[x]) {
        in[x] = 1;
        elems.push_back(x);
      }
    }
  std::sort(elems.begin(), elems.end());
  return Subgroup{std::move(elems), std::move(gens)};
}

inline Subgroup whole_group(const FiniteGroup& G) {
  std::vector<Elem> g;
  for (std::size_t i = 0; i < G.generators().size(); ++i) g.push_back(G.generator_index(i));
  return closure(G, g);
}

inline Subgroup trivial_subgroup() { return Subgroup{{0}, {}}; }

inline Subgroup conjugate(const FiniteGroup& G, const Subgroup& P, Elem g) {
  Subgroup r;
  for (Elem x : P.elems) r.elems.push_back(G.conj(g, x));
  for (Elem x : P.gens) r.gens.push_back(G.conj(g, x));
  std::sort(r.elems.begin(), r.elems.end());
  return r;
}

inline bool is_subgroup(const FiniteGroup& G, const std::vector<Elem>& elems) {
  if (!std::binary_search(elems.begin(), elems.end(), Elem{0})) return false;
  for (Elem a : elems)
    for (Elem b : elems)
      if (!std::binary_search(elems.begin(), elems.end(), G.mul(a, b))) return false;
  return true;
}

// All subgroups of H, each once, in canonical order. Every subgroup arises by adjoining one
// element at a time to a smaller subgroup, so closing the list under that step finds them all.
inline std::vector<Subgroup> all_subgroups(const FiniteGroup& G, const Subgroup& H,
                                           std::size_t bound = std::size_t{1} << 10) {
  check(H.order() <= bound, ErrorCode::TooLarge,
        "subgroup enumeration limited to order " + std::to_string(bound));
  std::vector<Subgroup> out{trivial_subgroup()};
  std::map<std::vector<Elem>, std::size_t> seen{{out[0].elems, 0}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (Elem x : H.elems) {
      if (out[i].contains(x)) continue;
      auto g = out[i].gens;
      g.push_back(x);
      Subgroup s = closure(G, g);
      if (seen.count(s.elems)) continue;
      seen.emplace(s.elems, out.size());
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

// {g in G : g P g^-1 <= Q}
inline std::vector<Elem> transporter(const FiniteGroup& G, const Subgroup& P, const Subgroup& Q) {
  std::vector<Elem> out;
  const auto& test = P.gens.empty() ? P.elems : P.gens;
  for (Elem g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (Elem x : test)
      if (!Q.contains(G.conj(g, x))) {
        ok = false;
        break;
      }
    if (ok) out.push_back(g);
  }
  return out;
}

inline Subgroup normalizer(const FiniteGroup& G, const Subgroup& H, const Subgroup& P) {
  std::vector<Elem> g;
  for (Elem x : transporter(G, P, P))
    if (H.contains(x)) g.push_back(x);
  return closure(G, g);
}

inline Subgroup centralizer(const FiniteGroup& G, const Subgroup& H, const Subgroup& P) {
  const auto& test = P.gens.empty() ? P.elems : P.gens;
  std::vector<Elem> c;
  for (Elem x : H.elems) {
    bool ok = true;
    for (Elem y : test)
      if (G.mul(x, y) != G.mul(y, x)) {
        ok = false;
        break;
      }
    if (ok) c.push_back(x);
  }
  return closure(G, c);
}

inline Subgroup center(const FiniteGroup& G, const Subgroup& P) { return centralizer(G, P, P); }

inline bool is_p_power(std::size_t n, std::uint32_t p) {
  while (n > 1 && n % p == 0) n /= p;
  return n == 1;
}

// O^p(H): generated by the elements of order prime to p.
inline Subgroup op_residual(const FiniteGroup& G, const Subgroup& H, std::uint32_t p) {
  std::vector<Elem> g;
  for (Elem x : H.elems)
    if (G.elem_order(x) % p != 0) g.push_back(x);
  return closure(G, g);
}

struct LocalSubgroups {
  Subgroup normalizer, centralizer, center, op_centralizer;
};

inline LocalSubgroups local_subgroups(const FiniteGroup& G, const Subgroup& P, std::uint32_t p) {
  Subgroup all = whole_group(G);
  LocalSubgroups r;
  r.normalizer = normalizer(G, all, P);
  r.centralizer = centralizer(G, all, P);
  r.center = center(G, P);
  r.op_centralizer = op_residual(G, r.centralizer, p);
  return r;
}

// A Sylow p-subgroup: starting from 1, repeatedly adjoin the first element of N_G(P) \ P whose
// image in N_G(P)/P has p-power order.
inline Subgroup sylow(const FiniteGroup& G, std::uint32_t p) {
  Subgroup all = whole_group(G);
  Subgroup P = trivial_subgroup();
  while (true) {
    Subgroup N = normalizer(G, all, P);
    bool grown = false;
    for (Elem x : N.elems) {
      if (P.contains(x)) continue;
      std::size_t k = 1;
      for (Elem y = x; !P.contains(y); y = G.mul(y, x)) ++k;
      if (!is_p_power(k, p)) continue;
      auto g = P.gens;
      g.push_back(x);
      P = closure(G, g);
      grown = true;
      break;
    }
    if (!grown) break;
  }
  std::size_t rest = G.order() / P.order();
  check(rest % p != 0, ErrorCode::Internal, "Sylow search stopped early");
  return P;
}

}  // namespace fk
