#pragma once

#include <memory>
#include <vector>

#include "fk/group.hpp"

namespace fixtures {

inline fk::GroupPtr make(std::size_t n, std::vector<std::vector<std::uint32_t>> gens) {
  std::vector<fk::Permutation> g;
  for (auto& x : gens) g.emplace_back(std::move(x));
  return std::make_shared<const fk::FiniteGroup>(n, std::move(g));
}

inline fk::GroupPtr c2() { return make(2, {{1, 0}}); }
inline fk::GroupPtr c4() { return make(4, {{1, 2, 3, 0}}); }
inline fk::GroupPtr v4() { return make(4, {{1, 0, 3, 2}, {2, 3, 0, 1}}); }
inline fk::GroupPtr d8() { return make(4, {{1, 2, 3, 0}, {2, 1, 0, 3}}); }
inline fk::GroupPtr s4() { return make(4, {{1, 2, 3, 0}, {1, 0, 2, 3}}); }
inline fk::GroupPtr a4() { return make(4, {{1, 2, 0, 3}, {1, 0, 3, 2}}); }

// Subgroup generated by the given permutations.
inline fk::Subgroup gen(const fk::FiniteGroup& G, std::vector<std::vector<std::uint32_t>> perms) {
  std::vector<fk::Elem> g;
  for (auto& p : perms) g.push_back(G.index_of(fk::Permutation(std::move(p))));
  return fk::closure(G, g);
}

}  // namespace fixtures
