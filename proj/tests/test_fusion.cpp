#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fk/fusion.hpp"

using namespace fk;

namespace {

std::size_t idx(const FusionSystem& F, const Subgroup& P) { return F.index_of(P); }

Subgroup normal_klein(const FiniteGroup& G) { return fixtures::gen(G, {{1, 0, 3, 2}, {2, 3, 0, 1}}); }

}  // namespace

TEST(Fusion, S4AutomorphismsAndCentrics) {
  auto F = FusionSystem::from_group(fixtures::s4(), 2);
  EXPECT_EQ(F->S().order(), 8u);
  std::size_t V = idx(*F, normal_klein(F->G()));
  EXPECT_EQ(F->aut(V).size(), 6u);
  // Aut_F(S) = Inn(S) here since N(S) = S.
  EXPECT_EQ(F->aut(F->s_index()).size(), 4u);

  auto cen = F->centric_objects();
  ASSERT_EQ(cen.size(), 4u);
  std::vector<std::size_t> orders;
  for (auto c : cen) orders.push_back(F->sub(c).order());
  EXPECT_EQ(orders, (std::vector<std::size_t>{4, 4, 4, 8}));
  EXPECT_TRUE(F->is_centric(V));

  // The other Klein subgroup of S does not map into V.
  for (auto c : cen) {
    if (c == V || F->sub(c).order() != 4) continue;
    bool cyclic = F->G().elem_order(F->sub(c).gens[0]) == 4 && F->sub(c).gens.size() == 1;
    if (!cyclic && F->sub(c).elems != F->sub(V).elems) {
      EXPECT_TRUE(F->hom(c, V).empty());
    }
  }
}

TEST(Fusion, A4) {
  auto F = FusionSystem::from_group(fixtures::a4(), 2);
  auto cen = F->centric_objects();
  ASSERT_EQ(cen.size(), 1u);
  EXPECT_EQ(cen[0], F->s_index());
  EXPECT_EQ(F->aut(F->s_index()).size(), 3u);
  auto pr = F->predicates();
  EXPECT_EQ(pr.op, F->s_index());
  EXPECT_TRUE(pr.constrained);
}

TEST(Fusion, TrivialFusion) {
  auto G = fixtures::d8();
  FusionSystem F(G, whole_group(*G), 2);
  auto pr = F.predicates();
  EXPECT_EQ(pr.op, F.s_index());
  EXPECT_TRUE(pr.constrained);
}

TEST(Fusion, S4Predicates) {
  auto F = FusionSystem::from_group(fixtures::s4(), 2);
  auto pr = F->predicates();
  std::size_t V = idx(*F, normal_klein(F->G()));
  EXPECT_EQ(pr.op, V);
  EXPECT_TRUE(pr.constrained);
  EXPECT_NE(std::find(pr.weakly_closed.begin(), pr.weakly_closed.end(), V), pr.weakly_closed.end());
  // Each weakly closed subgroup is alone in its F-class.
  for (auto P : pr.weakly_closed) EXPECT_EQ(F->conjugates(P), std::vector<std::size_t>{P});
}

TEST(Fusion, CategoryAxioms) {
  auto F = FusionSystem::from_group(fixtures::s4(), 2);
  const auto& G = F->G();
  const std::size_t n = F->subgroups().size();
  for (std::size_t P = 0; P < n; ++P)
    for (std::size_t Q = 0; Q < n; ++Q) {
      const auto& PQ = F->hom(P, Q);
      // Hom_S(P, Q) is contained in Hom_F(P, Q).
      for (Elem s : F->S().elems) {
        bool inside = true;
        std::vector<Elem> t;
        for (Elem x : F->sub(P).elems) {
          t.push_back(G.conj(s, x));
          inside = inside && F->sub(Q).contains(t.back());
        }
        if (!inside) continue;
        bool found = false;
        for (const auto& f : PQ) found = found || f.table == t;
        EXPECT_TRUE(found);
      }
      for (const auto& f : PQ) {
        // image is a subgroup and f corestricts to an isomorphism onto it
        std::size_t I = F->image(f);
        EXPECT_EQ(F->sub(I).order(), F->sub(P).order());
        for (std::size_t R = 0; R < n; ++R)
          for (const auto& g : F->hom(Q, R)) {
            std::vector<Elem> t;
            for (Elem x : f.table) t.push_back(F->apply(g, x));
            bool found = false;
            for (const auto& h : F->hom(P, R)) found = found || h.table == t;
            EXPECT_TRUE(found);
          }
      }
    }
}

TEST(Fusion, CentricsClosedUpwardsAndUnderConjugacy) {
  for (auto G : {fixtures::s4(), fixtures::a4(), fixtures::d8()}) {
    auto F = FusionSystem::from_group(G, 2);
    const std::size_t n = F->subgroups().size();
    for (std::size_t P = 0; P < n; ++P) {
      if (!F->is_centric(P)) continue;
      for (std::size_t Q = 0; Q < n; ++Q)
        if (F->sub(P).subset_of(F->sub(Q))) {
          EXPECT_TRUE(F->is_centric(Q));
        }
      for (std::size_t Q : F->conjugates(P)) EXPECT_TRUE(F->is_centric(Q));
    }
  }
}

TEST(Fusion, AlperinRecomposes) {
  for (auto G : {fixtures::s4(), fixtures::a4()}) {
    auto F = FusionSystem::from_group(G, 2);
    for (std::size_t P = 0; P < F->subgroups().size(); ++P)
      for (const auto& phi : F->hom(P, F->s_index())) {
        for (bool rev : {false, true}) {
          auto steps = F->alperin_search(phi, rev);
          std::vector<Elem> t = F->sub(P).elems;
          std::size_t cur = P;
          for (const auto& st : steps) {
            EXPECT_EQ(st.from, cur);
            EXPECT_TRUE(F->is_centric(st.Q));
            for (auto& x : t) x = F->apply(F->aut(st.Q)[st.aut], x);
            cur = F->image_of_table(t);
            EXPECT_EQ(st.to, cur);
          }
          EXPECT_EQ(t, phi.table);
        }
      }
  }
  // identity inclusion: empty decomposition
  auto F = FusionSystem::from_group(fixtures::s4(), 2);
  EXPECT_TRUE(F->alperin_search(F->hom(0, F->s_index())[0]).empty());
}
