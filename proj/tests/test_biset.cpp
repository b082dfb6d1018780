#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fk/biset.hpp"

using namespace fk;

namespace {

Biset brute_compose(const GroupPtr& G, const Subgroup& A, const Subgroup& B, const Subgroup& C, const BisetClass& a,
                    const BisetClass& b) {
  return decompose_biset(explicit_product(explicit_class(G, A, B, a), explicit_class(G, B, C, b)));
}

}  // namespace

TEST(Biset, UnitLaws) {
  auto G = fixtures::d8();
  Subgroup S = whole_group(*G);
  BisetClass id{S, S.elems};
  Biset c = compose_classes(G, S, S, S, id, id);
  EXPECT_EQ(c, class_biset(G, S, S, S, S.elems));
  for (const auto& P : all_subgroups(*G, S)) {
    BisetClass incl{P, P.elems};
    EXPECT_EQ(compose_classes(G, P, S, S, incl, id), class_biset(G, P, S, P, P.elems));
  }
}

TEST(Biset, DoubleCosetFormulaMatchesQuotient) {
  auto G = fixtures::d8();
  Subgroup S = whole_group(*G);
  auto classes = all_classes(G, S, S);
  std::size_t pairs = 0;
  for (const auto& a : classes) {
    if (a.K.order() < 2) continue;
    for (const auto& b : classes) {
      if (b.K.order() < 2) continue;
      Biset fast = compose_classes(G, S, S, S, a, b);
      EXPECT_EQ(fast, brute_compose(G, S, S, S, a, b));
      EXPECT_EQ(fast.size(), (S.order() * S.order() / a.K.order()) * (S.order() * S.order() / b.K.order()) / S.order());
      ++pairs;
    }
  }
  EXPECT_GT(pairs, 100u);
}

TEST(Biset, MixedGroupsMatchQuotient) {
  auto G = fixtures::s4();
  Subgroup S = sylow(*G, 2);
  auto subs = all_subgroups(*G, S);
  const Subgroup& P = subs[3];
  const Subgroup& Q = subs[subs.size() - 2];
  for (const auto& a : all_classes(G, P, S))
    for (const auto& b : all_classes(G, S, Q)) EXPECT_EQ(compose_classes(G, P, S, Q, a, b), brute_compose(G, P, S, Q, a, b));
}

TEST(Biset, Associativity) {
  auto G = fixtures::d8();
  Subgroup S = whole_group(*G);
  auto subs = all_subgroups(*G, S);
  const Subgroup& C4 = fixtures::gen(*G, {{1, 2, 3, 0}});
  for (const auto& T : {subs[1], C4}) {
    auto ab = all_classes(G, T, S);
    auto bc = all_classes(G, S, S);
    auto cd = all_classes(G, S, T);
    for (std::size_t i = 0; i < ab.size(); i += 2)
      for (std::size_t j = 0; j < bc.size(); j += 3)
        for (std::size_t k = 0; k < cd.size(); k += 2) {
          Biset x = class_biset(G, T, S, ab[i].K, ab[i].phi);
          Biset y = class_biset(G, S, S, bc[j].K, bc[j].phi);
          Biset z = class_biset(G, S, T, cd[k].K, cd[k].phi);
          EXPECT_EQ(compose(compose(x, y), z), compose(x, compose(y, z)));
        }
  }
}

TEST(Biset, DecomposeRoundTrip) {
  auto G = fixtures::d8();
  Subgroup S = whole_group(*G);
  for (const auto& c : all_classes(G, S, S)) {
    auto X = explicit_class(G, S, S, c);
    X.validate();
    EXPECT_EQ(X.n, 64 / c.K.order());
    Biset d = decompose_biset(X);
    EXPECT_EQ(d, class_biset(G, S, S, c.K, c.phi));
  }
}

TEST(Biset, DecomposeExamples) {
  auto D = fixtures::d8();
  Subgroup S = whole_group(*D);
  EXPECT_EQ(decompose_biset(group_as_biset(D, S)), class_biset(D, S, S, S, S.elems));

  auto X = group_as_biset(D, S);
  FiniteBiset two{D, S, S, 2 * X.n, {}, {}};
  for (std::size_t i = 0; i < S.order(); ++i) {
    std::vector<std::size_t> l, r;
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t x = 0; x < X.n; ++x) {
        l.push_back(c * X.n + X.left[i][x]);
        r.push_back(c * X.n + X.right[i][x]);
      }
    two.left.push_back(l);
    two.right.push_back(r);
  }
  two.validate();
  EXPECT_EQ(decompose_biset(two), class_biset(D, S, S, S, S.elems).scaled(2));

  auto G = fixtures::s4();
  auto F = FusionSystem::from_group(G, 2);
  Biset om = characteristic_from_group(*F);
  ASSERT_EQ(om.num_classes(), 2u);
  std::vector<std::size_t> sizes;
  for (const auto& [c, m] : om.expanded()) sizes.push_back(m * 64 / c.K.order());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{8, 16}));
}

TEST(Biset, RejectsNonFreeLeftAction) {
  auto D = fixtures::d8();
  Subgroup S = whole_group(*D);
  FiniteBiset X{D, S, S, S.order(), {}, {}};
  for (Elem s : S.elems) {
    std::vector<std::size_t> l(S.order()), r(S.order());
    for (Elem x = 0; x < S.order(); ++x) {
      l[x] = x;
      r[x] = D->mul(x, s);
    }
    X.left.push_back(l);
    X.right.push_back(r);
  }
  X.validate();
  try {
    decompose_biset(X);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotLeftFree);
  }
  auto subs = all_subgroups(*D, S);
  std::vector<Elem> collapse(subs[1].order(), 0);
  EXPECT_THROW(class_biset(D, S, S, subs[1], collapse), Error);
}

TEST(Biset, GroupMismatch) {
  auto D = fixtures::d8();
  Subgroup S = whole_group(*D);
  auto subs = all_subgroups(*D, S);
  Biset a = class_biset(D, S, subs[1], subs[1], subs[1].elems);
  Biset b = class_biset(D, S, S, S, S.elems);
  try {
    compose(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GroupMismatch);
  }
}

TEST(Characteristic, S4OverD8) {
  auto G = fixtures::s4();
  auto F = FusionSystem::from_group(G, 2);
  Biset om = characteristic_from_group(*F);
  auto rep = characteristic_checks(om, *F);
  EXPECT_TRUE(rep.f_generated);
  EXPECT_TRUE(rep.left_stable);
  EXPECT_TRUE(rep.right_stable);
  EXPECT_TRUE(rep.nondegenerate);
  EXPECT_EQ(rep.ratio, 3u);
  EXPECT_TRUE(rep.ok());

  auto twice = characteristic_checks(om.scaled(2), *F);
  EXPECT_FALSE(twice.nondegenerate);
  EXPECT_TRUE(twice.left_stable && twice.right_stable && twice.f_generated);
}

TEST(Characteristic, IdentityFailsForA4) {
  auto G = fixtures::a4();
  auto F = FusionSystem::from_group(G, 2);
  const Subgroup& S = F->S();
  auto rep = characteristic_checks(class_biset(G, S, S, S, S.elems), *F);
  EXPECT_FALSE(rep.left_stable);
  EXPECT_TRUE(rep.nondegenerate);
  EXPECT_FALSE(rep.ok());

  Biset om = characteristic_from_group(*F);
  // V4 is normal in A4: three double cosets, each [V4, c_x]
  EXPECT_EQ(om.size(), 12u);
  for (const auto& [c, m] : om.expanded()) EXPECT_EQ(c.K.order(), 4u);
  EXPECT_TRUE(characteristic_checks(om, *F).ok());
}

TEST(Characteristic, GroupEqualsS) {
  auto D = fixtures::d8();
  auto F = FusionSystem::from_group(D, 2);
  Biset om = characteristic_from_group(*F);
  EXPECT_EQ(om, class_biset(D, F->S(), F->S(), F->S(), F->S().elems));
  EXPECT_TRUE(characteristic_checks(om, *F).ok());
}

TEST(Characteristic, CentricGenerationMatchesStabilizers) {
  for (auto G : {fixtures::s4(), fixtures::a4(), fixtures::d8()}) {
    auto F = FusionSystem::from_group(G, 2);
    const Subgroup& S = F->S();
    bool all_centric = true;
    for (Elem x = 0; x < G->order(); ++x) {
      std::vector<Elem> inter;
      for (Elem s : S.elems)
        if (S.contains(G->conj(G->inv(x), s))) inter.push_back(s);
      all_centric = all_centric && F->is_centric(F->index_of(inter));
    }
    EXPECT_EQ(characteristic_checks(characteristic_from_group(*F), *F).fc_generated, all_centric);
  }
}

TEST(Characteristic, ConstrainedClassesContainOp) {
  for (auto G : {fixtures::s4(), fixtures::a4()}) {
    auto F = FusionSystem::from_group(G, 2);
    auto pr = F->predicates();
    ASSERT_TRUE(pr.constrained);
    EXPECT_TRUE(classes_contain(characteristic_from_group(*F), F->sub(pr.op)));
  }
}

TEST(Characteristic, WeaklyClosedClassesAreStable) {
  auto G = fixtures::s4();
  auto F = FusionSystem::from_group(G, 2);
  const Subgroup& S = F->S();
  auto pr = F->predicates();
  for (std::size_t P0 : pr.weakly_closed) {
    if (!F->normal_in_F(P0) && !std::all_of(S.elems.begin(), S.elems.end(), [&](Elem s) {
          return conjugate(*G, F->sub(P0), s) == F->sub(P0);
        }))
      continue;
    std::vector<BisetClass> gens;
    for (std::size_t R = 0; R < F->subgroups().size(); ++R) {
      if (!F->sub(P0).subset_of(F->sub(R))) continue;
      for (const auto& f : F->hom(R, F->s_index())) gens.push_back({F->sub(R), f.table});
    }
    for (const auto& a : gens)
      for (const auto& b : gens) EXPECT_TRUE(classes_contain(compose_classes(G, S, S, S, a, b), F->sub(P0)));
  }
}
