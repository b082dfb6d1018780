#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fk/abelian.hpp"
#include "fk/howell.hpp"
#include "fk/smith.hpp"

using namespace fk;

namespace {

// All elements of the span of gens, by closure under adding generators.
std::set<Vec> span_elements(const ZMod& R, std::size_t n, const std::vector<Vec>& gens) {
  std::set<Vec> seen{Vec(n, 0)};
  std::vector<Vec> todo{Vec(n, 0)};
  while (!todo.empty()) {
    Vec v = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      Vec w = v;
      R.axpy(w, g, 1);
      if (seen.insert(w).second) todo.push_back(w);
    }
  }
  return seen;
}

std::vector<Vec> all_vectors(const ZMod& R, std::size_t n) {
  std::vector<Vec> out{Vec{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec> next;
    for (const auto& v : out)
      for (Entry a = 0; a < R.q(); ++a) {
        Vec w = v;
        w.push_back(a);
        next.push_back(w);
      }
    out = next;
  }
  return out;
}

std::vector<Vec> random_rows(std::mt19937& rng, const ZMod& R, std::size_t m, std::size_t n) {
  std::vector<Vec> rows(m, Vec(n));
  for (auto& r : rows)
    for (auto& x : r) {
      x = rng() % R.q();
      if (rng() % 3 == 0) x = R.mul(x, R.p());
    }
  return rows;
}

}  // namespace

TEST(Howell, MatchesBruteForceSpan) {
  std::mt19937 rng(7);
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {2, 1}}) {
    ZMod R(p, e);
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t n = 3, m = 1 + rng() % 4;
      auto rows = random_rows(rng, R, m, n);
      HowellForm h(R, n);
      for (auto& r : rows) h.insert(r);
      auto span = span_elements(R, n, rows);
      std::size_t log = 0;
      for (std::size_t s = span.size(); s > 1; s /= R.p()) ++log;
      EXPECT_EQ(h.log_order(), log);
      for (const auto& v : all_vectors(R, n)) EXPECT_EQ(h.contains(v), span.count(v) == 1);

      // A different generating set of the same module gives the same form.
      std::vector<Vec> other(span.begin(), span.end());
      std::shuffle(other.begin(), other.end(), rng);
      HowellForm h2(R, n);
      for (auto& v : other) h2.insert(v);
      EXPECT_TRUE(h == h2);
    }
  }
}

TEST(Howell, KernelMatchesBruteForce) {
  std::mt19937 rng(11);
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {2, 1}, {3, 1}}) {
    ZMod R(p, e);
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t n = 3, m = 1 + rng() % 3;
      auto rows = random_rows(rng, R, m, n);
      HowellForm h(R, n);
      for (auto& r : rows) h.insert(r);
      auto K = h.kernel();
      std::vector<Vec> gens;
      for (std::size_t i = 0; i < K.size(); ++i) gens.push_back(K.gen(i));
      auto span = span_elements(R, n, gens);
      for (const auto& x : all_vectors(R, n)) {
        bool in_kernel = true;
        for (const auto& r : rows) {
          Entry s = 0;
          for (std::size_t j = 0; j < n; ++j) s = R.add(s, R.mul(r[j], x[j]));
          if (s) in_kernel = false;
        }
        EXPECT_EQ(in_kernel, span.count(x) == 1);
        EXPECT_EQ(in_kernel, K.standard_rep(x).has_value());
      }
    }
  }
}

TEST(Smith, DiagonalizesAndInverts) {
  std::mt19937 rng(3);
  ZMod R(2, 3);
  for (int trial = 0; trial < 30; ++trial) {
    auto rows = random_rows(rng, R, 3, 4);
    Matrix A = Matrix::from_rows(rows, 4);
    auto s = smith_columns(R, A);
    EXPECT_EQ(mat_mul(R, s.W, s.W_inv), Matrix::identity(4));
    // Row span of A*W equals the span of p^{v_d} e_d.
    HowellForm lhs(R, 4), rhs(R, 4);
    Matrix AW = mat_mul(R, A, s.W);
    for (std::size_t i = 0; i < 3; ++i) lhs.insert(Vec(AW.row(i).begin(), AW.row(i).end()));
    for (std::size_t d = 0; d < 4; ++d) {
      if (s.diag_val[d] >= R.e()) continue;
      Vec v(4, 0);
      v[d] = R.pow(s.diag_val[d]);
      rhs.insert(v);
    }
    EXPECT_TRUE(lhs == rhs);
    EXPECT_TRUE(std::is_sorted(s.diag_val.begin(), s.diag_val.end()));
  }
}

TEST(Smith, IntegerAbelianization) {
  // <a, b | 2a, 4b, 2a + 2b> is (Z/2)^2.
  auto r = int_smith({{2, 0}, {0, 4}, {2, 2}}, 2);
  EXPECT_EQ(invariant_factors(r.diag), (std::vector<std::int64_t>{2, 2}));
  auto c = int_smith({{4, 6}}, 2);  // Z/2 + Z
  EXPECT_EQ(invariant_factors(c.diag), (std::vector<std::int64_t>{2, 0}));
  auto free = int_smith({{1, -1, 0}}, 3);
  EXPECT_EQ(std::count(free.diag.begin(), free.diag.end(), 0), 2);
  EXPECT_EQ(invariant_factors({6, 4, 0}), (std::vector<std::int64_t>{2, 12, 0}));
}

TEST(Abelian, SubquotientCoordinates) {
  ZMod R(2, 2);
  // Z = all of (Z/4)^2, B = <(2, 0)> gives Z/2 + Z/4.
  HowellForm whole(R, 2);
  whole.insert({1, 0});
  whole.insert({0, 1});
  Subquotient H(whole.row_basis(), {{2, 0}});
  auto ex = H.exps();
  std::sort(ex.begin(), ex.end());
  EXPECT_EQ(ex, (std::vector<int>{1, 2}));
  for (std::size_t i = 0; i < H.ngens(); ++i) {
    Vec c = H.coords(H.rep(i));
    for (std::size_t j = 0; j < c.size(); ++j) EXPECT_EQ(c[j], i == j ? 1u : 0u);
  }
  EXPECT_TRUE(is_zero(H.coords({2, 0})));
}

TEST(Abelian, KernelImageIntersection) {
  AbelianGroup A{2, {1, 2, 2}};
  AbelianGroup B{2, {2, 1}};
  Matrix m(2, 3);
  m(0, 0) = 2;  // Z/2 -> Z/4 by doubling
  m(0, 1) = 1;
  m(1, 2) = 1;
  Hom h(A, B, m);
  EXPECT_TRUE(h.well_defined());
  auto K = h.kernel();
  auto I = h.image();
  EXPECT_EQ(K.log_order() + I.log_order(), A.log_order());
  for (const auto& g : K.generators()) EXPECT_TRUE(is_zero(h.apply(g)));
  EXPECT_EQ(I, AbSubgroup::whole(B));

  AbSubgroup U(A, {{1, 0, 0}, {0, 2, 0}});
  AbSubgroup V(A, {{1, 2, 0}, {0, 0, 1}});
  auto W = U.intersect(V);
  // U = Z/2 + 2Z/4, V = <(1,2,0)> + Z/4 e3; intersection is <(1,2,0)> of order 2.
  EXPECT_EQ(W.log_order(), 1u);
  EXPECT_TRUE(W.contains({1, 2, 0}));
  EXPECT_EQ(U.sum(V).log_order(), 4u);
  EXPECT_EQ(AbSubgroup::whole(A).invariant_factors(), (std::vector<int>{1, 2, 2}));
}
