// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sys/wait.h>

#include "fk/stable.hpp"

using namespace fk;

namespace {

GroupPtr make(std::size_t n, std::vector<std::vector<std::uint32_t>> gens) {
  std::vector<Permutation> g;
  for (auto& x : gens) g.emplace_back(std::move(x));
  return std::make_shared<const FiniteGroup>(n, std::move(g));
}

GroupPtr c2() { return make(2, {{1, 0}}); }
GroupPtr d8() { return make(4, {{1, 2, 3, 0}, {2, 1, 0, 3}}); }
GroupPtr s4() { return make(4, {{1, 2, 3, 0}, {1, 0, 2, 3}}); }
GroupPtr a4() { return make(4, {{1, 2, 0, 3}, {1, 0, 3, 2}}); }

LinkingPtr linking_of(const GroupPtr& G) { return std::make_shared<const LinkingSystem>(FusionSystem::from_group(G, 2)); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

// dim_F2 H^k(G; F2) from the un-normalized bar complex, dense.
std::vector<std::size_t> unnormalized_dims(const FiniteGroup& G, int top) {
  const ZMod R(2, 1);
  const std::size_t n = G.order();
  auto tuples = [&](int k) {
    std::size_t c = 1;
    for (int i = 0; i < k; ++i) c *= n;
    return c;
  };
  auto encode = [&](const std::vector<Elem>& g) {
    std::size_t idx = 0;
    for (Elem x : g) idx = idx * n + x;
    return idx;
  };
  std::vector<std::size_t> rank(top + 1);
  for (int k = 0; k <= top; ++k) {
    HowellForm h(R, tuples(k));
    for (std::size_t c = 0; c < tuples(k + 1); ++c) {
      std::vector<Elem> g(k + 1);
      for (std::size_t i = k + 1, x = c; i-- > 0; x /= n) g[i] = static_cast<Elem>(x % n);
      Vec row(tuples(k), 0);
      auto flip = [&](const std::vector<Elem>& t) { row[encode(t)] ^= 1; };
      flip(std::vector<Elem>(g.begin() + 1, g.end()));
      for (int i = 1; i <= k; ++i) {
        auto t = g;
        t[i - 1] = G.mul(g[i - 1], g[i]);
        t.erase(t.begin() + i);
        flip(t);
      }
      flip(std::vector<Elem>(g.begin(), g.end() - 1));
      h.insert(std::move(row));
    }
    rank[k] = h.log_order();
  }
  std::vector<std::size_t> dims;
  for (int k = 0; k < top; ++k) dims.push_back(tuples(k) - rank[k] - (k ? rank[k - 1] : 0));
  return dims;
}

Outcome biset_oracle() {
  Outcome o;
  auto G = d8();
  Subgroup S = whole_group(*G);
  std::size_t pairs = 0;
  for (const auto& a : all_classes(G, S, S))
    for (const auto& b : all_classes(G, S, S)) {
      if (a.K.order() < 2 || b.K.order() < 2) continue;
      Biset brute = decompose_biset(explicit_product(explicit_class(G, S, S, a), explicit_class(G, S, S, b)));
      o.require(compose_classes(G, S, S, S, a, b) == brute, "double coset formula differs from the quotient");
      ++pairs;
    }
  o.detail = o.pass ? std::to_string(pairs) + " class pairs" : o.detail;
  return o;
}

Outcome characteristic() {
  Outcome o;
  auto F = FusionSystem::from_group(s4(), 2);
  auto rep = characteristic_checks(characteristic_from_group(*F), *F);
  o.require(rep.f_generated && rep.left_stable && rep.right_stable && rep.nondegenerate, "a defining check fails");
  o.require(rep.ratio == 3 && rep.ratio % 2 == 1, "|Omega|/|S| = " + std::to_string(rep.ratio));
  if (o.pass) o.detail = "ratio 3";
  return o;
}

Outcome cohomology_oracles() {
  Outcome o;
  {
    auto G = c2();
    BarComplex cx(G, whole_group(*G), CoefModule(ZMod(2, 1), 1), 4);
    auto dims = unnormalized_dims(*G, 4);
    for (int k = 0; k <= 3; ++k) {
      o.require(cx.cohomology(k).ngens() == 1, "dim H^" + std::to_string(k) + "(C2) != 1");
      o.require(dims[k] == 1, "un-normalized dim H^" + std::to_string(k) + "(C2) != 1");
    }
  }
  {
    auto G = d8();
    BarComplex cx(G, whole_group(*G), CoefModule(ZMod(2, 1), 1), 2);
    o.require(cx.cohomology(1).ngens() == 2, "dim H^1(D8) != 2");
    o.require(hom_count_to_cp(*G, 2) == 4, "|Hom(D8, F2)| != 4");
  }
  // H^0 = invariants, element by element
  for (auto G : {s4(), a4(), d8()}) {
    auto F = FusionSystem::from_group(G, 2);
    const ZMod R(2, 1);
    const Matrix u = Matrix::from_rows({{1, 1}, {0, 1}}, 2);
    // sign-unipotent for S4 and D8, order three through A4/V4
    std::vector<Matrix> gens{u, u};
    if (G->order() == 12) gens = {Matrix::from_rows({{0, 1}, {1, 1}}, 2), Matrix::identity(2)};
    std::vector<Matrix> act = extend_action(*G, R, 2, gens);
    CoefModule M(R, 2, act);
    for (std::size_t P : F->centric_objects()) {
      BarComplex cx(G, F->sub(P), M, 1);
      const auto& H0 = cx.cohomology(0);
      std::size_t fixed = 0;
      for (Entry a = 0; a < 2; ++a)
        for (Entry b = 0; b < 2; ++b) {
          Vec m{a, b};
          bool inv = true;
          for (Elem x : F->sub(P).elems) inv = inv && mat_vec(R, act[x], m) == m;
          fixed += inv;
          o.require(inv == H0.is_cocycle(m), "H^0 differs from the invariants");
        }
      o.require(std::size_t{1} << H0.log_order() == fixed, "|H^0| differs from the number of fixed points");
    }
  }
  // tr o res = index
  {
    auto G = s4();
    auto F = FusionSystem::from_group(G, 2);
    for (const auto& M : {CoefModule(ZMod(2, 1), 1), CoefModule(ZMod(2, 2), 1)}) {
      BarFamily fam(G, M, 3);
      for (std::size_t P = 0; P < F->subgroups().size(); ++P)
        for (std::size_t Q = 0; Q < F->subgroups().size(); ++Q) {
          if (!F->sub(P).subset_of(F->sub(Q))) continue;
          auto cp = fam.at(F->sub(P)), cq = fam.at(F->sub(Q));
          for (int k = 0; k <= 2; ++k) {
            Hom tr_res = compose(transfer(*cp, *cq, k), restriction(*cq, *cp, k));
            Hom idx = scaled(Hom::identity(cq->cohomology(k).group()), static_cast<Entry>(F->sub(Q).order() / F->sub(P).order()));
            o.require(tr_res == idx, "tr o res differs from the index");
          }
        }
    }
  }
  return o;
}

Outcome trivial_case() {
  Outcome o;
  for (const auto& [G, h1] : {std::pair{s4(), std::size_t{1}}, std::pair{a4(), std::size_t{0}}}) {
    auto rho = LocalSystem::trivial(linking_of(G), ZMod(2, 1), 1);
    TwistedCohomology tc(rho, 3);
    NerveComplex N(rho, 3);
    for (int k = 0; k <= 2; ++k)
      o.require(factors_of(N.cohomology(k), 2) == factors_of(stable_elements(tc, k).elements, 2),
                "nerve and stable differ in degree " + std::to_string(k));
    std::size_t count = hom_count_to_cp(*G, 2), dim = 0;
    for (; count > 1; count /= 2) ++dim;
    o.require(dim == h1 && N.cohomology(1).ngens() == dim, "dim H^1 disagrees with Hom(G, C2)");
  }
  return o;
}

Outcome twisted_case() {
  Outcome o;
  auto D = d8();
  auto F = std::make_shared<FusionSystem>(D, whole_group(*D), 2);
  auto L = std::make_shared<const LinkingSystem>(F);
  auto rho = LocalSystem::unipotent(L, pi1_presentation(*L), ZMod(2, 1));
  if (!rho) {
    // h1(L) has no 2-part: fall back to the one-object system B(D8)
    auto B = std::make_shared<const LinkingSystem>(F, std::vector<std::size_t>{F->s_index()});
    rho = LocalSystem::unipotent(B, pi1_presentation(*B), ZMod(2, 1));
    o.require(rho.has_value(), "no unipotent twist on B(D8)");
    if (!rho) return o;
    o.detail = "fallback to B(D8)";
  }
  o.require(!rho->is_trivial(), "twist is trivial");
  auto rep = verify_main(*rho, 2);
  o.require(rep.nilpotent, "twist is not nilpotent");
  for (const auto& d : rep.degrees) {
    o.require(d.factors_equal, "invariant factors differ in degree " + std::to_string(d.k));
    o.require(d.into_stable && d.bijective, "comparison is not onto the stable elements in degree " + std::to_string(d.k));
  }
  o.require(rep.degrees.size() == 3, "degrees missing");
  return o;
}

Outcome idempotent_laws() {
  Outcome o;
  auto L = linking_of(s4());
  std::vector<LocalSystem> systems{LocalSystem::trivial(L, ZMod(2, 1), 1), LocalSystem::trivial(L, ZMod(2, 2), 1)};
  if (auto u = LocalSystem::unipotent(L, pi1_presentation(*L), ZMod(2, 1))) systems.push_back(*u);
  o.require(systems.size() == 3, "no unipotent system on S4");
  for (const auto& rho : systems) {
    TwistedCohomology tc(rho, 3);
    Biset om = characteristic_from_group(tc.fusion());
    for (int k = 0; k <= 2; ++k) {
      auto w = omega_endomorphism(tc, om, k);
      auto I = characteristic_idempotent(w);
      auto st = stable_elements(tc, k).elements;
      o.require(compose(I.idempotent, I.idempotent) == I.idempotent, "not idempotent");
      o.require(st.subset_of(I.image), "stable elements outside the image");
      for (const auto& v : st.generators()) o.require(w.normalized().apply(v) == v, "normalized omega moves a stable element");
      if (rho.is_trivial()) o.require(I.image == st, "image differs from the stable elements");
    }
  }
  return o;
}

Outcome delta_functor() {
  Outcome o;
  ZMod F2(2, 1), Z4(2, 2);
  Matrix two(1, 1), one(1, 1);
  two(0, 0) = 2;
  one(0, 0) = 1;
  auto D = d8();
  auto inner = std::make_shared<const LinkingSystem>(std::make_shared<FusionSystem>(D, whole_group(*D), 2));
  for (const auto& L : {inner, linking_of(s4())}) {
    LocalSes ses{LocalSystem::trivial(L, F2, 1), LocalSystem::trivial(L, Z4, 1), LocalSystem::trivial(L, F2, 1),
                 ModuleMap(F2, 1, Z4, 1, two), ModuleMap(Z4, 1, F2, 1, one)};
    for (const auto& d : verify_delta_functor(ses, 2)) {
      const std::string at = " in degree " + std::to_string(d.k);
      o.require(d.iota_square && d.sigma_square && d.delta_square && d.raw_squares, "a square fails" + at);
      o.require(d.exact_at_M && d.exact_at_N && d.exact_at_L1, "image sequence not exact" + at);
    }
  }
  return o;
}

Outcome axioms() {
  Outcome o;
  for (auto G : {s4(), a4(), d8()}) {
    auto L = linking_of(G);
    auto rep = L->check_axioms();
    o.require(rep.ok(), "axioms fail: " + rep.failure);
    const FusionSystem& F = L->fusion();
    std::map<std::tuple<std::size_t, std::size_t, std::vector<Elem>>, std::size_t> fibre;
    for (std::size_t i = 0; i < L->num_morphisms(); ++i) {
      const auto& m = L->morphism(i);
      ++fibre[{m.src, m.tgt, L->pi_table(i)}];
    }
    for (const auto& [key, n] : fibre) {
      const Subgroup& P = F.sub(L->object(std::get<0>(key)));
      o.require(n == center(F.G(), P).order(), "fibre of pi is not a Z(P)-orbit");
    }
    std::size_t homs = 0;
    for (std::size_t a = 0; a < L->num_objects(); ++a)
      for (std::size_t b = 0; b < L->num_objects(); ++b) homs += F.hom(L->object(a), L->object(b)).size();
    o.require(homs == fibre.size(), "pi is not onto the centric morphisms");
  }
  return o;
}

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = std::string("cd ") + FK_DATA_DIR + " && " + FK_CLI_PATH + " " + args + " 2>&1";
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return {-1, ""};
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::string> runs{
      "fusion-info --group s4.json --p 2",
      "centrics --group a4.json --p 2",
      "linking-build --group s4.json --p 2",
      "biset-characteristic --group s4.json --p 2",
      "cohomology --group d8.json --p 2 --module z4_sign_d8.json --max-degree 2 --cocycles",
      "stable --group s4.json --p 2 --twist unipotent.json --max-degree 2",
      "nerve --group d8.json --p 2 --module f2sq_unipotent_d8.json --max-degree 2",
      "idempotent --group s4.json --p 2 --module z4.json --max-degree 2",
      "verify-main --group d8.json --p 2 --twist unipotent.json --max-degree 2",
      "verify-trivial --group a4.json --p 2 --max-degree 2",
      "verify-delta --group d8.json --p 2 --ses bockstein.json --max-degree 1",
      "explore-conjecture --group s4.json --p 2 --twist unipotent.json --max-degree 1",
  };
  for (const auto& args : runs) {
    auto a = run_cli(args), b = run_cli(args), c = run_cli(args + " --threads 3");
    o.require(a.first == 0, "exit " + std::to_string(a.first) + " for: " + args);
    o.require(a == b && a == c, "output differs between runs of: " + args);
  }
  if (o.pass) o.detail = std::to_string(runs.size()) + " commands";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"biset double coset formula vs explicit quotient (D8)", biset_oracle},
      {"characteristic biset of S4 at p = 2", characteristic},
      {"cohomology oracles", cohomology_oracles},
      {"trivial coefficients: nerve = stable (S4, A4)", trivial_case},
      {"nilpotent twist on trivial-fusion D8: nerve = stable", twisted_case},
      {"idempotent laws on S4", idempotent_laws},
      {"delta-functor suite for the Bockstein sequence", delta_functor},
      {"linking system axioms (S4, A4, D8)", axioms},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s  (%.1fs)%s%s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), secs,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
