#pragma once

// F^c-stable elements, Omega-endomorphisms and the characteristic idempotent, nilpotent
// filtrations, and the verification suites comparing nerve cohomology with stable elements.

#include <set>

#include "fk/biset.hpp"
#include "fk/nerve.hpp"

namespace fk {

inline std::vector<std::int64_t> powers_of(std::uint32_t p, std::vector<int> exps) {
  std::sort(exps.begin(), exps.end());
  std::vector<std::int64_t> out;
  for (int f : exps) {
    std::int64_t q = 1;
    for (int i = 0; i < f; ++i) q *= p;
    out.push_back(q);
  }
  return out;
}

inline std::vector<std::int64_t> factors_of(const CohomologyGroup& H, std::uint32_t p) { return powers_of(p, H.exps()); }
inline std::vector<std::int64_t> factors_of(const AbSubgroup& U, std::uint32_t p) {
  return powers_of(p, U.invariant_factors());
}

// Group cohomology of the subgroups of S with coefficients in M restricted along delta_S.
class TwistedCohomology {
 public:
  TwistedCohomology(LocalSystem rho, int max_degree)
      : rho_(std::move(rho)),
        M_(rho_.ring(), rho_.rank(), rho_.s_action()),
        fam_(rho_.linking().fusion().group_ptr(), M_, max_degree) {}

  const LocalSystem& local_system() const { return rho_; }
  const LinkingSystem& linking() const { return rho_.linking(); }
  const FusionSystem& fusion() const { return rho_.linking().fusion(); }
  const CoefModule& module() const { return M_; }
  int max_degree() const { return fam_.max_degree(); }

  BarPtr bar(std::size_t subgroup) const { return fam_.at(fusion().sub(subgroup)); }
  BarPtr bar_s() const { return bar(fusion().s_index()); }
  const CohomologyGroup& HS(int k) const { return bar_s()->cohomology(k); }

  // phi^*: H^k(S) -> H^k(P) along a morphism P -> S of L.
  Hom pullback(std::size_t morphism, int k) const {
    const LinkingSystem& L = linking();
    const auto& m = L.morphism(morphism);
    check(m.tgt == L.s_object(), ErrorCode::InvalidInput, "pullback expects a morphism into S");
    return twisted_map(*bar_s(), *bar(L.object(m.src)), L.pi_table(morphism), rho_.rho(morphism), k);
  }

 private:
  LocalSystem rho_;
  CoefModule M_;
  BarFamily fam_;
};

struct StableSubmodule {
  int degree = 0;
  AbSubgroup elements;  // inside H^k(S, M)
  std::vector<std::pair<std::size_t, std::size_t>> used;  // (subgroup index, position in Aut_F)
};

// Greedy generators of Aut_F(P): positions in F.aut(P), scanned forwards or backwards.
inline std::vector<std::size_t> aut_generators(const FusionSystem& F, std::size_t P, bool reverse = false) {
  const auto& auts = F.aut(P);
  const Subgroup& SP = F.sub(P);
  std::set<std::vector<Elem>> generated{SP.elems};
  std::vector<std::size_t> gens;
  for (std::size_t t = 0; t < auts.size(); ++t) {
    std::size_t i = reverse ? auts.size() - 1 - t : t;
    if (generated.count(auts[i].table)) continue;
    gens.push_back(i);
    std::vector<std::vector<Elem>> frontier(generated.begin(), generated.end());
    while (!frontier.empty()) {
      std::vector<std::vector<Elem>> next;
      for (const auto& tab : frontier)
        for (std::size_t g : gens) {
          std::vector<Elem> c(tab.size());
          for (std::size_t j = 0; j < tab.size(); ++j) c[j] = F.apply(auts[g], tab[j]);
          if (generated.insert(c).second) next.push_back(std::move(c));
        }
      frontier = std::move(next);
    }
  }
  return gens;
}

// Kernel of alpha^* o Res - Res over generators alpha of Aut_F(P), P centric. With `exhaustive`,
// every morphism P -> S of F is used instead.
inline StableSubmodule stable_elements(const TwistedCohomology& tc, int k, bool exhaustive = false,
                                       bool reverse_generators = false) {
  const FusionSystem& F = tc.fusion();
  const LinkingSystem& L = tc.linking();
  const auto& HS = tc.HS(k);
  StableSubmodule out{k, AbSubgroup::whole(HS.group()), {}};
  for (std::size_t a = 0; a < L.num_objects(); ++a) {
    const std::size_t P = L.object(a);
    BarPtr cp = tc.bar(P);
    Hom res = restriction(*tc.bar_s(), *cp, k);
    std::vector<std::pair<std::size_t, std::vector<Elem>>> maps;
    if (exhaustive) {
      for (const auto& f : F.hom(P, F.s_index())) maps.emplace_back(maps.size(), f.table);
    } else {
      for (std::size_t g : aut_generators(F, P, reverse_generators)) maps.emplace_back(g, F.aut(P)[g].table);
    }
    for (const auto& [pos, table] : maps) {
      std::size_t psi = L.lift(a, L.s_object(), table);
      Hom diff = tc.pullback(psi, k) - res;
      out.elements = out.elements.intersect(diff.kernel());
      out.used.emplace_back(P, pos);
    }
  }
  return out;
}

struct OmegaEndomorphism {
  int degree = 0;
  Hom omega;            // before normalization
  std::size_t ratio = 0;  // |Omega| / |S|
  Entry scalar = 1;     // inverse of ratio mod p^e
  std::vector<AlperinDecomposition> decompositions;

  Hom normalized() const { return scaled(omega, scalar); }
};

// tr_P^S o T_1 o ... o T_r o Res^S_{phi(P)} for one class [P, phi].
inline Hom omega_term(const TwistedCohomology& tc, const BisetClass& c, int k, bool alternative,
                      AlperinDecomposition* used = nullptr) {
  const FusionSystem& F = tc.fusion();
  const LinkingSystem& L = tc.linking();
  const std::size_t P = F.index_of(c.K);
  FusionMorphism phi{P, F.s_index(), 0, c.phi};
  AlperinDecomposition d = alperin_factorize(L, phi, alternative);
  const std::size_t image = F.image_of_table(c.phi);
  Hom cur = restriction(*tc.bar_s(), *tc.bar(image), k);
  std::size_t at = image;
  for (std::size_t i = d.steps.size(); i-- > 0;) {
    const auto& st = d.steps[i];
    check(st.to == at, ErrorCode::Internal, "decomposition steps do not chain");
    const Subgroup& Q = F.sub(L.object(st.Q));
    const Subgroup& from = F.sub(st.from);
    auto pi = L.pi_table(st.lift);
    std::vector<Elem> t;
    for (Elem x : from.elems) t.push_back(pi[static_cast<std::size_t>(Q.pos(x))]);
    Hom T = twisted_map(*tc.bar(st.to), *tc.bar(st.from), t, tc.local_system().rho(st.lift), k);
    cur = compose(T, cur);
    at = st.from;
  }
  check(at == P, ErrorCode::Internal, "decomposition does not start at the class subgroup");
  if (used) *used = std::move(d);
  return compose(transfer(*tc.bar(P), *tc.bar_s(), k), cur);
}

inline Entry unit_inverse(const ZMod& R, std::size_t ratio) {
  check(ratio % R.p() != 0, ErrorCode::NonUnitScalar,
        "|Omega|/|S| = " + std::to_string(ratio) + " is divisible by p");
  return R.inv_unit(R.red(ratio));
}

inline OmegaEndomorphism omega_endomorphism(const TwistedCohomology& tc, const Biset& omega, int k,
                                            bool alternative = false) {
  const FusionSystem& F = tc.fusion();
  check(omega.left() == F.S() && omega.right() == F.S(), ErrorCode::GroupMismatch, "Omega must be an (S, S)-biset");
  OmegaEndomorphism out;
  out.degree = k;
  out.ratio = omega.size() / F.S().order();
  out.scalar = unit_inverse(tc.module().ring(), out.ratio);
  auto classes = omega.expanded();
  std::vector<Hom> terms(classes.size());
  std::vector<AlperinDecomposition> decs(classes.size());
  const auto& HS = tc.HS(k);
  parallel_for(classes.size(), [&](std::size_t i) {
    terms[i] = scaled(omega_term(tc, classes[i].first, k, alternative, &decs[i]), static_cast<Entry>(classes[i].second));
  });
  out.omega = Hom::zero(HS.group(), HS.group());
  for (const auto& t : terms) out.omega = out.omega + t;
  out.decompositions = std::move(decs);
  return out;
}

// Omega_* for trivial coefficients: sum of tr_P^S o phi^*.
inline Hom omega_star_trivial(const TwistedCohomology& tc, const Biset& omega, int k) {
  const FusionSystem& F = tc.fusion();
  const auto& HS = tc.HS(k);
  Hom sum = Hom::zero(HS.group(), HS.group());
  const Matrix I = Matrix::identity(tc.module().rank());
  for (const auto& [c, m] : omega.expanded()) {
    BarPtr cp = tc.bar(F.index_of(c.K));
    Hom term = compose(transfer(*cp, *tc.bar_s(), k), twisted_map(*tc.bar_s(), *cp, c.phi, I, k));
    sum = sum + scaled(term, static_cast<Entry>(m));
  }
  return sum;
}

struct CharacteristicIdempotent {
  int degree = 0;
  std::uint64_t n0 = 1, order = 1, N = 1;
  Hom idempotent;
  AbSubgroup image;
};

inline CharacteristicIdempotent characteristic_idempotent(const OmegaEndomorphism& w) {
  constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 20;
  const Hom A = w.normalized();
  CharacteristicIdempotent out;
  out.degree = w.degree;
  AbSubgroup cur = AbSubgroup::whole(A.src());
  AbSubgroup next = image_of(A, cur);
  std::uint64_t n = 1;
  while (true) {
    AbSubgroup after = image_of(A, next);
    if (after == next) break;
    next = std::move(after);
    ++n;
  }
  out.n0 = n;
  const Hom C = power(A, n);
  const auto gens = next.generators();
  std::vector<Vec> images = gens;
  std::uint64_t l = 0;
  while (true) {
    for (auto& v : images) v = C.apply(v);
    ++l;
    bool back = true;
    for (std::size_t i = 0; i < gens.size() && back; ++i) back = images[i] == gens[i];
    if (back) break;
    check(l < kMaxOrder, ErrorCode::Internal, "order on the eventual image exceeds the search cap");
  }
  out.order = l;
  out.N = n * l;
  out.idempotent = power(A, out.N);
  check(compose(out.idempotent, out.idempotent) == out.idempotent, ErrorCode::Internal,
        "iterate of the normalized endomorphism is not idempotent");
  out.image = out.idempotent.image();
  return out;
}

struct NilpotentFiltration {
  std::vector<AbSubgroup> chain;  // M_0 = 0, ..., M_n = M
  std::size_t length() const { return chain.empty() ? 0 : chain.size() - 1; }
};

// M_{i+1} = {v : (g - 1) v in M_i for every g}.
inline NilpotentFiltration nilpotent_filtration(const ZMod& R, std::size_t rank, const std::vector<Matrix>& action) {
  AbelianGroup Mg{R.p(), std::vector<int>(rank, R.e())};
  std::vector<Matrix> moves;
  for (const auto& g : action) {
    Matrix d = g;
    for (std::size_t i = 0; i < rank; ++i) d(i, i) = R.sub(d(i, i), 1);
    bool seen = false;
    for (const auto& m : moves) seen = seen || m == d;
    if (!seen) moves.push_back(std::move(d));
  }
  NilpotentFiltration out;
  out.chain.push_back(AbSubgroup::zero(Mg));
  const AbSubgroup whole = AbSubgroup::whole(Mg);
  while (!(out.chain.back() == whole)) {
    const auto base = out.chain.back().generators();
    const std::size_t t = base.size(), nf = moves.size();
    // kernel of (v, c_1, .., c_nf) -> ((g_f - 1) v - sum_b c_fb base_b)_f
    Matrix sys(nf * rank, rank + nf * t);
    for (std::size_t f = 0; f < nf; ++f)
      for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = 0; j < rank; ++j) sys(f * rank + i, j) = moves[f](i, j);
        for (std::size_t b = 0; b < t; ++b) sys(f * rank + i, rank + f * t + b) = R.neg(base[b][i]);
      }
    AbelianGroup src{R.p(), std::vector<int>(rank + nf * t, R.e())};
    AbelianGroup dst{R.p(), std::vector<int>(nf * rank, R.e())};
    std::vector<Vec> gens;
    for (const auto& g : Hom(src, dst, sys).kernel().generators())
      gens.emplace_back(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(rank));
    AbSubgroup next(Mg, gens);
    check(!(next == out.chain.back()), ErrorCode::NotNilpotent,
          "action has no fixed points on the quotient at stage " + std::to_string(out.chain.size()));
    out.chain.push_back(std::move(next));
  }
  return out;
}

inline NilpotentFiltration nilpotent_filtration(const LocalSystem& rho) {
  return nilpotent_filtration(rho.ring(), rho.rank(), rho.matrices());
}

struct MainDegree {
  int k = 0;
  std::vector<std::int64_t> nerve, stable;
  bool factors_equal = false, into_stable = false, bijective = false;
  bool pass() const { return factors_equal && into_stable && bijective; }
};

struct MainReport {
  bool nilpotent = false;
  std::size_t filtration_length = 0;
  std::string note;
  std::vector<MainDegree> degrees;
  bool pass() const {
    if (!nilpotent || degrees.empty()) return false;
    for (const auto& d : degrees)
      if (!d.pass()) return false;
    return true;
  }
};

// Nerve cohomology of L with coefficients rho against the stable elements, degrees 0..K.
inline MainReport verify_main(const LocalSystem& rho, int K) {
  MainReport rep;
  try {
    rep.filtration_length = nilpotent_filtration(rho).length();
    rep.nilpotent = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotNilpotent) throw;
    rep.note = e.what();
    return rep;
  }
  TwistedCohomology tc(rho, K + 1);
  NerveComplex nerve(rho, K + 1);
  const std::uint32_t p = rho.ring().p();
  for (int k = 0; k <= K; ++k) {
    MainDegree d;
    d.k = k;
    const auto& HN = nerve.cohomology(k);
    StableSubmodule st = stable_elements(tc, k);
    d.nerve = factors_of(HN, p);
    d.stable = factors_of(st.elements, p);
    d.factors_equal = d.nerve == d.stable;
    Hom cmp = nerve_to_group(nerve, *tc.bar_s(), k);
    AbSubgroup img = cmp.image();
    d.into_stable = img.subset_of(st.elements);
    d.bijective = cmp.kernel().log_order() == 0 && img == st.elements;
    rep.degrees.push_back(std::move(d));
  }
  return rep;
}

struct ConjectureDegree {
  int k = 0;
  std::vector<std::int64_t> stable, image, image_alt;
  bool factors_equal = false, submodules_equal = false, choices_agree = false;
};

// Stable elements against the image of the characteristic idempotent, for two decomposition
// choices. Reports only.
inline std::vector<ConjectureDegree> explore_conjecture(const LocalSystem& rho, int K) {
  TwistedCohomology tc(rho, K + 1);
  Biset omega = characteristic_from_group(tc.fusion());
  const std::uint32_t p = rho.ring().p();
  std::vector<ConjectureDegree> out;
  for (int k = 0; k <= K; ++k) {
    ConjectureDegree d;
    d.k = k;
    auto st = stable_elements(tc, k);
    auto I = characteristic_idempotent(omega_endomorphism(tc, omega, k));
    auto Ialt = characteristic_idempotent(omega_endomorphism(tc, omega, k, true));
    d.stable = factors_of(st.elements, p);
    d.image = factors_of(I.image, p);
    d.image_alt = factors_of(Ialt.image, p);
    d.factors_equal = d.stable == d.image;
    d.submodules_equal = st.elements == I.image;
    d.choices_agree = I.image == Ialt.image;
    out.push_back(std::move(d));
  }
  return out;
}

// A short exact sequence of local systems on one linking system.
struct LocalSes {
  LocalSystem L, M, N;
  ModuleMap iota, sigma;
};

struct DeltaDegree {
  int k = 0;
  bool iota_square = false, sigma_square = false, delta_square = false;  // with the idempotents
  bool raw_squares = false;                                              // with the unnormalized omega
  bool exact_at_M = false, exact_at_N = false, exact_at_L1 = false;     // image sequence
  bool pass() const {
    return iota_square && sigma_square && delta_square && raw_squares && exact_at_M && exact_at_N && exact_at_L1;
  }
};

inline std::vector<DeltaDegree> verify_delta_functor(const LocalSes& ses, int K) {
  const LinkingSystem& Lk = ses.L.linking();
  check(&ses.M.linking() == &Lk && &ses.N.linking() == &Lk, ErrorCode::InvalidInput,
        "local systems live on different linking systems");
  for (std::size_t f = 0; f < Lk.num_morphisms(); ++f) {
    auto eq = [&](const ModuleMap& m, const LocalSystem& a, const LocalSystem& b) {
      for (std::size_t j = 0; j < a.rank(); ++j) {
        Vec col = a.rho(f).column(j), ej(a.rank(), 0);
        ej[j] = 1;
        if (m.apply(col) != mat_vec(b.ring(), b.rho(f), m.apply(ej))) return false;
      }
      return true;
    };
    check(eq(ses.iota, ses.L, ses.M) && eq(ses.sigma, ses.M, ses.N), ErrorCode::EquivarianceViolated,
          "sequence maps are not equivariant at morphism " + std::to_string(f));
  }
  TwistedCohomology tL(ses.L, K + 2), tM(ses.M, K + 2), tN(ses.N, K + 2);
  const FusionSystem& F = tL.fusion();
  ShortExactSeq seq(tL.module(), tM.module(), tN.module(), ses.iota, ses.sigma, F.S().elems);
  Biset omega = characteristic_from_group(F);
  struct Deg {
    OmegaEndomorphism wL, wM, wN;
    CharacteristicIdempotent iL, iM, iN;
  };
  auto at = [&](int k) {
    Deg d{omega_endomorphism(tL, omega, k), omega_endomorphism(tM, omega, k), omega_endomorphism(tN, omega, k),
          {}, {}, {}};
    d.iL = characteristic_idempotent(d.wL);
    d.iM = characteristic_idempotent(d.wM);
    d.iN = characteristic_idempotent(d.wN);
    return d;
  };
  std::vector<Deg> degs;
  for (int k = 0; k <= K + 1; ++k) degs.push_back(at(k));
  const BarComplex &bL = *tL.bar_s(), &bM = *tM.bar_s(), &bN = *tN.bar_s();
  std::vector<DeltaDegree> out;
  for (int k = 0; k <= K; ++k) {
    const Deg &d = degs[k], &d1 = degs[k + 1];
    Hom io = module_map_induced(bL, bM, ses.iota, k), sg = module_map_induced(bM, bN, ses.sigma, k);
    Hom dl = connecting_hom(seq, bL, bM, bN, k);
    Hom io1 = module_map_induced(bL, bM, ses.iota, k + 1);
    DeltaDegree r;
    r.k = k;
    r.iota_square = compose(d.iM.idempotent, io) == compose(io, d.iL.idempotent);
    r.sigma_square = compose(d.iN.idempotent, sg) == compose(sg, d.iM.idempotent);
    r.delta_square = compose(d1.iL.idempotent, dl) == compose(dl, d.iN.idempotent);
    r.raw_squares = compose(d.wM.omega, io) == compose(io, d.wL.omega) &&
                    compose(d.wN.omega, sg) == compose(sg, d.wM.omega) &&
                    compose(d1.wL.omega, dl) == compose(dl, d.wN.omega);
    r.exact_at_M = image_of(io, d.iL.image) == sg.kernel().intersect(d.iM.image);
    r.exact_at_N = image_of(sg, d.iM.image) == dl.kernel().intersect(d.iN.image);
    r.exact_at_L1 = image_of(dl, d.iN.image) == io1.kernel().intersect(d1.iL.image);
    out.push_back(r);
  }
  return out;
}

// dim Hom(G, C_p), by assigning values to generators and checking consistency on the Cayley graph.
inline std::size_t hom_count_to_cp(const FiniteGroup& G, std::uint32_t p) {
  const std::size_t r = G.generators().size();
  std::vector<std::uint32_t> choice(r, 0);
  std::size_t count = 0;
  while (true) {
    std::vector<long> val(G.order(), -1);
    val[0] = 0;
    std::vector<Elem> queue{0};
    bool ok = true;
    for (std::size_t i = 0; i < queue.size() && ok; ++i)
      for (std::size_t t = 0; t < r && ok; ++t) {
        Elem y = G.mul(G.generator_index(t), queue[i]);
        long v = (val[queue[i]] + choice[t]) % p;
        if (val[y] < 0) {
          val[y] = v;
          queue.push_back(y);
        } else {
          ok = val[y] == v;
        }
      }
    count += ok;
    std::size_t t = 0;
    while (t < r && ++choice[t] == p) choice[t++] = 0;
    if (t == r) break;
  }
  return count;
}

}  // namespace fk
