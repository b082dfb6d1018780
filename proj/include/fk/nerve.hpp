#pragma once

// Normalized cochains on the nerve of a linking system with coefficients in a local system.
// An n-chain is (g_1, ..., g_n) of non-identity morphisms with g_i: X_i -> X_{i-1}, and
//   (df)(g_1..g_{n+1}) = rho(g_1) f(g_2..) + sum_i (-1)^i f(.., g_i o g_{i+1}, ..) + (-1)^{n+1} f(g_1..g_n),
// faces with an identity composite being degenerate. C^0 is the functions on objects, with
// (df)(g) = rho(g) f(source) - f(target), so H^0 is the rho-invariant part of M.

#include <deque>
#include <unordered_map>

#include "fk/cochain.hpp"
#include "fk/linking.hpp"

namespace fk {

class NerveComplex : public CochainComplex {
 public:
  static constexpr int kDefaultCap = 3;
  static constexpr std::size_t kMaxColumns = 6000;
  static constexpr std::size_t kMaxRows = std::size_t{1} << 21;

  explicit NerveComplex(const LocalSystem& rho, int cap = kDefaultCap)
      : CochainComplex(rho.ring(), cap), rho_(rho), L_(rho.linking()) {
    for (std::size_t i = 0; i < L_.num_morphisms(); ++i)
      if (!L_.is_identity(i)) nonid_.push_back(static_cast<std::uint32_t>(i));
    chains_.resize(1);
    chains_[0].resize(L_.num_objects());
    for (std::size_t a = 0; a < L_.num_objects(); ++a) chains_[0][a] = {static_cast<std::uint32_t>(a)};
  }

  const LocalSystem& local_system() const { return rho_; }
  const std::vector<std::uint32_t>& nonidentity() const { return nonid_; }

  std::size_t num_chains(int n) const {
    ensure_chains(n);
    return chains_[n].size();
  }
  std::size_t dim(int n) const override { return num_chains(n) * rho_.rank(); }

  const std::vector<std::uint32_t>& chain(int n, std::size_t i) const {
    ensure_chains(n);
    return chains_[n][i];
  }

  // Position of a chain of non-identity morphisms, or -1.
  long chain_index(const std::vector<std::uint32_t>& g) const {
    const int n = static_cast<int>(g.size());
    if (n == 0) return -1;
    ensure_chains(n);
    auto it = lookup_[n].find(pack(g));
    return it == lookup_[n].end() ? -1 : static_cast<long>(it->second);
  }

  // Rough memory needed for d_{n}: nonzeros times 16 bytes.
  std::size_t estimate_bytes(int n) const {
    std::size_t rows = count_chains(n + 1) * rho_.rank();
    return rows * (n + 2 + rho_.rank()) * 16;
  }

  // Pulls a nerve cochain back along B(S) -> L, s -> delta_S(s).
  Vec restrict_to_s(const BarComplex& cxS, int n, const Vec& f) const {
    const std::size_t r = rho_.rank();
    Vec out(cxS.dim(n), 0);
    if (n == 0) {
      std::copy(f.begin() + static_cast<std::ptrdiff_t>(L_.s_object() * r),
                f.begin() + static_cast<std::ptrdiff_t>((L_.s_object() + 1) * r), out.begin());
      return out;
    }
    std::vector<std::uint32_t> g(n);
    for (std::size_t c = 0; c < cxS.num_chains(n); ++c) {
      auto s = cxS.chain(n, c);
      for (int i = 0; i < n; ++i) g[i] = static_cast<std::uint32_t>(L_.delta_s(s[i]));
      long idx = chain_index(g);
      check(idx >= 0, ErrorCode::Internal, "delta_S chain missing from the nerve");
      std::copy(f.begin() + idx * static_cast<long>(r), f.begin() + (idx + 1) * static_cast<long>(r),
                out.begin() + static_cast<std::ptrdiff_t>(c * r));
    }
    return out;
  }

 protected:
  SparseMatrix build(int n) const override {
    const ZMod& R = ring();
    const std::size_t r = rho_.rank();
    check(dim(n) <= kMaxColumns && count_chains(n + 1) * r <= kMaxRows, ErrorCode::DegreeTooLarge,
          "nerve differential d_" + std::to_string(n) + " needs about " + std::to_string(estimate_bytes(n) >> 20) +
              " MiB and " + std::to_string(dim(n)) + " columns");
    SparseMatrix d;
    d.cols = dim(n);
    const Entry sign_last = (n + 1) % 2 ? R.neg(1) : 1;
    std::vector<std::pair<std::size_t, Entry>> row;
    ensure_chains(n + 1);
    for (const auto& g : chains_[n + 1]) {
      const Matrix& A = rho_.rho(g[0]);
      long first, last;
      std::vector<long> inner;
      if (n == 0) {
        first = static_cast<long>(L_.morphism(g[0]).src);
        last = static_cast<long>(L_.morphism(g[0]).tgt);
      } else {
        first = chain_index(std::vector<std::uint32_t>(g.begin() + 1, g.end()));
        last = chain_index(std::vector<std::uint32_t>(g.begin(), g.end() - 1));
        for (int i = 1; i <= n; ++i) {
          std::size_t c = L_.compose_or_throw(g[i - 1], g[i]);
          if (L_.is_identity(c)) {
            inner.push_back(-1);
            continue;
          }
          std::vector<std::uint32_t> t(g.begin(), g.end());
          t[i - 1] = static_cast<std::uint32_t>(c);
          t.erase(t.begin() + i);
          inner.push_back(chain_index(t));
        }
      }
      for (std::size_t a = 0; a < r; ++a) {
        row.clear();
        for (std::size_t b = 0; b < r; ++b)
          if (A(a, b)) row.emplace_back(first * r + b, A(a, b));
        for (int i = 1; i <= n; ++i)
          if (inner[i - 1] >= 0) row.emplace_back(inner[i - 1] * r + a, i % 2 ? R.neg(1) : 1);
        row.emplace_back(last * r + a, sign_last);
        d.push_row(R, row);
      }
    }
    return d;
  }

 private:
  static std::uint64_t pack(const std::vector<std::uint32_t>& g) {
    std::uint64_t h = 0;
    for (auto x : g) h = (h << 16) | x;
    return h;
  }

  // Number of n-chains without materializing them, by dynamic programming over sources.
  std::size_t count_chains(int n) const {
    if (n == 0) return L_.num_objects();
    std::vector<std::size_t> ending(L_.num_morphisms(), 0);  // chains whose last morphism is i
    for (auto i : nonid_) ending[i] = 1;
    for (int len = 2; len <= n; ++len) {
      std::vector<std::size_t> next(L_.num_morphisms(), 0);
      for (auto i : nonid_)
        for (auto j : L_.into(L_.morphism(i).src))
          if (!L_.is_identity(j)) next[j] += ending[i];
      ending = std::move(next);
    }
    std::size_t total = 0;
    for (auto x : ending) total += x;
    return total;
  }

  void ensure_chains(int n) const {
    std::lock_guard<std::mutex> lock(chain_mu_);
    check(n <= 4, ErrorCode::DegreeTooLarge, "nerve chains are limited to length 4");
    while (static_cast<int>(chains_.size()) <= n) {
      const int len = static_cast<int>(chains_.size());
      check(count_chains(len) <= kMaxRows, ErrorCode::DegreeTooLarge,
            "nerve has " + std::to_string(count_chains(len)) + " chains of length " + std::to_string(len));
      std::vector<std::vector<std::uint32_t>> next;
      if (len == 1) {
        for (auto i : nonid_) next.push_back({i});
      } else {
        for (const auto& c : chains_[len - 1])
          for (auto j : L_.into(L_.morphism(c.back()).src)) {
            if (L_.is_identity(j)) continue;
            auto t = c;
            t.push_back(static_cast<std::uint32_t>(j));
            next.push_back(std::move(t));
          }
      }
      if (lookup_.size() < chains_.size() + 1) lookup_.resize(chains_.size() + 1);
      auto& lk = lookup_[len];
      for (std::size_t i = 0; i < next.size(); ++i) lk.emplace(pack(next[i]), i);
      chains_.push_back(std::move(next));
    }
  }

  const LocalSystem& rho_;
  const LinkingSystem& L_;
  std::vector<std::uint32_t> nonid_;
  mutable std::mutex chain_mu_;
  mutable std::deque<std::vector<std::vector<std::uint32_t>>> chains_;
  mutable std::deque<std::unordered_map<std::uint64_t, std::size_t>> lookup_;
};

// The comparison H^n(|L|; rho) -> H^n(S; M) induced by delta_S.
inline Hom nerve_to_group(const NerveComplex& nerve, const BarComplex& cxS, int n) {
  return induced_map(nerve.cohomology(n), cxS.cohomology(n),
                     [&](const Vec& f) { return nerve.restrict_to_s(cxS, n, f); });
}

}  // namespace fk
