#pragma once

// Arithmetic in the local ring Z/p^e.

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fk/error.hpp"

namespace fk {

using Entry = std::uint64_t;
using Vec = std::vector<Entry>;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

class ZMod {
 public:
  ZMod() = default;
  ZMod(std::uint32_t p, int e) : p_(p), e_(e) {
    check(is_prime(p), ErrorCode::InvalidInput, "modulus base " + std::to_string(p) + " is not prime");
    check(e >= 1 && e <= 30, ErrorCode::InvalidInput, "exponent out of range");
    pow_.assign(e + 1, 1);
    for (int i = 1; i <= e; ++i) pow_[i] = pow_[i - 1] * p;
    check(pow_[e] < (Entry{1} << 31), ErrorCode::InvalidInput, "p^e too large");
    q_ = pow_[e];
    mask_ = (p == 2) ? q_ - 1 : 0;
  }

  std::uint32_t p() const { return p_; }
  int e() const { return e_; }
  Entry q() const { return q_; }
  Entry pow(int k) const { return pow_[k]; }

  Entry red(Entry x) const { return mask_ ? (x & mask_) : (x % q_); }
  Entry from_int(std::int64_t x) const {
    std::int64_t m = x % static_cast<std::int64_t>(q_);
    return static_cast<Entry>(m < 0 ? m + static_cast<std::int64_t>(q_) : m);
  }
  Entry add(Entry a, Entry b) const { return red(a + b); }
  Entry sub(Entry a, Entry b) const { return red(a + q_ - b); }
  Entry neg(Entry a) const { return red(q_ - a); }
  Entry mul(Entry a, Entry b) const { return red(a * b); }

  // p-adic valuation of a nonzero residue; e for zero.
  int val(Entry a) const {
    if (a == 0) return e_;
    int v = 0;
    while (a % p_ == 0) {
      a /= p_;
      ++v;
    }
    return v;
  }

  Entry inv_unit(Entry a) const {
    std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(q_), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
      std::int64_t qq = r / nr;
      std::int64_t tmp = t - qq * nt;
      t = nt;
      nt = tmp;
      tmp = r - qq * nr;
      r = nr;
      nr = tmp;
    }
    check(r == 1, ErrorCode::Internal, "inverting a non-unit");
    return from_int(t);
  }

  // a = u * p^v with u a unit; returns u^{-1}.
  Entry unit_part_inv(Entry a) const {
    int v = val(a);
    return inv_unit((a / pow_[v]) % q_);
  }

  // dst += c * src, over the index range [from, size).
  void axpy(std::span<Entry> dst, std::span<const Entry> src, Entry c, std::size_t from = 0) const {
    if (c == 0) return;
    const std::size_t n = dst.size();
    if (mask_) {
      for (std::size_t i = from; i < n; ++i) dst[i] = (dst[i] + c * src[i]) & mask_;
    } else {
      for (std::size_t i = from; i < n; ++i)
        if (src[i]) dst[i] = (dst[i] + c * src[i]) % q_;
    }
  }

  void scale(std::span<Entry> v, Entry c) const {
    for (auto& x : v) x = mul(x, c);
  }

  bool operator==(const ZMod& o) const { return p_ == o.p_ && e_ == o.e_; }

 private:
  std::uint32_t p_ = 2;
  int e_ = 1;
  Entry q_ = 2;
  Entry mask_ = 1;
  std::vector<Entry> pow_{1, 2};
};

inline bool is_zero(std::span<const Entry> v) {
  for (Entry x : v)
    if (x) return false;
  return true;
}

}  // namespace fk
