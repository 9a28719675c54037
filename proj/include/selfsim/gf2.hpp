#pragma once

// Polynomials over GF(2), stored as little-endian bit vectors (bit i is the
// coefficient of x^i). These carry the divisibility certificates for the
// periodic-point witnesses and the truncated power-series arithmetic used by
// coset labels of series groups.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/ints.hpp"

namespace selfsim {

class GF2Poly {
 public:
  GF2Poly() = default;

  static GF2Poly zero() { return GF2Poly(); }
  static GF2Poly one() { return monomial(0); }

  static GF2Poly monomial(std::size_t e) {
    GF2Poly p;
    p.set(e);
    return p;
  }

  static GF2Poly from_exponents(const std::vector<long>& exps) {
    GF2Poly p;
    for (long e : exps) {
      if (e < 0) throw std::invalid_argument("GF2Poly: negative exponent");
      p.flip(static_cast<std::size_t>(e));
    }
    return p;
  }

  // (1 + x)^n expanded via the binary digits of n: (1+x)^(2^a) = 1 + x^(2^a).
  static GF2Poly pow_one_plus_x(const Int& n) {
    if (n < 0) throw std::invalid_argument("pow_one_plus_x: negative exponent");
    GF2Poly acc = one();
    Int k = n;
    std::size_t a = 0;
    while (k > 0) {
      if ((k & 1) != 0) {
        GF2Poly shifted = acc.shifted_left(std::size_t{1} << a);
        acc = acc + shifted;
      }
      k >>= 1;
      ++a;
    }
    return acc;
  }

  // 1 + x^k.
  static GF2Poly one_plus_xk(std::size_t k) {
    GF2Poly p = one();
    p.flip(k);
    return p;
  }

  bool is_zero() const { return words_.empty(); }

  bool get(std::size_t i) const {
    std::size_t w = i >> 6, b = i & 63;
    if (w >= words_.size()) return false;
    return (words_[w] >> b) & 1ULL;
  }

  void set(std::size_t i) {
    std::size_t w = i >> 6, b = i & 63;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= (1ULL << b);
  }

  void flip(std::size_t i) {
    std::size_t w = i >> 6, b = i & 63;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] ^= (1ULL << b);
    trim();
  }

  // Degree of the polynomial; -1 for the zero polynomial.
  long degree() const {
    if (words_.empty()) return -1;
    std::uint64_t top = words_.back();
    long bit = 63;
    while (!(top >> bit & 1ULL)) --bit;
    return static_cast<long>((words_.size() - 1) * 64) + bit;
  }

  std::size_t weight() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }

  GF2Poly operator+(const GF2Poly& o) const {
    GF2Poly r;
    r.words_.resize(std::max(words_.size(), o.words_.size()), 0);
    for (std::size_t i = 0; i < r.words_.size(); ++i) {
      std::uint64_t a = i < words_.size() ? words_[i] : 0;
      std::uint64_t b = i < o.words_.size() ? o.words_[i] : 0;
      r.words_[i] = a ^ b;
    }
    r.trim();
    return r;
  }

  GF2Poly operator*(const GF2Poly& o) const {
    if (is_zero() || o.is_zero()) return zero();
    GF2Poly r;
    r.words_.resize(words_.size() + o.words_.size(), 0);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int b = __builtin_ctzll(w);
        w &= w - 1;
        r.xor_shifted(o, i * 64 + static_cast<std::size_t>(b));
      }
    }
    r.trim();
    return r;
  }

  bool operator==(const GF2Poly& o) const { return words_ == o.words_; }
  bool operator!=(const GF2Poly& o) const { return words_ != o.words_; }

  // Quotient/remainder of this by d (d nonzero).
  std::pair<GF2Poly, GF2Poly> divmod(const GF2Poly& d) const {
    if (d.is_zero()) throw std::invalid_argument("GF2Poly: division by zero");
    GF2Poly rem = *this, q;
    long dd = d.degree();
    long rd = rem.degree();
    while (rd >= dd) {
      std::size_t shift = static_cast<std::size_t>(rd - dd);
      q.flip(shift);
      rem.xor_shifted(d, shift);
      rem.trim();
      rd = rem.degree();
    }
    q.trim();
    return {q, rem};
  }

  bool divisible_by(const GF2Poly& d) const { return divmod(d).second.is_zero(); }

  // Value at x = 1, i.e. the parity of the coefficient count.
  int eval_at_one() const { return static_cast<int>(weight() & 1); }

  GF2Poly shifted_left(std::size_t k) const {
    GF2Poly r;
    if (is_zero()) return r;
    r.words_.resize(words_.size() + k / 64 + 1, 0);
    r.xor_shifted(*this, k);
    r.trim();
    return r;
  }

  // Truncate to terms of degree < n (power-series view).
  GF2Poly truncated(std::size_t n) const {
    GF2Poly r;
    for (std::size_t i = 0; i < n; ++i)
      if (get(i)) r.set(i);
    return r;
  }

  std::vector<long> exponents() const {
    std::vector<long> e;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int b = __builtin_ctzll(w);
        w &= w - 1;
        e.push_back(static_cast<long>(i * 64 + static_cast<std::size_t>(b)));
      }
    }
    return e;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (long e : exponents()) {
      if (!s.empty()) s += "+";
      if (e == 0) s += "1";
      else if (e == 1) s += "x";
      else s += "x^" + std::to_string(e);
    }
    return s;
  }

 private:
  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  void xor_shifted(const GF2Poly& src, std::size_t k) {
    std::size_t wshift = k / 64, bshift = k % 64;
    std::size_t need = src.words_.size() + wshift + 1;
    if (words_.size() < need) words_.resize(need, 0);
    for (std::size_t i = 0; i < src.words_.size(); ++i) {
      std::uint64_t w = src.words_[i];
      if (w == 0) continue;
      words_[i + wshift] ^= (w << bshift);
      if (bshift != 0) words_[i + wshift + 1] ^= (w >> (64 - bshift));
    }
  }

  std::vector<std::uint64_t> words_;
};

// C(n, k) mod 2 via the digit criterion: the binomial is odd exactly when the
// binary digits of k are dominated by those of n.
inline bool binom_is_odd(const Int& n, const Int& k) {
  if (k < 0 || n < 0 || k > n) return false;
  return (n & k) == k;
}

}  // namespace selfsim
