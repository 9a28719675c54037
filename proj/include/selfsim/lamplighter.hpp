#pragma once

// Lamplighter-type wreath products F wr Z for a finite abelian lamp group
// F = Z/m1 + ... + Z/mr. Elements are pairs (shift, lamps) where lamps is a
// finitely supported F-valued function on Z. The pair encodes the affine
// transformation x |-> u^shift * x + h of the Laurent module F[u, u^-1],
// where h = sum lamps(k) * u^k; composition follows the engine-wide
// convention (apply left factor first):
//
//   (m, h) * (m', h') = (m + m', u^m' * h + h')
//
// The binary instance F = Z/2 identifies u = 1 + t and carries extra
// machinery for the t-adic filtration: membership in t^n * F[u, u^-1],
// exact division by t, and truncated expansions in powers of t. That
// filtration drives the self-similar action and the subgroup chain.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/gf2.hpp"
#include "selfsim/ints.hpp"

namespace selfsim {

struct LampGroup {
  std::vector<Int> moduli;  // F = direct sum of Z/moduli[i], each >= 2

  bool is_binary() const { return moduli.size() == 1 && moduli[0] == 2; }
};

struct LamplighterGroup {
  using Value = std::vector<Int>;                     // one residue per modulus
  using Lamps = std::vector<std::pair<Int, Value>>;   // sorted by position, values nonzero

  struct Element {
    Int shift;
    Lamps lamps;
    bool operator==(const Element& o) const { return shift == o.shift && lamps == o.lamps; }
    bool operator!=(const Element& o) const { return !(*this == o); }
  };

  LampGroup F;

  explicit LamplighterGroup(LampGroup f = LampGroup{{Int(2)}}) : F(std::move(f)) {
    if (F.moduli.empty()) throw std::invalid_argument("LamplighterGroup: empty lamp group");
    for (const Int& m : F.moduli)
      if (m < 2) throw std::invalid_argument("LamplighterGroup: modulus must be >= 2");
  }

  Value reduce(Value v) const {
    if (v.size() != F.moduli.size()) throw std::invalid_argument("lamp value has wrong rank");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = imod(v[i], F.moduli[i]);
    return v;
  }

  bool value_is_zero(const Value& v) const {
    for (const Int& c : v)
      if (c != 0) return false;
    return true;
  }

  Lamps lamps_add(const Lamps& a, const Lamps& b) const {
    Lamps out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.push_back(b[j++]);
      } else {
        Value v = a[i].second;
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = imod(v[k] + b[j].second[k], F.moduli[k]);
        if (!value_is_zero(v)) out.emplace_back(a[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    return out;
  }

  Lamps lamps_negate(Lamps a) const {
    for (auto& [pos, v] : a)
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = imod(-v[k], F.moduli[k]);
    return a;
  }

  static Lamps lamps_shift(Lamps a, const Int& d) {
    for (auto& [pos, v] : a) pos += d;
    return a;
  }

  Element identity() const { return {0, {}}; }

  Element mul(const Element& a, const Element& b) const {
    return {a.shift + b.shift, lamps_add(lamps_shift(a.lamps, b.shift), b.lamps)};
  }

  Element inv(const Element& a) const {
    return {-a.shift, lamps_negate(lamps_shift(a.lamps, -a.shift))};
  }

  bool eq(const Element& a, const Element& b) const { return a == b; }

  bool is_identity(const Element& a) const { return a.shift == 0 && a.lamps.empty(); }

  std::string key(const Element& a) const {
    std::string s = "L(" + a.shift.str() + "|";
    bool first = true;
    for (const auto& [pos, v] : a.lamps) {
      if (!first) s += ",";
      first = false;
      s += pos.str();
      if (!F.is_binary()) {
        s += ":";
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (k) s += ".";
          s += v[k].str();
        }
      }
    }
    return s + ")";
  }

  Element pow(const Element& a, const Int& e) const {
    Element base = e < 0 ? inv(a) : a;
    Int k = e < 0 ? Int(-e) : e;
    Element acc = identity();
    while (k > 0) {
      if ((k & 1) != 0) acc = mul(acc, base);
      base = mul(base, base);
      k >>= 1;
    }
    return acc;
  }

  // ---- binary instance -------------------------------------------------

  void require_binary() const {
    if (!F.is_binary()) throw std::logic_error("operation requires the binary lamp group");
  }

  Element from_positions(const Int& shift, std::vector<Int> positions) const {
    require_binary();
    std::sort(positions.begin(), positions.end());
    Lamps lamps;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (i + 1 < positions.size() && positions[i] == positions[i + 1]) {
        ++i;  // pairs cancel in Z/2
        continue;
      }
      lamps.emplace_back(positions[i], Value{Int(1)});
    }
    return {shift, std::move(lamps)};
  }

  std::vector<Int> positions(const Element& a) const {
    require_binary();
    std::vector<Int> p;
    p.reserve(a.lamps.size());
    for (const auto& [pos, v] : a.lamps) p.push_back(pos);
    return p;
  }

  // Named generators: b is the bare unit shift, a additionally toggles the
  // lamp at the origin (a = b * s with s the origin lamp toggle).
  std::vector<std::pair<std::string, Element>> named_generators() const {
    require_binary();
    return {
        {"a", from_positions(1, {0})},
        {"b", from_positions(1, {})},
        {"a^-1", inv(from_positions(1, {0}))},
        {"b^-1", inv(from_positions(1, {}))},
    };
  }

  Element lamp_at_origin() const { return from_positions(0, {0}); }  // s = b^-1 a

  // Lamp part as a GF(2) polynomial in u together with the exponent offset:
  // h = u^offset * poly(u).
  std::pair<GF2Poly, Int> lamp_poly(const Element& a) const {
    require_binary();
    if (a.lamps.empty()) return {GF2Poly::zero(), 0};
    Int offset = a.lamps.front().first;
    GF2Poly p;
    for (const auto& [pos, v] : a.lamps) p.set(static_cast<std::size_t>(to_long(pos - offset)));
    return {p, offset};
  }

  Element from_lamp_poly(const Int& shift, const GF2Poly& p, const Int& offset) const {
    std::vector<Int> pos;
    for (long e : p.exponents()) pos.push_back(offset + e);
    return from_positions(shift, std::move(pos));
  }

  // t-adic valuation of the lamp part, where u = 1 + t; the lamp part lies in
  // t^n * F[u,u^-1] exactly when (1+u)^n divides its polynomial. Returns the
  // exact multiplicity (lamp part nonzero required).
  Int lamp_t_valuation(const Element& a) const {
    require_binary();
    if (a.lamps.empty()) throw std::invalid_argument("t-valuation of zero lamp part");
    auto [p, offset] = lamp_poly(a);
    GF2Poly u1 = GF2Poly::one_plus_xk(1);
    Int n = 0;
    while (true) {
      auto [q, r] = p.divmod(u1);
      if (!r.is_zero()) return n;
      p = q;
      ++n;
    }
  }

  bool lamp_in_tn(const Element& a, const Int& n) const {
    require_binary();
    if (a.lamps.empty()) return true;
    return lamp_t_valuation(a) >= n;
  }

  // Exact division of the lamp part by t = 1 + u; requires divisibility.
  Element lamp_div_t(const Element& a) const {
    require_binary();
    if (a.lamps.empty()) return {a.shift, {}};
    auto [p, offset] = lamp_poly(a);
    auto [q, r] = p.divmod(GF2Poly::one_plus_xk(1));
    if (!r.is_zero()) throw std::invalid_argument("lamp part is not divisible by t");
    return from_lamp_poly(a.shift, q, offset);
  }

  Element lamp_mul_t(const Element& a) const {
    require_binary();
    auto [p, offset] = lamp_poly(a);
    return from_lamp_poly(a.shift, p * GF2Poly::one_plus_xk(1), offset);
  }

  // Coefficient parity of t^j in (1+t)^k, valid for negative k as well.
  static bool binom_parity(const Int& k, long j) {
    if (k >= 0) return binom_is_odd(k, j);
    return binom_is_odd(Int(j - k - 1), j);
  }

  // First n coefficients of the lamp part expanded in powers of t.
  std::vector<int> lamp_t_coefficients(const Element& a, long n) const {
    require_binary();
    std::vector<int> c(static_cast<std::size_t>(n), 0);
    for (const auto& [pos, v] : a.lamps)
      for (long j = 0; j < n; ++j)
        if (binom_parity(pos, j)) c[static_cast<std::size_t>(j)] ^= 1;
    return c;
  }

  int lamp_count_parity(const Element& a) const {
    require_binary();
    return static_cast<int>(a.lamps.size() % 2);
  }
};

}  // namespace selfsim
