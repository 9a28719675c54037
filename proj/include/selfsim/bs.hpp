#pragma once

// Solvable Baumslag–Solitar groups BS(1, m) realized as affine maps of the
// line over Z[1/m]: the pair (k, r) encodes u |-> m^k * u + r. Composition
// applies the left factor first:
//
//   (k, r) * (k', r') = (k + k', m^k' * r + r')
//
// Named generators: a = (0, 1) (unit translation) and b = (-1, 0) (division
// by m), chosen so that the defining relation b a b^-1 = a^m holds under
// this composition order.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/ints.hpp"

namespace selfsim {

struct BaumslagSolitarGroup {
  struct Element {
    Int k;
    Rat r;
    bool operator==(const Element& o) const { return k == o.k && r == o.r; }
    bool operator!=(const Element& o) const { return !(*this == o); }
  };

  Int m;

  explicit BaumslagSolitarGroup(Int m_) : m(std::move(m_)) {
    if (m < 2) throw std::invalid_argument("BaumslagSolitarGroup: m must be >= 2");
  }

  // r must lie in Z[1/m]: its reduced denominator divides a power of m,
  // i.e. every prime factor of the denominator divides m.
  bool valid_translation(const Rat& r) const {
    Int den = rat_den(r);
    while (den != 1) {
      Int g = boost::multiprecision::gcd(den, m);
      if (g == 1) return false;
      while (den % g == 0) den /= g;
    }
    return true;
  }

  Element make(const Int& k, const Rat& r) const {
    if (!valid_translation(r)) throw std::invalid_argument("translation not in Z[1/m]");
    return {k, r};
  }

  Rat m_pow(const Int& e) const {
    if (e >= 0) return Rat(ipow(m, e));
    return Rat(1) / Rat(ipow(m, -e));
  }

  Element identity() const { return {0, Rat(0)}; }

  Element mul(const Element& a, const Element& b) const {
    return {a.k + b.k, m_pow(b.k) * a.r + b.r};
  }

  Element inv(const Element& a) const { return {-a.k, -a.r * m_pow(-a.k)}; }

  bool eq(const Element& a, const Element& b) const { return a == b; }

  bool is_identity(const Element& a) const { return a.k == 0 && a.r == 0; }

  std::string key(const Element& a) const {
    return "B(" + a.k.str() + "|" + rat_str(a.r) + ")";
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

  std::vector<std::pair<std::string, Element>> named_generators() const {
    Element a{0, Rat(1)}, b{-1, Rat(0)};
    return {{"a", a}, {"b", b}, {"a^-1", inv(a)}, {"b^-1", inv(b)}};
  }

  // The section representatives (1, i) used by the letter tables of the
  // degree-ell self-similar action.
  Element section_rep(const Int& i) const { return {1, Rat(i)}; }
};

}  // namespace selfsim
