#pragma once

// Exact arithmetic used across the engine: arbitrary-precision integers and
// rationals. All group arithmetic goes through these types; no silent
// truncation to machine words is allowed anywhere in the engine.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace selfsim {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// b^e for e >= 0.
inline Int ipow(const Int& b, const Int& e) {
  if (e < 0) throw std::invalid_argument("ipow: negative exponent");
  Int r = 1, base = b, k = e;
  while (k > 0) {
    if ((k & 1) != 0) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

// Floor-division remainder in [0, m) for m > 0.
inline Int imod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Modular inverse of a mod m (gcd(a, m) must be 1).
inline Int inv_mod(const Int& a, const Int& m) {
  Int r0 = m, r1 = imod(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    Int s2 = s0 - q * s1;
    r0 = r1; r1 = r2; s0 = s1; s1 = s2;
  }
  if (r0 != 1) throw std::invalid_argument("inv_mod: element not invertible");
  return imod(s0, m);
}

// Multiplicative order of a modulo m (m > 1, gcd(a, m) = 1).
inline Int mult_order(const Int& a, const Int& m) {
  if (m <= 1) throw std::invalid_argument("mult_order: modulus must exceed 1");
  Int x = imod(a, m), acc = x, k = 1;
  while (acc != 1) {
    acc = imod(acc * x, m);
    ++k;
    if (k > m) throw std::logic_error("mult_order: no order found (not a unit)");
  }
  return k;
}

inline long to_long(const Int& v) {
  return static_cast<long>(v);
}

inline std::string rat_str(const Rat& r) {
  Int n = rat_num(r), d = rat_den(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

}  // namespace selfsim
