#pragma once

// The discrete Heisenberg group: integer triples (x, y, z) representing the
// unitriangular matrix with top row (1, x, y), middle (0, 1, z). The product
// convention matches the rest of the engine: composition accumulates the
// cross term on the left factor's x.
//
//   (x, y, z) * (x', y', z') = (x + x', y + y' + x * z', z + z')
//
// Named generators: A = (1,0,0), B = (0,1,0), C = (0,0,1); B generates the
// center and equals the commutator A^-1 C^-1 A C. Every element factors
// uniquely as A^x C^z B^(y - x z).

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/ints.hpp"

namespace selfsim {

struct HeisenbergGroup {
  struct Element {
    Int x, y, z;
    bool operator==(const Element& o) const { return x == o.x && y == o.y && z == o.z; }
    bool operator!=(const Element& o) const { return !(*this == o); }
  };

  Element identity() const { return {0, 0, 0}; }

  Element mul(const Element& a, const Element& b) const {
    return {a.x + b.x, a.y + b.y + a.x * b.z, a.z + b.z};
  }

  Element inv(const Element& a) const { return {-a.x, a.x * a.z - a.y, -a.z}; }

  bool eq(const Element& a, const Element& b) const { return a == b; }

  bool is_identity(const Element& a) const { return a.x == 0 && a.y == 0 && a.z == 0; }

  std::string key(const Element& a) const {
    return "H(" + a.x.str() + "," + a.y.str() + "," + a.z.str() + ")";
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

  Element commutator(const Element& a, const Element& b) const {
    return mul(mul(inv(a), inv(b)), mul(a, b));
  }

  // Inverse-closed named generating set, declaration order fixed.
  std::vector<std::pair<std::string, Element>> named_generators() const {
    return {
        {"A", {1, 0, 0}},  {"B", {0, 1, 0}},  {"C", {0, 0, 1}},
        {"A^-1", {-1, 0, 0}}, {"B^-1", {0, -1, 0}}, {"C^-1", {0, 0, -1}},
    };
  }

  // Unique factorization g = A^x C^z B^(y - x z), returned as (name, exponent)
  // pairs with zero exponents omitted.
  std::vector<std::pair<std::string, Int>> normal_form_word(const Element& g) const {
    std::vector<std::pair<std::string, Int>> w;
    if (g.x != 0) w.emplace_back("A", g.x);
    if (g.z != 0) w.emplace_back("C", g.z);
    Int k = g.y - g.x * g.z;
    if (k != 0) w.emplace_back("B", k);
    return w;
  }
};

}  // namespace selfsim
