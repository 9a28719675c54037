#pragma once

// Ready-made self-similar structures for the concrete families:
//
//  * binary lamplighter     — coset action of the t-multiplication embedding
//                             (also available recursion-defined for cross
//                             checks: a = (b, a)sigma, b = (b, a))
//  * BS(1, m) on ell letters — coset action of r |-> ell * r (gcd(m, ell) = 1)
//  * affine group, 2^d letters — coset action of v |-> 2v
//  * Heisenberg doubling spec — the index-16 embedding (2x, 4y, 2z)
//  * two quaternary Heisenberg actions given by explicit wreath tables
//    over the generators A, C (with B = [A, C] derived)

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/affine.hpp"
#include "selfsim/bs.hpp"
#include "selfsim/group_spec.hpp"
#include "selfsim/heisenberg.hpp"
#include "selfsim/ints.hpp"
#include "selfsim/lamplighter.hpp"
#include "selfsim/tree.hpp"

namespace selfsim {

// ---- lamplighter -----------------------------------------------------------

inline GroupSpec<LamplighterGroup> make_lamplighter_spec() {
  GroupSpec<LamplighterGroup> s{LamplighterGroup{}};
  const LamplighterGroup& g = s.group;
  s.family = "lamplighter";
  s.arity = 2;
  s.generators = g.named_generators();
  s.phi = [g](const LamplighterGroup::Element& e) { return g.lamp_mul_t(e); };
  s.member = [g](const LamplighterGroup::Element& e) { return g.lamp_in_tn(e, 1); };
  s.psi = [g](const LamplighterGroup::Element& e) -> std::optional<LamplighterGroup::Element> {
    if (!g.lamp_in_tn(e, 1)) return std::nullopt;
    return g.lamp_div_t(e);
  };
  s.transversal = {g.identity(), g.lamp_at_origin()};
  return s;
}

inline EndoAction<LamplighterGroup> make_lamplighter_action() {
  return EndoAction<LamplighterGroup>(make_lamplighter_spec());
}

// Independent recursion-defined route: a = (b, a) swapping the letters,
// b = (b, a) fixing them. Elements factor as b^shift times conjugated lamp
// toggles b^(-j-1) a b^j.
inline RecursionAction<LamplighterGroup> make_lamplighter_recursion() {
  LamplighterGroup g;
  auto a = g.from_positions(1, {0});
  auto b = g.from_positions(1, {});
  std::vector<RecursionAction<LamplighterGroup>::Seed> seeds;
  seeds.push_back({"a", a, {{1, 0}, {b, a}}});
  seeds.push_back({"b", b, {{0, 1}, {b, a}}});
  auto factorize = [g](const LamplighterGroup::Element& e) {
    std::vector<std::pair<std::string, Int>> w;
    if (e.shift != 0) w.emplace_back("b", e.shift);
    for (const Int& j : g.positions(e)) {
      w.emplace_back("b", -j - 1);
      w.emplace_back("a", 1);
      if (j != 0) w.emplace_back("b", j);
    }
    return w;
  };
  return RecursionAction<LamplighterGroup>(g, 2, std::move(seeds), std::move(factorize));
}

// ---- BS(1, m) ---------------------------------------------------------------

inline GroupSpec<BaumslagSolitarGroup> make_bs_spec(const Int& m, const Int& ell) {
  if (boost::multiprecision::gcd(m, ell) != 1)
    throw std::invalid_argument("make_bs_spec: m and ell must be coprime");
  if (ell < 2) throw std::invalid_argument("make_bs_spec: ell must be >= 2");
  GroupSpec<BaumslagSolitarGroup> s{BaumslagSolitarGroup{m}};
  const BaumslagSolitarGroup& g = s.group;
  s.family = "bs";
  s.arity = static_cast<int>(to_long(ell));
  s.generators = g.named_generators();
  Rat lq{ell};
  // r belongs to ell * Z[1/m] iff the (m-power-free) numerator of r is
  // divisible by ell, since denominators are coprime to ell.
  auto member = [g, lq](const BaumslagSolitarGroup::Element& e) {
    return g.valid_translation(e.r / lq);
  };
  s.phi = [g, lq](const BaumslagSolitarGroup::Element& e) {
    return BaumslagSolitarGroup::Element{e.k, e.r * lq};
  };
  s.member = member;
  s.psi = [g, lq, member](const BaumslagSolitarGroup::Element& e)
      -> std::optional<BaumslagSolitarGroup::Element> {
    if (!member(e)) return std::nullopt;
    return BaumslagSolitarGroup::Element{e.k, e.r / lq};
  };
  for (Int j = 0; j < ell; ++j) s.transversal.push_back({0, Rat(j)});
  return s;
}

inline EndoAction<BaumslagSolitarGroup> make_bs_action(const Int& m, const Int& ell) {
  return EndoAction<BaumslagSolitarGroup>(make_bs_spec(m, ell));
}

// ---- affine group -----------------------------------------------------------

inline GroupSpec<AffineGroup> make_affine_spec(int d) {
  if (d < 1 || d > 16) throw std::invalid_argument("make_affine_spec: dimension out of range");
  GroupSpec<AffineGroup> s{AffineGroup{d}};
  const AffineGroup& g = s.group;
  s.family = "affine";
  s.arity = 1 << d;
  s.generators = g.named_generators();
  s.phi = [](const AffineGroup::Element& e) {
    AffineGroup::Element r = e;
    for (auto& c : r.v) c *= 2;
    return r;
  };
  s.member = [](const AffineGroup::Element& e) {
    for (const auto& c : e.v)
      if (imod(c, 2) != 0) return false;
    return true;
  };
  s.psi = [](const AffineGroup::Element& e) -> std::optional<AffineGroup::Element> {
    AffineGroup::Element r = e;
    for (auto& c : r.v) {
      if (imod(c, 2) != 0) return std::nullopt;
      c /= 2;
    }
    return r;
  };
  for (int i = 0; i < (1 << d); ++i) {
    IntVec v(static_cast<std::size_t>(d), 0);
    for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(j)] = (i >> j) & 1;
    s.transversal.push_back({mat_identity(d), std::move(v)});
  }
  return s;
}

inline EndoAction<AffineGroup> make_affine_action(int d) {
  return EndoAction<AffineGroup>(make_affine_spec(d));
}

// ---- Heisenberg -------------------------------------------------------------

// Index-16 doubling embedding (x, y, z) |-> (2x, 4y, 2z).
inline GroupSpec<HeisenbergGroup> make_heis_doubling_spec() {
  GroupSpec<HeisenbergGroup> s{HeisenbergGroup{}};
  const HeisenbergGroup& g = s.group;
  s.family = "heis-2-4-2";
  s.arity = 16;
  s.generators = g.named_generators();
  s.phi = [](const HeisenbergGroup::Element& e) {
    return HeisenbergGroup::Element{2 * e.x, 4 * e.y, 2 * e.z};
  };
  s.member = [](const HeisenbergGroup::Element& e) {
    return imod(e.x, 2) == 0 && imod(e.y, 4) == 0 && imod(e.z, 2) == 0;
  };
  s.psi = [](const HeisenbergGroup::Element& e) -> std::optional<HeisenbergGroup::Element> {
    if (imod(e.x, 2) != 0 || imod(e.y, 4) != 0 || imod(e.z, 2) != 0) return std::nullopt;
    return HeisenbergGroup::Element{e.x / 2, e.y / 4, e.z / 2};
  };
  for (Int x = 0; x < 2; ++x)
    for (Int y = 0; y < 4; ++y)
      for (Int z = 0; z < 2; ++z) s.transversal.push_back({x, y, z});
  return s;
}

// Embedding behind the first quaternary action: (x,y,z) |-> (2z, -2y+2xz, x);
// image = {first two coordinates even}, index 4.
inline GroupSpec<HeisenbergGroup> make_heis_ex1_spec() {
  GroupSpec<HeisenbergGroup> s{HeisenbergGroup{}};
  const HeisenbergGroup& g = s.group;
  s.family = "heis-ex1";
  s.arity = 4;
  s.generators = g.named_generators();
  s.phi = [](const HeisenbergGroup::Element& e) {
    return HeisenbergGroup::Element{2 * e.z, -2 * e.y + 2 * e.x * e.z, e.x};
  };
  s.member = [](const HeisenbergGroup::Element& e) {
    return imod(e.x, 2) == 0 && imod(e.y, 2) == 0;
  };
  s.psi = [](const HeisenbergGroup::Element& e) -> std::optional<HeisenbergGroup::Element> {
    if (imod(e.x, 2) != 0 || imod(e.y, 2) != 0) return std::nullopt;
    return HeisenbergGroup::Element{e.z, (e.x * e.z - e.y) / 2, e.x / 2};
  };
  // Transversal found by exploratory search; hits the four cosets once.
  auto A = HeisenbergGroup::Element{1, 0, 0};
  auto Binv = HeisenbergGroup::Element{0, -1, 0};
  auto CACi = HeisenbergGroup::Element{1, -1, 0};
  s.transversal = {g.identity(), A, Binv, CACi};
  return s;
}

// Embedding behind the second quaternary action (Gelbrich-type lattice):
// (x,y,z) |-> (x+z, 2y - xz + (z^2 - z - x^2 + x)/2, z - x), index 4.
inline GroupSpec<HeisenbergGroup> make_heis_ex2_spec() {
  GroupSpec<HeisenbergGroup> s{HeisenbergGroup{}};
  s.family = "heis-ex2";
  s.arity = 4;
  s.generators = s.group.named_generators();
  auto q = [](const Int& x, const Int& z) { return (z * z - z - x * x + x) / 2; };
  s.phi = [q](const HeisenbergGroup::Element& e) {
    return HeisenbergGroup::Element{e.x + e.z, 2 * e.y - e.x * e.z + q(e.x, e.z), e.z - e.x};
  };
  auto split = [q](const HeisenbergGroup::Element& e)
      -> std::optional<HeisenbergGroup::Element> {
    if (imod(e.x - e.z, 2) != 0) return std::nullopt;
    Int x = (e.x - e.z) / 2, z = (e.x + e.z) / 2;
    Int ynum = e.y + x * z - q(x, z);
    if (imod(ynum, 2) != 0) return std::nullopt;
    return HeisenbergGroup::Element{x, ynum / 2, z};
  };
  s.member = [split](const HeisenbergGroup::Element& e) { return split(e).has_value(); };
  s.psi = split;
  // No length-<=4 transversal reproduces the printed recursion for this
  // action (see transversal_search); the coset route is not provided.
  s.transversal = {};
  return s;
}

namespace detail {

inline RecursionAction<HeisenbergGroup>::Factorizer heis_factorizer() {
  HeisenbergGroup g;
  return [g](const HeisenbergGroup::Element& e) {
    std::vector<std::pair<std::string, Int>> w;
    for (const auto& [name, exp] : g.normal_form_word(e)) w.emplace_back(name, exp);
    return w;
  };
}

}  // namespace detail

// First quaternary Heisenberg action: A = (1,C,1,C)(01)(23), C = (A,CAC^-1,A,A)(13).
inline RecursionAction<HeisenbergGroup> make_heis_ex1_action() {
  HeisenbergGroup g;
  using El = HeisenbergGroup::Element;
  El id = g.identity(), A{1, 0, 0}, B{0, 1, 0}, C{0, 0, 1};
  El CACi{1, -1, 0};  // C A C^-1
  std::vector<RecursionAction<HeisenbergGroup>::Seed> seeds;
  seeds.push_back({"A", A, {{1, 0, 3, 2}, {id, C, id, C}}});
  seeds.push_back({"C", C, {{0, 3, 2, 1}, {A, CACi, A, A}}});
  RecursionAction<HeisenbergGroup> act(g, 4, std::move(seeds), detail::heis_factorizer());
  act.derive("B", B, "A^-1 C^-1 A C");
  return act;
}

// Second quaternary Heisenberg action: A = (1,C^-1 A,1,C^-1 A)(01)(23),
// C = (C,A,C,AB)(0123).
inline RecursionAction<HeisenbergGroup> make_heis_ex2_action() {
  HeisenbergGroup g;
  using El = HeisenbergGroup::Element;
  El id = g.identity(), A{1, 0, 0}, B{0, 1, 0}, C{0, 0, 1};
  El CiA{1, 0, -1};  // C^-1 A
  El AB{1, 1, 0};    // A B
  std::vector<RecursionAction<HeisenbergGroup>::Seed> seeds;
  seeds.push_back({"A", A, {{1, 0, 3, 2}, {id, CiA, id, CiA}}});
  seeds.push_back({"C", C, {{1, 2, 3, 0}, {C, A, C, AB}}});
  RecursionAction<HeisenbergGroup> act(g, 4, std::move(seeds), detail::heis_factorizer());
  act.derive("B", B, "A^-1 C^-1 A C");
  return act;
}

}  // namespace selfsim
