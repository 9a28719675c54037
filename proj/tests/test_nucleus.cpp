// Nucleus computations. The expected element lists below were derived by hand
// from the letter tables (restriction digraphs of products traced on paper)
// and frozen before the algorithm was implemented; the tests require exact
// agreement, state-table consistency against the action itself, and verified
// open-set witnesses.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "selfsim/nucleus.hpp"
#include "selfsim/specs.hpp"

using namespace selfsim;

namespace {

HeisenbergGroup::Element H(long x, long y, long z) { return {x, y, z}; }

std::vector<HeisenbergGroup::Element> heis_pm_generators() {
  HeisenbergGroup g;
  return {H(1, 0, 0), g.inv(H(1, 0, 0)), H(0, 0, 1), g.inv(H(0, 0, 1))};
}

std::set<std::string> keys_of(const std::vector<HeisenbergGroup::Element>& els) {
  HeisenbergGroup g;
  std::set<std::string> out;
  for (const auto& e : els) out.insert(g.key(e));
  return out;
}

// Expected nucleus of the first quaternary action: identity plus twelve
// elements and their inverses (inverse triples written out explicitly).
std::vector<HeisenbergGroup::Element> expected_nucleus_ex1() {
  return {
      H(0, 0, 0),
      H(1, 0, 0),  H(-1, 0, 0),   // outer generator
      H(0, 0, 1),  H(0, 0, -1),   // other outer generator
      H(1, 0, 1),  H(-1, 1, -1),  // C then A
      H(1, 1, 1),  H(-1, 0, -1),  // A then C
      H(1, -1, -1), H(-1, 0, 1),  // A then C^-1
      H(0, 1, 0),  H(0, -1, 0),   // central generator
      H(1, 1, 0),  H(-1, -1, 0),  // B then A
      H(0, 1, 1),  H(0, -1, -1),  // B then C
      H(-1, 1, 0), H(1, -1, 0),   // B then A^-1
      H(0, 1, -1), H(0, -1, 1),   // B then C^-1
      H(-1, 1, 1), H(1, -2, -1),  // B C A^-1
      H(1, 0, -1), H(-1, -1, 1),  // B A C^-1
  };
}

// Expected nucleus of the second quaternary action.
std::vector<HeisenbergGroup::Element> expected_nucleus_ex2() {
  return {
      H(0, 0, 0),
      H(1, 0, 0),  H(-1, 0, 0),
      H(0, 1, 0),  H(0, -1, 0),
      H(0, 0, 1),  H(0, 0, -1),
      H(1, 1, 0),  H(-1, -1, 0),
      H(0, 1, 1),  H(0, -1, -1),
      H(0, 1, -1), H(0, -1, 1),
      H(1, 0, -1), H(-1, -1, 1),
      H(1, 1, -1), H(-1, -2, 1),
  };
}

// Closure of the two outer generators and their inverses under restriction.
std::vector<HeisenbergGroup::Element> expected_closure_ex1() {
  return {
      H(0, 0, 0),
      H(1, 0, 0),  H(-1, 0, 0),
      H(0, 0, 1),  H(0, 0, -1),
      H(1, -1, 0), H(-1, 1, 0),
      H(0, 1, 0),  H(0, -1, 0),
      H(0, 1, 1),  H(0, -1, -1),
  };
}

template <TreeAction A>
void check_nucleus_tables(const A& act, const Nucleus<typename A::Element>& nuc) {
  // The state tables must reproduce the action letter by letter, and the set
  // must be closed under restriction and inverse with the identity present.
  REQUIRE(nuc.identity_index >= 0);
  CHECK(act.is_identity(nuc.elements[static_cast<std::size_t>(nuc.identity_index)]));
  for (int s = 0; s < nuc.size(); ++s) {
    CHECK(nuc.find(act.key(act.inv(nuc.elements[static_cast<std::size_t>(s)]))) >= 0);
    for (int l = 0; l < static_cast<int>(nuc.letter_image[static_cast<std::size_t>(s)].size());
         ++l) {
      auto [img, sec] = act.act_letter(nuc.elements[static_cast<std::size_t>(s)], l);
      CHECK(nuc.letter_image[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)] == img);
      CHECK(nuc.section[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)] ==
            nuc.find(act.key(sec)));
    }
  }
}

}  // namespace

TEST_CASE("first quaternary action: nucleus is the frozen 25-element set") {
  auto act = make_heis_ex1_action();
  auto rep = compute_nucleus(act, heis_pm_generators());
  REQUIRE(rep.contracting);
  CHECK(rep.nucleus.size() == 25);
  CHECK(keys_of(rep.nucleus.elements) == keys_of(expected_nucleus_ex1()));
  check_nucleus_tables(act, rep.nucleus);

  // Every non-generator nucleus element is justified by a witness pair whose
  // product absorbs into it.
  for (const auto& [idx, pair] : rep.witness_pair) {
    CHECK(idx >= 0);
    CHECK(idx < rep.nucleus.size());
    CHECK(pair.first < rep.nucleus.size());
    CHECK(pair.second < rep.nucleus.size());
  }
}

TEST_CASE("second quaternary action: nucleus is the frozen 17-element set") {
  auto act = make_heis_ex2_action();
  auto rep = compute_nucleus(act, heis_pm_generators());
  REQUIRE(rep.contracting);
  CHECK(rep.nucleus.size() == 17);
  CHECK(keys_of(rep.nucleus.elements) == keys_of(expected_nucleus_ex2()));
  check_nucleus_tables(act, rep.nucleus);
}

TEST_CASE("first quaternary action: restriction closure of the outer generators") {
  auto act = make_heis_ex1_action();
  auto closure = restriction_closure(act, heis_pm_generators());
  REQUIRE(closure.has_value());
  CHECK(closure->size() == 11);
  CHECK(keys_of(*closure) == keys_of(expected_closure_ex1()));
}

TEST_CASE("open set condition holds with verified witnesses") {
  HeisenbergGroup g;
  for (int which : {1, 2}) {
    auto act = which == 1 ? make_heis_ex1_action() : make_heis_ex2_action();
    auto rep = compute_nucleus(act, heis_pm_generators());
    REQUIRE(rep.contracting);
    auto osr = open_set_condition(rep.nucleus);
    REQUIRE(osr.holds);
    CHECK(osr.ell >= 1);
    for (int s = 0; s < rep.nucleus.size(); ++s) {
      REQUIRE(osr.witness[static_cast<std::size_t>(s)].has_value());
      const TreeWord& w = *osr.witness[static_cast<std::size_t>(s)];
      CHECK(w.size() <= osr.ell);
      // Verified against the action, not the table: the witness word must
      // restrict the state to the identity.
      auto r = restriction(act, rep.nucleus.elements[static_cast<std::size_t>(s)], w);
      CHECK(act.is_identity(r));
    }
  }
}

TEST_CASE("binary lamp action is not contracting and yields cycle evidence") {
  auto act = make_lamplighter_action();
  LamplighterGroup g;
  std::vector<LamplighterGroup::Element> gens;
  for (const auto& [name, e] : g.named_generators()) gens.push_back(e);

  NucleusOptions opt;
  opt.max_elements = 400;
  auto rep = compute_nucleus(act, gens, opt);
  REQUIRE_FALSE(rep.contracting);
  CHECK(rep.evidence.elements_reached >= 400);
  CHECK_FALSE(rep.evidence.reason.empty());
  REQUIRE_FALSE(rep.evidence.witness_cycle.empty());

  // The witness cycle must be a genuine restriction cycle of non-identity
  // elements: each member restricts to the next along some letter.
  const auto& cyc = rep.evidence.witness_cycle;
  for (std::size_t i = 0; i < cyc.size(); ++i) {
    CHECK_FALSE(act.is_identity(cyc[i]));
    const auto& next = cyc[(i + 1) % cyc.size()];
    bool linked = false;
    for (int l = 0; l < act.arity(); ++l) {
      auto [img, sec] = act.act_letter(cyc[i], l);
      if (act.key(sec) == act.key(next)) linked = true;
    }
    CHECK(linked);
  }
}

TEST_CASE("nucleus elements absorb products of nucleus pairs") {
  // Definitional spot-check on the first action: for random pairs (g, h) from
  // the nucleus, deep enough restrictions of g*h land back in the nucleus.
  auto act = make_heis_ex1_action();
  auto rep = compute_nucleus(act, heis_pm_generators());
  REQUIRE(rep.contracting);
  const auto& nuc = rep.nucleus;
  for (int x = 0; x < nuc.size(); x += 3)
    for (int y = 0; y < nuc.size(); y += 3) {
      auto p = act.mul(nuc.elements[static_cast<std::size_t>(x)],
                       nuc.elements[static_cast<std::size_t>(y)]);
      // All restrictions at depth 6 must lie in the nucleus.
      std::vector<HeisenbergGroup::Element> frontier{p};
      for (int depth = 0; depth < 6; ++depth) {
        std::vector<HeisenbergGroup::Element> next;
        std::set<std::string> seen;
        for (const auto& e : frontier)
          for (int l = 0; l < act.arity(); ++l) {
            auto [img, sec] = act.act_letter(e, l);
            if (seen.insert(act.key(sec)).second) next.push_back(sec);
          }
        frontier = std::move(next);
      }
      for (const auto& e : frontier) CHECK(nuc.find(act.key(e)) >= 0);
    }
}

TEST_CASE("subset walk probability agrees with explicit word enumeration") {
  // The aggregated subset dynamic program must equal the plain count over all
  // t^n words of the fraction keeping some non-identity state non-identity.
  auto act = make_heis_ex1_action();
  auto rep = compute_nucleus(act, heis_pm_generators());
  const auto& nuc = rep.nucleus;
  int t = act.arity();
  for (std::size_t n = 1; n <= 3; ++n) {
    Int alive = 0, total = ipow(Int(t), Int(n));
    std::vector<int> word(n, 0);
    while (true) {
      bool any = false;
      for (int s = 0; s < nuc.size() && !any; ++s) {
        if (s == nuc.identity_index) continue;
        int cur = s;
        for (int l : word) cur = nuc.section[static_cast<std::size_t>(cur)][static_cast<std::size_t>(l)];
        if (cur != nuc.identity_index) any = true;
      }
      if (any) ++alive;
      std::size_t pos = 0;
      while (pos < n && ++word[pos] == t) word[pos++] = 0;
      if (pos == n) break;
    }
    CHECK(nontrivial_restriction_probability(nuc, n) == Rat(alive) / Rat(total));
  }
}
