// Tests for Cayley balls, letter adjacency, level tilings, and boundary
// statistics. Oracles: brute-force ball enumeration by word products, and
// plain word-by-word counting for the boundary fraction.

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "selfsim/nucleus.hpp"
#include "selfsim/specs.hpp"
#include "selfsim/tiling.hpp"

using namespace selfsim;

namespace {

HeisenbergGroup::Element H(long x, long y, long z) { return {x, y, z}; }

std::vector<HeisenbergGroup::Element> heis_pm_generators() {
  HeisenbergGroup g;
  return {H(1, 0, 0), g.inv(H(1, 0, 0)), H(0, 0, 1), g.inv(H(0, 0, 1))};
}

// Brute-force ball: all products of at most r generators, deduplicated by key.
template <GroupOpsLike Ops>
std::set<std::string> brute_ball_keys(const Ops& ops,
                                      const std::vector<std::pair<std::string, typename Ops::Element>>& gens,
                                      int r) {
  std::set<std::string> out{ops.key(ops.identity())};
  std::vector<typename Ops::Element> frontier{ops.identity()};
  for (int step = 0; step < r; ++step) {
    std::vector<typename Ops::Element> next;
    for (const auto& e : frontier)
      for (const auto& [name, s] : gens) {
        auto p = ops.mul(e, s);
        if (out.insert(ops.key(p)).second) next.push_back(p);
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("labeled graph basics") {
  LabeledGraph g;
  g.add_vertex("a");
  g.add_vertex("b", "interior");
  g.add_vertex("c");
  CHECK(g.vertex_count() == 3);
  g.add_edge("a", "b", "x");
  g.add_edge("b", "a", "y");  // same undirected edge, extra label
  g.add_edge("b", "c", "x");
  CHECK(g.edge_count() == 2);
  CHECK(g.adjacent("a", "b"));
  CHECK(g.edge_labels("a", "b") == std::set<std::string>{"x", "y"});
  CHECK(g.neighbors("b") == std::set<std::string>{"a", "c"});
  CHECK(g.connected());
  CHECK(g.component_count() == 1);
  g.add_vertex("d");
  CHECK_FALSE(g.connected());
  CHECK(g.component_count() == 2);
  CHECK_THROWS(g.add_edge("a", "zz", "l"));
  CHECK_NOTHROW(g.add_vertex("b", "interior"));   // same payload is idempotent
  CHECK_THROWS(g.add_vertex("b", "boundary"));    // conflicting payload is not
  g.set_metadata("kind", "test");
  CHECK(g.metadata().at("kind") == "test");
}

TEST_CASE("cayley balls match brute-force enumeration") {
  auto act = make_lamplighter_action();
  LamplighterGroup g;
  auto gens = g.named_generators();

  auto ball1 = cayley_ball(act, gens, 1);
  CHECK(ball1.elements.size() == 5);
  std::set<std::string> keys1;
  for (const auto& e : ball1.elements) keys1.insert(act.key(e));
  CHECK(keys1 == brute_ball_keys(act, gens, 1));

  auto ball3 = cayley_ball(act, gens, 3);
  std::set<std::string> keys3;
  for (const auto& e : ball3.elements) keys3.insert(act.key(e));
  CHECK(keys3 == brute_ball_keys(act, gens, 3));

  // Distances: identity at 0, generators at 1, and every element's distance
  // is 1 away from some neighbor closer to the identity.
  CHECK(ball3.dist[0] == 0);
  for (std::size_t i = 1; i < ball3.elements.size(); ++i) {
    std::size_t d = ball3.dist[i];
    CHECK(d >= 1);
    bool has_closer = false;
    for (const auto& [name, s] : gens) {
      auto p = act.mul(ball3.elements[i], s);
      auto it = ball3.index.find(act.key(p));
      if (it != ball3.index.end() && ball3.dist[static_cast<std::size_t>(it->second)] == d - 1)
        has_closer = true;
    }
    CHECK(has_closer);
  }
}

TEST_CASE("letter adjacency graphs of the two quaternary actions") {
  HeisenbergGroup g;
  std::vector<std::pair<std::string, HeisenbergGroup::Element>> els = {
      {"A", H(1, 0, 0)}, {"B", H(0, 1, 0)}};
  for (int which : {1, 2}) {
    auto act = which == 1 ? make_heis_ex1_action() : make_heis_ex2_action();
    auto graph = letter_adjacency_graph(act, els);
    CHECK(graph.vertex_count() == 4);
    CHECK(graph.edge_count() == 4);
    CHECK(graph.adjacent("0", "1"));
    CHECK(graph.adjacent("2", "3"));
    CHECK(graph.adjacent("0", "2"));
    CHECK(graph.adjacent("1", "3"));
    CHECK_FALSE(graph.adjacent("0", "3"));
    CHECK_FALSE(graph.adjacent("1", "2"));
    CHECK(graph.edge_labels("0", "1").count("A") == 1);
    CHECK(graph.edge_labels("2", "3").count("A") == 1);
    CHECK(graph.edge_labels("0", "2").count("B") == 1);
    CHECK(graph.edge_labels("1", "3").count("B") == 1);
    CHECK(graph.connected());
  }
}

TEST_CASE("level tilings carry full certificates") {
  Ray zero{{}, {0}};
  for (int which : {1, 2}) {
    auto act = which == 1 ? make_heis_ex1_action() : make_heis_ex2_action();
    auto rep = compute_nucleus(act, heis_pm_generators());
    REQUIRE(rep.contracting);
    for (int level : {1, 2}) {
      auto til = level_tiling(act, rep.nucleus, zero, level, 3);
      INFO("action " << which << " level " << level);
      CHECK(til.cert_sizes);
      CHECK(til.cert_connected);
      CHECK(til.cert_rho_injective);
      CHECK(til.cert_adjacency);
      CHECK(til.cert_images);
      // The radius-3 window of the second action is too small to contain a
      // complete level-2 tile away from the boundary; every other combination
      // certifies non-vacuously.
      if (which == 2 && level == 2) {
        CHECK(til.interior_tile_count == 0);
      } else {
        CHECK(til.interior_tile_count >= 1);
      }
      REQUIRE(til.certificate());

      // Every ball element is assigned to exactly one tile, and interior
      // tiles have exactly arity^level members.
      std::size_t assigned = 0;
      for (const auto& t : til.tiles) {
        assigned += t.members.size();
        if (t.interior) {
          CHECK(t.members.size() ==
                static_cast<std::size_t>(ipow(Int(act.arity()), Int(level))));
          CHECK(t.connected);
        }
      }
      CHECK(assigned == til.ball.elements.size());

      // Tile graph: one vertex per tile, payload consistent with interiority.
      CHECK(til.tile_graph.vertex_count() == til.tiles.size());
      for (const auto& t : til.tiles) {
        const auto& payload = til.tile_graph.vertices().at(t.tail_key);
        CHECK(payload == (t.interior ? "interior" : "boundary"));
      }
    }
  }

  // Widening the window restores a non-vacuous level-2 certificate for the
  // second action.
  {
    auto act = make_heis_ex2_action();
    auto rep = compute_nucleus(act, heis_pm_generators());
    REQUIRE(rep.contracting);
    auto til = level_tiling(act, rep.nucleus, zero, 2, 4);
    CHECK(til.interior_tile_count >= 1);
    CHECK(til.certificate());
    for (const auto& t : til.tiles) {
      if (!t.interior) continue;
      CHECK(t.members.size() == 16);
      CHECK(t.connected);
    }
  }
}

TEST_CASE("boundary fraction: enumeration equals the subset dynamic program") {
  for (int which : {1, 2}) {
    auto act = which == 1 ? make_heis_ex1_action() : make_heis_ex2_action();
    auto rep = compute_nucleus(act, heis_pm_generators());
    REQUIRE(rep.contracting);
    for (int n = 1; n <= 5; ++n) {
      auto fp = folner_profile(rep.nucleus, act.arity(), n);
      CHECK(fp.fraction == nontrivial_restriction_probability(rep.nucleus, static_cast<std::size_t>(n)));
      CHECK(fp.total_words == ipow(Int(act.arity()), Int(n)));
    }
  }
}

TEST_CASE("boundary fraction bound: frozen value and domination") {
  // (size-1) * (1 - t^-ell)^(floor(n/ell)) at size 25, t = 4, ell = 2, n = 4:
  // 24 * (15/16)^2 = 675/32.
  CHECK(boundary_fraction_bound(25, 4, 2, 4) == Rat(675, 32));
  CHECK(boundary_fraction_bound(25, 4, 2, 0) == Rat(24));

  auto act = make_heis_ex1_action();
  auto rep = compute_nucleus(act, heis_pm_generators());
  REQUIRE(rep.contracting);
  auto osr = open_set_condition(rep.nucleus);
  REQUIRE(osr.holds);
  for (std::size_t n = 1; n <= 5; ++n) {
    auto fp = folner_profile(rep.nucleus, act.arity(), n);
    CHECK(fp.fraction <= boundary_fraction_bound(static_cast<std::size_t>(rep.nucleus.size()),
                                                 act.arity(), osr.ell, n));
  }
  // The bound itself decays geometrically along multiples of ell.
  for (std::size_t n = 6; n <= 12; ++n) {
    Rat b1 = boundary_fraction_bound(25, 4, osr.ell, n);
    Rat b0 = boundary_fraction_bound(25, 4, osr.ell, n - osr.ell);
    CHECK(b1 < b0);
  }
}
