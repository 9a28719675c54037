#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/monotile.hpp"
#include "selfsim/specs.hpp"

using namespace selfsim;

namespace {

std::vector<std::pair<std::string, LamplighterGroup::Element>> ll_lift_gens(
    const LamplighterGroup& G) {
  auto gens = G.named_generators();
  return {gens[0], gens[1]};  // positive generators only
}

}  // namespace

TEST_CASE("lamp group levels lift to coset monotiles") {
  LamplighterGroup G;
  auto ball_gens = G.named_generators();
  auto lift = ll_lift_gens(G);

  SECTION("level one is the identity and one odd representative") {
    auto rep = monotile_lift(G, lift, ball_gens, lamplighter_level(G, 1), 6);
    REQUIRE(rep.coset_count == 2);
    CHECK(G.is_identity(rep.transversal[0]));
    CHECK(G.eq(rep.transversal[1], lift[0].second));  // BFS reaches `a` first
    CHECK(rep.keys_match_membership);
    CHECK(rep.tree_connected);
    CHECK(rep.partition_ok);
    CHECK(rep.ball_checked > 100);
    CHECK(rep.ok());
    CHECK(rep.schreier.vertex_count() == 2);
    CHECK(rep.schreier.connected());
  }

  SECTION("levels two and three have the expected coset counts") {
    auto rep2 = monotile_lift(G, lift, ball_gens, lamplighter_level(G, 2), 6);
    CHECK(rep2.coset_count == 4);
    CHECK(rep2.ok());
    auto rep3 = monotile_lift(G, lift, ball_gens, lamplighter_level(G, 3), 4);
    CHECK(rep3.coset_count == 8);
    CHECK(rep3.ok());
    CHECK(rep3.schreier.connected());
  }
}

TEST_CASE("Z[1/2] base-3 levels lift to coset monotiles") {
  BaumslagSolitarGroup G{Int(2)};
  auto named = G.named_generators();
  std::vector<std::pair<std::string, BaumslagSolitarGroup::Element>> lift{named[0]};
  auto level1 = bs_level(G, Int(3), 1);

  SECTION("level one transversal is 1, a, a^2") {
    auto rep = monotile_lift(G, lift, named, level1, 6);
    REQUIRE(rep.coset_count == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(rep.transversal[static_cast<std::size_t>(i)].k == 0);
      CHECK(rep.transversal[static_cast<std::size_t>(i)].r == Rat(i));
      CHECK(rep.keys[static_cast<std::size_t>(i)] == std::to_string(i));
    }
    CHECK(rep.ok());
    CHECK(rep.schreier.connected());
  }

  SECTION("level two splits into nine cosets") {
    auto rep = monotile_lift(G, lift, named, bs_level(G, Int(3), 2), 4);
    CHECK(rep.coset_count == 9);
    CHECK(rep.ok());
  }

  SECTION("the scale must be coprime to the slope") {
    CHECK_THROWS_AS(bs_level(G, Int(2), 1), std::invalid_argument);
  }
}

TEST_CASE("integer levels give consecutive residue transversals") {
  AffineGroup G{1};
  auto s = G.translation({Int(1)});
  std::vector<std::pair<std::string, AffineGroup::Element>> lift{{"s", s}};
  std::vector<std::pair<std::string, AffineGroup::Element>> ball{{"s", s}, {"s^-1", G.inv(s)}};

  for (long n = 1; n <= 4; ++n) {
    auto rep = monotile_lift(G, lift, ball, integer_level(G, n), 6);
    std::size_t expect = std::size_t{1} << static_cast<std::size_t>(n);
    REQUIRE(rep.coset_count == expect);
    for (std::size_t i = 0; i < expect; ++i) {
      CHECK(rep.transversal[i].v[0] == Int(static_cast<long>(i)));
      CHECK(rep.keys[i] == std::to_string(i));
    }
    CHECK(rep.ok());
    CHECK(rep.schreier.connected());
  }

  SECTION("dimension validation") {
    AffineGroup plane{2};
    CHECK_THROWS_AS(integer_level(plane, 1), std::invalid_argument);
  }
}

TEST_CASE("monotile cross-validation catches defective levels") {
  AffineGroup G{1};
  auto s = G.translation({Int(1)});
  std::vector<std::pair<std::string, AffineGroup::Element>> lift{{"s", s}};
  std::vector<std::pair<std::string, AffineGroup::Element>> ball{{"s", s}, {"s^-1", G.inv(s)}};

  SECTION("identity outside the level is rejected") {
    SubgroupLevel<AffineGroup::Element> lvl;
    lvl.name = "empty";
    lvl.member = [](const AffineGroup::Element&) { return false; };
    lvl.coset_key = [&G](const AffineGroup::Element& g) { return G.key(g); };
    CHECK_THROWS_AS(monotile_lift(G, lift, ball, lvl, 2), std::invalid_argument);
  }

  SECTION("a key finer than the cosets exhausts the budget") {
    auto lvl = integer_level(G, 1);
    lvl.coset_key = [&G](const AffineGroup::Element& g) { return G.key(g); };
    CHECK_THROWS_AS(monotile_lift(G, lift, ball, lvl, 2, 8), std::runtime_error);
  }

  SECTION("a key coarser than the cosets fails the partition check") {
    auto lvl = integer_level(G, 1);
    lvl.coset_key = [](const AffineGroup::Element&) { return std::string("all"); };
    auto rep = monotile_lift(G, lift, ball, lvl, 2);
    CHECK(rep.coset_count == 1);
    CHECK_FALSE(rep.partition_ok);
    CHECK_FALSE(rep.ok());
  }

  SECTION("a key that splits cosets fails the membership cross-check") {
    auto lvl = integer_level(G, 1);  // subgroup 2Z
    lvl.coset_key = [](const AffineGroup::Element& g) { return imod(g.v[0], Int(4)).str(); };
    auto rep = monotile_lift(G, lift, ball, lvl, 2);
    CHECK(rep.coset_count == 4);
    CHECK_FALSE(rep.keys_match_membership);
    CHECK_FALSE(rep.ok());
  }
}
