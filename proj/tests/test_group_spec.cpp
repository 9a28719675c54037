// Tests for the finite-index self-embedding packages: the embedding must be a
// homomorphism landing in its declared image, the partial inverse must invert
// it, the transversal must hit every coset exactly once, and the breadth-first
// coset count must equal the declared index.

#include <catch2/catch_amalgamated.hpp>

#include "selfsim/rng.hpp"
#include "selfsim/specs.hpp"

using namespace selfsim;

namespace {

template <GroupFamily G, class RandomEl>
void check_spec(const GroupSpec<G>& spec, RandomEl&& random_element, int samples = 120) {
  const G& g = spec.group;
  SplitMix64 rng(0x57ec'0001);

  for (int it = 0; it < samples; ++it) {
    auto a = random_element(rng);
    auto b = random_element(rng);

    // Homomorphism, image membership, and exact inversion.
    CHECK(g.eq(spec.phi(g.mul(a, b)), g.mul(spec.phi(a), spec.phi(b))));
    auto fa = spec.phi(a);
    CHECK(spec.member(fa));
    auto back = spec.psi(fa);
    REQUIRE(back.has_value());
    CHECK(g.eq(*back, a));

    // Decomposition g = rep * phi(h), when a transversal is available.
    if (static_cast<int>(spec.transversal.size()) == spec.arity) {
      auto [j, h] = transversal_decompose(spec, a);
      REQUIRE(j >= 0);
      REQUIRE(j < spec.arity);
      auto rebuilt = g.mul(spec.transversal[static_cast<std::size_t>(j)], spec.phi(h));
      CHECK(g.eq(rebuilt, a));
    }
  }

  // Identity lands on the identity coset representative.
  CHECK(spec.member(g.identity()));
  CHECK(g.eq(spec.phi(g.identity()), g.identity()));
}

LamplighterGroup::Element random_ll(SplitMix64& rng) {
  LamplighterGroup g;
  std::vector<Int> lamps;
  for (long p = -4; p <= 4; ++p)
    if (rng.below(2)) lamps.push_back(p);
  return g.from_positions(rng.range(-3, 3), lamps);
}

HeisenbergGroup::Element random_heis(SplitMix64& rng) {
  return {rng.range(-8, 8), rng.range(-8, 8), rng.range(-8, 8)};
}

}  // namespace

TEST_CASE("lamplighter embedding package") {
  auto spec = make_lamplighter_spec();
  check_spec(spec, random_ll);
  CHECK(spec.arity == 2);
  CHECK(coset_count(spec) == 2);
}

TEST_CASE("bs embedding packages") {
  for (auto [m, ell] : {std::pair<long, long>{2, 3}, {3, 2}, {2, 5}}) {
    auto spec = make_bs_spec(Int(m), Int(ell));
    BaumslagSolitarGroup g{Int(m)};
    auto random_bs = [&g](SplitMix64& rng) {
      Int n = rng.range(-20, 20);
      Int d = rng.range(0, 2);
      return g.make(rng.range(-2, 2), Rat(n) / Rat(ipow(g.m, d)));
    };
    check_spec(spec, random_bs);
    CHECK(spec.arity == ell);
    CHECK(coset_count(spec) == ell);
  }
}

TEST_CASE("bs spec rejects tree degrees sharing a factor with the base") {
  CHECK_THROWS(make_bs_spec(2, 4));
  CHECK_THROWS(make_bs_spec(6, 3));
  CHECK_NOTHROW(make_bs_spec(6, 5));
}

TEST_CASE("affine embedding packages") {
  for (int d : {1, 2, 3}) {
    auto spec = make_affine_spec(d);
    AffineGroup g{d};
    auto random_aff = [&g, d](SplitMix64& rng) {
      IntMat m = mat_identity(d);
      for (int step = 0; step < 4; ++step) {
        int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        if (i == j) continue;
        Int c = rng.range(-2, 2);
        for (int k = 0; k < d; ++k)
          m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +=
              c * m[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      }
      IntVec v(static_cast<std::size_t>(d));
      for (auto& c : v) c = rng.range(-6, 6);
      return g.make(m, v);
    };
    check_spec(spec, random_aff);
    CHECK(spec.arity == (1 << d));
    CHECK(coset_count(spec) == (1 << d));
  }
}

TEST_CASE("unitriangular doubling embedding package") {
  auto spec = make_heis_doubling_spec();
  check_spec(spec, random_heis);
  CHECK(spec.arity == 16);
  CHECK(coset_count(spec) == 16);
}

TEST_CASE("first quaternary unitriangular embedding package") {
  auto spec = make_heis_ex1_spec();
  check_spec(spec, random_heis);
  CHECK(spec.arity == 4);
  CHECK(coset_count(spec) == 4);
}

TEST_CASE("second quaternary unitriangular embedding package") {
  auto spec = make_heis_ex2_spec();
  check_spec(spec, random_heis);  // transversal checks skip automatically
  CHECK(spec.arity == 4);
  CHECK(spec.transversal.empty());
  CHECK(coset_count(spec) == 4);
  HeisenbergGroup g;
  CHECK_THROWS(transversal_decompose(spec, g.identity()));
}

TEST_CASE("word evaluation over named generators") {
  auto spec = make_lamplighter_spec();
  const auto& g = spec.group;
  auto a = *spec.find_generator("a");
  auto b = *spec.find_generator("b");
  CHECK(g.eq(eval_word(spec, "a b^-1"), g.mul(a, g.inv(b))));
  CHECK(g.eq(eval_word(spec, "a^3"), g.mul(g.mul(a, a), a)));
  CHECK(g.is_identity(eval_word(spec, "")));
  CHECK_THROWS(eval_word(spec, "q"));

  auto bs = make_bs_spec(3, 2);
  const auto& h = bs.group;
  CHECK(h.eq(eval_word(bs, "b a b^-1"), group_pow(h, *bs.find_generator("a"), Int(3))));
}

TEST_CASE("group_pow matches naive repetition") {
  HeisenbergGroup g;
  SplitMix64 rng(0x57ec'0009);
  for (int it = 0; it < 60; ++it) {
    auto a = random_heis(rng);
    auto acc = g.identity();
    for (int k = 0; k <= 6; ++k) {
      CHECK(g.eq(group_pow(g, a, Int(k)), acc));
      CHECK(g.eq(group_pow(g, a, Int(-k)), g.inv(acc)));
      acc = g.mul(acc, a);
    }
  }
}
