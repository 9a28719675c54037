// Tests for the rank-three unitriangular group. Oracle: represent (x, y, z)
// as the 3x3 upper unitriangular integer matrix
//
//   [ 1 x y ]
//   [ 0 1 z ]
//   [ 0 0 1 ]
//
// and multiply matrices directly; the group law must match entrywise.

#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "selfsim/heisenberg.hpp"
#include "selfsim/rng.hpp"

using namespace selfsim;

namespace {

using Mat3 = std::array<std::array<Int, 3>, 3>;

Mat3 to_mat(const HeisenbergGroup::Element& e) {
  return {{{1, e.x, e.y}, {0, 1, e.z}, {0, 0, 1}}};
}

Mat3 mat_mul3(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Int s = 0;
      for (int k = 0; k < 3; ++k) s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                                        b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
    }
  return r;
}

HeisenbergGroup::Element random_element(SplitMix64& rng, long bound) {
  return {rng.range(-bound, bound), rng.range(-bound, bound), rng.range(-bound, bound)};
}

}  // namespace

TEST_CASE("heisenberg multiplication matches the matrix oracle") {
  HeisenbergGroup g;
  SplitMix64 rng(0x4e15'0001);
  for (int it = 0; it < 400; ++it) {
    auto a = random_element(rng, 20);
    auto b = random_element(rng, 20);
    CHECK(to_mat(g.mul(a, b)) == mat_mul3(to_mat(a), to_mat(b)));
  }
}

TEST_CASE("heisenberg inverses and identity") {
  HeisenbergGroup g;
  SplitMix64 rng(0x4e15'0002);
  for (int it = 0; it < 200; ++it) {
    auto a = random_element(rng, 20);
    CHECK(g.is_identity(g.mul(a, g.inv(a))));
    CHECK(g.is_identity(g.mul(g.inv(a), a)));
  }
  CHECK(g.is_identity(g.identity()));
}

TEST_CASE("generator relations") {
  HeisenbergGroup g;
  HeisenbergGroup::Element A{1, 0, 0}, B{0, 1, 0}, C{0, 0, 1};
  // B is the commutator of the two outer generators.
  CHECK(g.eq(g.commutator(A, C), B));
  // B is central: commutes with A and C.
  CHECK(g.eq(g.mul(A, B), g.mul(B, A)));
  CHECK(g.eq(g.mul(C, B), g.mul(B, C)));
  // A and C do not commute.
  CHECK_FALSE(g.eq(g.mul(A, C), g.mul(C, A)));
}

TEST_CASE("powers match repeated multiplication") {
  HeisenbergGroup g;
  SplitMix64 rng(0x4e15'0003);
  for (int it = 0; it < 50; ++it) {
    auto a = random_element(rng, 5);
    auto acc = g.identity();
    for (int k = 0; k <= 7; ++k) {
      CHECK(g.eq(g.pow(a, k), acc));
      CHECK(g.eq(g.pow(a, -k), g.inv(acc)));
      acc = g.mul(acc, a);
    }
  }
}

TEST_CASE("normal form words evaluate back to the element") {
  HeisenbergGroup g;
  auto gens = g.named_generators();
  auto find = [&](const std::string& n) {
    for (const auto& [name, el] : gens)
      if (name == n) return el;
    throw std::logic_error("missing generator " + n);
  };
  SplitMix64 rng(0x4e15'0004);
  for (int it = 0; it < 100; ++it) {
    auto a = random_element(rng, 6);
    auto word = g.normal_form_word(a);
    auto acc = g.identity();
    for (const auto& [name, exp] : word) {
      auto base = find(name);
      for (Int i = 0; i < (exp < 0 ? Int(-exp) : exp); ++i)
        acc = g.mul(acc, exp < 0 ? g.inv(base) : base);
    }
    CHECK(g.eq(acc, a));
  }
}

TEST_CASE("heisenberg keys separate elements") {
  HeisenbergGroup g;
  CHECK(g.key({1, 0, 0}) != g.key({0, 1, 0}));
  CHECK(g.key({1, 2, 3}) == g.key({1, 2, 3}));
  CHECK(g.key({-1, 0, 1}) != g.key({1, 0, -1}));
}
