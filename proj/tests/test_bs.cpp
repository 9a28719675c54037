// Tests for the solvable affine-line groups G(m) of maps u |-> m^k u + r with
// r in Z[1/m]. Oracle: the faithful 2x2 matrix representation acting on row
// vectors (u, 1),
//
//   (k, r)  ~  [ m^k  0 ]
//              [  r   1 ]
//
// so the group law must match plain matrix multiplication over exact
// rationals, and the action on sample points must satisfy the right-action
// axiom.

#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "selfsim/bs.hpp"
#include "selfsim/rng.hpp"

using namespace selfsim;

namespace {

using Mat2 = std::array<std::array<Rat, 2>, 2>;

Mat2 to_mat(const BaumslagSolitarGroup& g, const BaumslagSolitarGroup::Element& e) {
  return {{{g.m_pow(e.k), Rat(0)}, {e.r, Rat(1)}}};
}

Mat2 mat_mul2(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Rat s = 0;
      for (int k = 0; k < 2; ++k) s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                                        b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
    }
  return r;
}

Rat apply(const BaumslagSolitarGroup& g, const BaumslagSolitarGroup::Element& e, const Rat& u) {
  return g.m_pow(e.k) * u + e.r;
}

BaumslagSolitarGroup::Element random_element(const BaumslagSolitarGroup& g, SplitMix64& rng) {
  Int k = rng.range(-3, 3);
  // r = n / m^d with small numerator
  Int n = rng.range(-40, 40);
  Int d = rng.range(0, 3);
  Rat r = Rat(n) / Rat(ipow(g.m, d));
  return g.make(k, r);
}

}  // namespace

TEST_CASE("bs multiplication matches the matrix oracle") {
  for (long m : {2L, 3L, 5L}) {
    BaumslagSolitarGroup g{Int(m)};
    SplitMix64 rng(0xb500'0000 + static_cast<std::uint64_t>(m));
    for (int it = 0; it < 300; ++it) {
      auto a = random_element(g, rng);
      auto b = random_element(g, rng);
      CHECK(to_mat(g, g.mul(a, b)) == mat_mul2(to_mat(g, a), to_mat(g, b)));
    }
  }
}

TEST_CASE("bs right action axiom on sample points") {
  BaumslagSolitarGroup g{2};
  SplitMix64 rng(0xb500'1001);
  for (int it = 0; it < 200; ++it) {
    auto a = random_element(g, rng);
    auto b = random_element(g, rng);
    Rat u = Rat(rng.range(-30, 30)) / Rat(rng.range(1, 7));
    CHECK(apply(g, g.mul(a, b), u) == apply(g, b, apply(g, a, u)));
  }
}

TEST_CASE("bs frozen inverse") {
  BaumslagSolitarGroup g{2};
  auto e = g.make(1, Rat(1, 2));
  auto i = g.inv(e);
  CHECK(i.k == -1);
  CHECK(i.r == Rat(-1, 4));
  CHECK(g.is_identity(g.mul(e, i)));
  CHECK(g.is_identity(g.mul(i, e)));
}

TEST_CASE("bs defining relation via generator words") {
  for (long m : {2L, 3L, 5L}) {
    BaumslagSolitarGroup g{Int(m)};
    auto gens = g.named_generators();
    auto a = gens[0].second;  // translation by one
    auto b = gens[1].second;  // scaling generator
    // b a b^-1 = a^m
    auto lhs = g.mul(g.mul(b, a), g.inv(b));
    auto am = g.pow(a, Int(m));
    CHECK(g.eq(lhs, am));
  }
}

TEST_CASE("bs translation validity") {
  BaumslagSolitarGroup g{2};
  CHECK_THROWS(g.make(0, Rat(1, 3)));       // denominator not a power of m
  CHECK_NOTHROW(g.make(0, Rat(5, 8)));      // 8 = 2^3
  CHECK_NOTHROW(g.make(-2, Rat(6, 4)));     // reduces to 3/2
  BaumslagSolitarGroup g6{6};
  CHECK_NOTHROW(g6.make(0, Rat(1, 9)));     // 9 divides 6^2: in Z[1/6]
  CHECK_NOTHROW(g6.make(0, Rat(1, 8)));     // 8 divides 6^3: in Z[1/6]
  CHECK_THROWS(g6.make(0, Rat(1, 5)));
}

TEST_CASE("bs group axioms") {
  BaumslagSolitarGroup g{3};
  SplitMix64 rng(0xb500'2002);
  for (int it = 0; it < 200; ++it) {
    auto a = random_element(g, rng);
    auto b = random_element(g, rng);
    auto c = random_element(g, rng);
    CHECK(g.eq(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c))));
    CHECK(g.is_identity(g.mul(a, g.inv(a))));
  }
}
