#pragma once

// Subgroup chains inside the semidirect-product families, together with the
// explicit constructions that certify non-trivial chain intersections:
//
//   * ChainDesc        -- per-family package: level embeddings phi_i, level
//                         membership, vertex representatives, the closed-form
//                         composite embedding, and stabilizer coset tests
//   * ll_periodic_witness  -- lamp group element fixing a periodic binary ray,
//                             with a polynomial divisibility certificate
//   * bs_periodic_witness  -- affine transformation of Z[1/m] fixing a
//                             periodic l-adic ray
//   * affine_fixing_matrix / unipotent_witness -- unimodular unipotent
//                             matrices fixing prescribed vectors and dyadic
//                             rays
//   * ray_stabilizer_search -- independent brute-force search for ray
//                             stabilizers
//   * dl_isomorphism_check  -- the index-two self-embedding of the lamp group
//                             whose image is marked-isomorphic to the whole
//                             group
//
// Convention: phi_i(alpha, h) = (alpha, phiH(h) + y_i - alpha(y_i)), where
// phiH is the grading embedding of the translation part (multiplication by
// t, by l, or by 2) and y_i is the level-one representative of letter i.
// Composites nest outermost-first: the vertex i1 i2 ... in corresponds to
// phi_{i1} o phi_{i2} o ... o phi_{in}.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/affine.hpp"
#include "selfsim/bs.hpp"
#include "selfsim/gf2.hpp"
#include "selfsim/graph.hpp"
#include "selfsim/group_spec.hpp"
#include "selfsim/heisenberg.hpp"
#include "selfsim/ints.hpp"
#include "selfsim/lamplighter.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/tiling.hpp"
#include "selfsim/tree.hpp"

namespace selfsim {

// ---------------------------------------------------------------------------
// Chain descriptors
// ---------------------------------------------------------------------------

template <GroupFamily G>
struct ChainDesc {
  using El = typename G::Element;

  ChainDesc() = default;
  explicit ChainDesc(G g) : group(std::move(g)) {}

  G group;
  std::string family;
  int arity = 0;
  std::function<El(int, const El&)> phi_i;
  std::function<bool(const El&, long)> in_level;       // translation part in H_n
  std::function<El(const TreeWord&)> vertex_rep;       // pure translation x_w
  std::function<El(const TreeWord&, const El&)> phi_word_direct;
  std::function<bool(const El&, const TreeWord&)> stab_coset_member;
};

template <GroupFamily G>
typename G::Element phi_compose(const ChainDesc<G>& chain, const TreeWord& w,
                                const typename G::Element& g) {
  typename G::Element acc = g;
  for (std::size_t idx = w.size(); idx-- > 0;) acc = chain.phi_i(w[idx], acc);
  return acc;
}

inline ChainDesc<LamplighterGroup> make_lamplighter_chain() {
  ChainDesc<LamplighterGroup> c;
  c.group = LamplighterGroup{};
  c.family = "lamplighter";
  c.arity = 2;
  LamplighterGroup G = c.group;

  // Positions of x_w = sum over {j : w_j = 1} of t^j, written in the u basis.
  auto vertex_positions = [G](const TreeWord& w) {
    GF2Poly x = GF2Poly::zero();
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] != 0 && w[j] != 1) throw std::invalid_argument("lamplighter chain: bad letter");
      if (w[j] == 1) x = x + GF2Poly::pow_one_plus_x(Int(static_cast<long>(j)));
    }
    std::vector<Int> pos;
    for (long e : x.exponents()) pos.push_back(Int(e));
    return pos;
  };

  c.phi_i = [G](int i, const LamplighterGroup::Element& g) {
    if (i != 0 && i != 1) throw std::invalid_argument("lamplighter chain: bad letter");
    LamplighterGroup::Element out = G.lamp_mul_t(g);
    if (i == 1) {
      // add y_1 * (1 + u^m) = positions {0, m} (cancels when m = 0)
      std::vector<Int> pos = G.positions(out);
      pos.push_back(Int(0));
      pos.push_back(g.shift);
      out = G.from_positions(g.shift, pos);
    }
    return out;
  };

  c.in_level = [G](const LamplighterGroup::Element& g, long n) {
    return G.lamp_in_tn(g, n);
  };

  c.vertex_rep = [G, vertex_positions](const TreeWord& w) {
    return G.from_positions(Int(0), vertex_positions(w));
  };

  c.phi_word_direct = [G, vertex_positions](const TreeWord& w, const LamplighterGroup::Element& g) {
    LamplighterGroup::Element out = g;
    for (std::size_t j = 0; j < w.size(); ++j) out = G.lamp_mul_t(out);
    // add x_w * (1 + u^m): positions of x_w plus the same shifted by m
    std::vector<Int> pos = G.positions(out);
    for (const Int& p : vertex_positions(w)) {
      pos.push_back(p);
      pos.push_back(p + g.shift);
    }
    return G.from_positions(g.shift, pos);
  };

  c.stab_coset_member = [G, vertex_positions](const LamplighterGroup::Element& g, const TreeWord& w) {
    // h - x_w + alpha(x_w) in t^n H  (characteristic two: all signs are +)
    std::vector<Int> pos = G.positions(g);
    for (const Int& p : vertex_positions(w)) {
      pos.push_back(p);
      pos.push_back(p + g.shift);
    }
    LamplighterGroup::Element probe = G.from_positions(Int(0), pos);
    return G.lamp_in_tn(probe, static_cast<long>(w.size()));
  };
  return c;
}

inline ChainDesc<BaumslagSolitarGroup> make_bs_chain(const Int& m, const Int& ell) {
  if (gcd(m, ell) != 1) throw std::invalid_argument("bs chain: m and l must be coprime");
  if (ell < 2) throw std::invalid_argument("bs chain: l must be at least 2");
  ChainDesc<BaumslagSolitarGroup> c(BaumslagSolitarGroup{m});
  c.family = "bs";
  c.arity = static_cast<int>(to_long(ell));
  BaumslagSolitarGroup G = c.group;
  Int L = ell;

  auto vertex_value = [L](const TreeWord& w) {
    Int x = 0, pw = 1;
    for (std::size_t j = 0; j < w.size(); ++j) {
      x += Int(w[j]) * pw;
      pw *= L;
    }
    return x;
  };

  c.phi_i = [G, L](int i, const BaumslagSolitarGroup::Element& g) {
    Rat r = Rat(L) * g.r + Rat(Int(i)) * (Rat(1) - G.m_pow(g.k));
    return G.make(g.k, r);
  };

  c.in_level = [G, L](const BaumslagSolitarGroup::Element& g, long n) {
    return G.valid_translation(g.r / Rat(ipow(L, static_cast<unsigned long>(n))));
  };

  c.vertex_rep = [G, vertex_value](const TreeWord& w) {
    return G.make(Int(0), Rat(vertex_value(w)));
  };

  c.phi_word_direct = [G, L, vertex_value](const TreeWord& w, const BaumslagSolitarGroup::Element& g) {
    Int x = vertex_value(w);
    Rat r = Rat(ipow(L, static_cast<unsigned long>(w.size()))) * g.r +
            Rat(x) * (Rat(1) - G.m_pow(g.k));
    return G.make(g.k, r);
  };

  c.stab_coset_member = [G, L, vertex_value](const BaumslagSolitarGroup::Element& g, const TreeWord& w) {
    Rat x(vertex_value(w));
    Rat e = g.r - x + G.m_pow(g.k) * x;
    return G.valid_translation(e / Rat(ipow(L, static_cast<unsigned long>(w.size()))));
  };
  return c;
}

inline ChainDesc<AffineGroup> make_affine_chain(int d) {
  ChainDesc<AffineGroup> c(AffineGroup{d});
  c.family = "affine";
  c.arity = 1 << d;
  AffineGroup G = c.group;

  auto letter_vec = [d](int i) {
    IntVec y(static_cast<std::size_t>(d));
    for (int b = 0; b < d; ++b) y[static_cast<std::size_t>(b)] = (i >> b) & 1;
    return y;
  };

  auto vertex_vec = [d, letter_vec](const TreeWord& w) {
    IntVec x(static_cast<std::size_t>(d), Int(0));
    Int pw = 1;
    for (std::size_t j = 0; j < w.size(); ++j) {
      IntVec y = letter_vec(w[j]);
      for (int b = 0; b < d; ++b) x[static_cast<std::size_t>(b)] += pw * y[static_cast<std::size_t>(b)];
      pw *= 2;
    }
    return x;
  };

  c.phi_i = [G, d, letter_vec](int i, const AffineGroup::Element& g) {
    IntVec y = letter_vec(i);
    IntVec My = mat_apply(g.M, y);
    IntVec v(static_cast<std::size_t>(d));
    for (int b = 0; b < d; ++b)
      v[static_cast<std::size_t>(b)] = 2 * g.v[static_cast<std::size_t>(b)] +
                                       y[static_cast<std::size_t>(b)] - My[static_cast<std::size_t>(b)];
    return G.make(g.M, v);
  };

  c.in_level = [d](const AffineGroup::Element& g, long n) {
    Int mod = ipow(Int(2), static_cast<unsigned long>(n));
    for (int b = 0; b < d; ++b)
      if (imod(g.v[static_cast<std::size_t>(b)], mod) != 0) return false;
    return true;
  };

  c.vertex_rep = [G, vertex_vec](const TreeWord& w) {
    return G.make(mat_identity(G.dim()), vertex_vec(w));
  };

  c.phi_word_direct = [G, d, vertex_vec](const TreeWord& w, const AffineGroup::Element& g) {
    IntVec x = vertex_vec(w);
    IntVec Mx = mat_apply(g.M, x);
    Int pw = ipow(Int(2), static_cast<unsigned long>(w.size()));
    IntVec v(static_cast<std::size_t>(d));
    for (int b = 0; b < d; ++b)
      v[static_cast<std::size_t>(b)] = pw * g.v[static_cast<std::size_t>(b)] +
                                       x[static_cast<std::size_t>(b)] - Mx[static_cast<std::size_t>(b)];
    return G.make(g.M, v);
  };

  c.stab_coset_member = [d, vertex_vec](const AffineGroup::Element& g, const TreeWord& w) {
    IntVec x = vertex_vec(w);
    IntVec Mx = mat_apply(g.M, x);
    Int mod = ipow(Int(2), static_cast<unsigned long>(w.size()));
    for (int b = 0; b < d; ++b) {
      Int e = g.v[static_cast<std::size_t>(b)] - x[static_cast<std::size_t>(b)] + Mx[static_cast<std::size_t>(b)];
      if (imod(e, mod) != 0) return false;
    }
    return true;
  };
  return c;
}

// ---------------------------------------------------------------------------
// Lamp group: periodic-ray stabilizer witness
// ---------------------------------------------------------------------------

struct LampRayWitness {
  long k = 0;           // ray period length; ray block is 0^(k-1) 1
  long kappa = 0;       // 2-adic valuation of k
  Int K;                // odd part of k
  Int ord;              // multiplicative order of 2 modulo K
  Int s, t;             // exponents: ell = 2^s - 1, m = 2^t - 1
  Int ell, m;
  GF2Poly quotient;     // ((1+x)^m + (1+x)^ell) / (1 + x^k), exact
  bool division_exact = false;
  LamplighterGroup::Element element;  // shift m - ell, fixing the ray
  Ray ray;
};

inline LampRayWitness ll_periodic_witness(long k) {
  if (k < 1) throw std::invalid_argument("ll_periodic_witness: k must be positive");
  LampRayWitness w;
  w.k = k;
  long kk = k;
  while (kk % 2 == 0) {
    kk /= 2;
    ++w.kappa;
  }
  w.K = kk;
  w.ord = (kk == 1) ? Int(1) : mult_order(Int(2), w.K);
  w.s = Int(w.kappa) + w.ord;
  w.t = Int(w.kappa) + 2 * w.ord;
  w.ell = ipow(Int(2), static_cast<unsigned long>(to_long(w.s))) - 1;
  w.m = ipow(Int(2), static_cast<unsigned long>(to_long(w.t))) - 1;

  GF2Poly numer = GF2Poly::pow_one_plus_x(w.m) + GF2Poly::pow_one_plus_x(w.ell);
  GF2Poly denom = GF2Poly::one_plus_xk(static_cast<std::size_t>(k));
  auto [q, r] = numer.divmod(denom);
  w.quotient = q;
  w.division_exact = r.degree() < 0;
  if (!w.division_exact)
    throw std::runtime_error("ll_periodic_witness: divisibility certificate failed");

  // h = t^(k-1) * quotient(t) * u^(-ell); rewrite the polynomial part in the
  // u basis via t = 1 + u, then shift all exponents down by ell.
  GF2Poly poly_t = w.quotient.shifted_left(static_cast<std::size_t>(k - 1));
  GF2Poly poly_u = GF2Poly::zero();
  for (long e : poly_t.exponents())
    poly_u = poly_u + GF2Poly::pow_one_plus_x(Int(e));
  std::vector<Int> positions;
  for (long e : poly_u.exponents()) positions.push_back(Int(e) - w.ell);

  LamplighterGroup G;
  w.element = G.from_positions(w.m - w.ell, positions);

  w.ray.pre.clear();
  w.ray.period.assign(static_cast<std::size_t>(k), 0);
  w.ray.period.back() = 1;
  return w;
}

// ---------------------------------------------------------------------------
// Baumslag-Solitar: periodic l-adic ray stabilizer witness
// ---------------------------------------------------------------------------

struct BSRayWitness {
  Int m, ell;
  long p = 0;        // requested period of the fixed point's digit expansion
  Int a;             // numerator parameter
  long b = 0;        // power of m in the denominator
  Int t;             // exponent of the witness: element = (t, h)
  Rat xi;            // fixed boundary point  -a / (m^b (l^p - 1))
  Rat h;             // translation part, (m^t - 1) * a / (m^b (l^p - 1))
  BaumslagSolitarGroup::Element element;
  Ray ray;           // l-adic digit expansion of xi
  bool level_checks = false;  // h - (1 - m^t) xi_k in l^(kp) Z[1/m] for k <= 8
};

// Digits of the l-adic expansion of a rational with denominator coprime to l.
inline Ray ladic_digit_ray(Rat x, const Int& ell) {
  Ray out;
  std::map<std::string, std::size_t> seen;
  std::vector<int> digits;
  while (true) {
    std::string key = rat_str(x);
    auto it = seen.find(key);
    if (it != seen.end()) {
      out.pre.assign(digits.begin(), digits.begin() + static_cast<long>(it->second));
      out.period.assign(digits.begin() + static_cast<long>(it->second), digits.end());
      return canonical_ray(out);
    }
    seen.emplace(key, digits.size());
    Int num = rat_num(x), den = rat_den(x);
    if (gcd(den, ell) != 1)
      throw std::invalid_argument("ladic_digit_ray: denominator not coprime to l");
    Int digit = imod(num * inv_mod(imod(den, ell), ell), ell);
    digits.push_back(static_cast<int>(to_long(digit)));
    x = (x - Rat(digit)) / Rat(ell);
  }
}

inline BSRayWitness bs_periodic_witness(const Int& m, const Int& ell, long p, const Int& a, long b,
                                        long level_check_depth = 8) {
  if (m < 2 || ell < 2 || gcd(m, ell) != 1)
    throw std::invalid_argument("bs_periodic_witness: need m, l >= 2 coprime");
  if (p < 1 || b < 0) throw std::invalid_argument("bs_periodic_witness: need p >= 1, b >= 0");
  BSRayWitness w;
  w.m = m;
  w.ell = ell;
  w.p = p;
  w.a = a;
  w.b = b;

  Int D = ipow(ell, static_cast<unsigned long>(p)) - 1;
  Int d = D;
  while (true) {
    Int g = gcd(d, m);
    if (g == 1) break;
    while (d % g == 0) d /= g;
  }
  w.t = (d == 1) ? Int(1) : mult_order(imod(m, d), d);

  Int mb = ipow(m, static_cast<unsigned long>(b));
  Int mt = ipow(m, static_cast<unsigned long>(to_long(w.t)));
  w.xi = Rat(-a) / (Rat(mb) * Rat(D));
  w.h = (Rat(1) - Rat(mt)) * w.xi;

  BaumslagSolitarGroup G{m};
  w.element = G.make(w.t, w.h);  // validates h in Z[1/m]
  w.ray = ladic_digit_ray(w.xi, ell);

  // Level consistency: h lands in the stabilizer coset of every truncation.
  w.level_checks = true;
  Int xi_k = 0, pw = 1;
  long depth = 0;
  for (long kk = 1; kk <= level_check_depth; ++kk) {
    while (depth < kk * p) {
      Int digit(ray_letter(w.ray, static_cast<std::size_t>(depth)));
      xi_k += digit * pw;
      pw *= ell;
      ++depth;
    }
    Rat e = w.h - (Rat(1) - Rat(mt)) * Rat(xi_k);
    Rat scaled = e / Rat(ipow(ell, static_cast<unsigned long>(kk * p)));
    if (!G.valid_translation(scaled)) w.level_checks = false;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Affine witnesses
// ---------------------------------------------------------------------------

namespace detail {
inline IntMat mat_pow_nonneg(IntMat base, Int e) {
  IntMat acc = mat_identity(static_cast<int>(base.size()));
  while (e > 0) {
    if ((e & 1) != 0) acc = mat_mul(acc, base);
    base = mat_mul(base, base);
    e >>= 1;
  }
  return acc;
}
inline IntMat mat_sub(const IntMat& A, const IntMat& B) {
  IntMat C = A;
  for (std::size_t i = 0; i < C.size(); ++i)
    for (std::size_t j = 0; j < C[i].size(); ++j) C[i][j] -= B[i][j];
  return C;
}
inline bool mat_is_zero(const IntMat& A) {
  for (const auto& row : A)
    for (const Int& x : row)
      if (x != 0) return false;
  return true;
}
}  // namespace detail

// A unimodular matrix alpha with alpha v = v, alpha != I, and (alpha - I)^2 = 0.
// For v = 0 a plain shear is returned.
inline IntMat affine_fixing_matrix(const IntVec& v) {
  int d = static_cast<int>(v.size());
  if (d < 2) throw std::invalid_argument("affine_fixing_matrix: need dimension >= 2");
  IntMat A = mat_identity(d);
  int P = -1;
  for (int i = 0; i < d; ++i)
    if (v[static_cast<std::size_t>(i)] != 0) {
      P = i;
      break;
    }
  if (P < 0) {
    A[0][1] = 1;  // shear fixing the zero vector
    return A;
  }
  int Q = (P == 0) ? 1 : 0;
  Int x = v[static_cast<std::size_t>(P)], y = v[static_cast<std::size_t>(Q)];
  A[static_cast<std::size_t>(P)][static_cast<std::size_t>(P)] = x * y + 1;
  A[static_cast<std::size_t>(P)][static_cast<std::size_t>(Q)] = -x * x;
  A[static_cast<std::size_t>(Q)][static_cast<std::size_t>(P)] = y * y;
  A[static_cast<std::size_t>(Q)][static_cast<std::size_t>(Q)] = -x * y + 1;
  return A;
}

// Checks N = alpha - I squares to zero and alpha^k = I + k N over a symmetric
// range of exponents.
inline bool affine_unipotent_power_check(const IntMat& alpha, long kmax) {
  int d = static_cast<int>(alpha.size());
  IntMat I = mat_identity(d);
  IntMat N = detail::mat_sub(alpha, I);
  if (!detail::mat_is_zero(mat_mul(N, N))) return false;
  IntMat inv = mat_inv_unimodular(alpha);
  for (long k = -kmax; k <= kmax; ++k) {
    IntMat pw = (k >= 0) ? detail::mat_pow_nonneg(alpha, Int(k))
                         : detail::mat_pow_nonneg(inv, Int(-k));
    IntMat expect = I;
    for (std::size_t i = 0; i < expect.size(); ++i)
      for (std::size_t j = 0; j < expect[i].size(); ++j) expect[i][j] += Int(k) * N[i][j];
    if (!detail::mat_is_zero(detail::mat_sub(pw, expect))) return false;
  }
  return true;
}

struct UnipotentWitness {
  int d = 0;
  long p = 0;
  Int n;                 // d! (2^p - 1)
  IntMat alpha;          // M^n
  IntMat W;              // (M^n - I) / (2^p - 1), integral
  IntVec v;              // ray datum, coordinates in [0, 2^p)
  AffineGroup::Element element;  // (alpha, W v)
  Ray ray;               // dyadic expansion of -v/(2^p - 1), period p
  bool level_checks = false;
};

inline UnipotentWitness unipotent_witness(const IntMat& M, long p, const IntVec& v,
                                          long level_check_depth = 8) {
  int d = static_cast<int>(M.size());
  if (d < 1 || v.size() != M.size())
    throw std::invalid_argument("unipotent_witness: dimension mismatch");
  if (p < 1) throw std::invalid_argument("unipotent_witness: need p >= 1");
  IntMat I = mat_identity(d);
  IntMat N = detail::mat_sub(M, I);
  IntMat Npow = mat_identity(d);
  for (int i = 0; i < d; ++i) Npow = mat_mul(Npow, N);
  if (!detail::mat_is_zero(Npow))
    throw std::invalid_argument("unipotent_witness: matrix is not unipotent");
  Int q = ipow(Int(2), static_cast<unsigned long>(p)) - 1;
  for (const Int& c : v)
    if (c < 0 || c > q) throw std::invalid_argument("unipotent_witness: v coordinates must lie in [0, 2^p)");

  UnipotentWitness w;
  w.d = d;
  w.p = p;
  w.v = v;
  Int fact = 1;
  for (int i = 2; i <= d; ++i) fact *= i;
  w.n = fact * q;
  w.alpha = detail::mat_pow_nonneg(M, w.n);
  IntMat diff = detail::mat_sub(w.alpha, I);
  w.W = diff;
  for (auto& row : w.W)
    for (Int& x : row) {
      if (x % q != 0) throw std::runtime_error("unipotent_witness: integrality certificate failed");
      x /= q;
    }
  IntVec h = mat_apply(w.W, v);
  AffineGroup G{d};
  w.element = G.make(w.alpha, h);

  w.ray.pre.clear();
  w.ray.period.resize(static_cast<std::size_t>(p));
  for (long j = 0; j < p; ++j) {
    int letter = 0;
    for (int i = 0; i < d; ++i) {
      Int bit = (v[static_cast<std::size_t>(i)] >> static_cast<unsigned>(j)) & 1;
      if (bit != 0) letter |= 1 << i;
    }
    w.ray.period[static_cast<std::size_t>(j)] = letter;
  }
  w.ray = canonical_ray(w.ray);

  // h - (I - alpha) v S_k = 2^(kp) W v, and it lies in 2^(kp) Z^d.
  w.level_checks = true;
  IntVec Wv = mat_apply(w.W, v);
  for (long kk = 1; kk <= level_check_depth; ++kk) {
    Int Sk = (ipow(Int(2), static_cast<unsigned long>(kk * p)) - 1) / q;
    Int mod = ipow(Int(2), static_cast<unsigned long>(kk * p));
    IntVec xk(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) xk[i] = v[i] * Sk;
    IntVec Axk = mat_apply(w.alpha, xk);
    for (std::size_t i = 0; i < v.size(); ++i) {
      Int e = h[i] - xk[i] + Axk[i];
      if (e != mod * Wv[i] || imod(e, mod) != 0) w.level_checks = false;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Brute-force ray stabilizer search
// ---------------------------------------------------------------------------

// Breadth-first search over words in the generators for a non-identity
// element fixing the ray. Independent of the algebraic witness constructions.
template <TreeAction A>
std::optional<typename A::Element> ray_stabilizer_search(
    const A& action,
    const std::vector<std::pair<std::string, typename A::Element>>& gens,
    const Ray& ray, std::size_t max_length, const OrbitBudget& budget = {},
    std::size_t max_elements = 200000) {
  using El = typename A::Element;
  std::vector<El> frontier{action.identity()};
  std::map<std::string, std::size_t> seen{{action.key(frontier[0]), 0}};
  std::vector<El> all = frontier;
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<El> next;
    for (const El& g : frontier)
      for (const auto& [name, s] : gens) {
        El cand = action.mul(g, s);
        std::string k = action.key(cand);
        if (seen.count(k)) continue;
        if (all.size() >= max_elements)
          throw std::runtime_error("ray_stabilizer_search: element budget exceeded");
        seen.emplace(k, all.size());
        all.push_back(cand);
        next.push_back(cand);
        if (!action.is_identity(cand)) {
          auto res = stabilizes_ray(action, cand, ray, budget);
          if (std::holds_alternative<StabilizeFixed>(res)) return cand;
        }
      }
    frontier = std::move(next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Box intersection scan for the Heisenberg chains
// ---------------------------------------------------------------------------

// Elements of the coordinate box that survive k rounds of the inverse
// embedding for every k up to depth; for a chain with trivial intersection
// only the identity remains.
template <GroupFamily G>
std::vector<typename G::Element> box_intersection_samples(
    const GroupSpec<G>& spec, const std::vector<typename G::Element>& box, int depth) {
  std::vector<typename G::Element> out;
  for (const auto& e : box) {
    typename G::Element cur = e;
    bool inside = true;
    for (int k = 0; k < depth && inside; ++k) {
      auto pre = spec.psi(cur);
      if (!pre.has_value()) inside = false;
      else cur = *pre;
    }
    if (inside) out.push_back(e);
  }
  return out;
}

inline std::vector<HeisenbergGroup::Element> heisenberg_box(long radius) {
  std::vector<HeisenbergGroup::Element> box;
  for (long x = -radius; x <= radius; ++x)
    for (long y = -radius; y <= radius; ++y)
      for (long z = -radius; z <= radius; ++z)
        box.push_back({Int(x), Int(y), Int(z)});
  return box;
}

// ---------------------------------------------------------------------------
// Lamp group: the index-two marked self-embedding
// ---------------------------------------------------------------------------

// iota flips the window of lamps swept by the shift: (m, h) -> (m, h + u^0 +
// ... + u^(m-1)) for m >= 0, and the mirrored window for m < 0. It is an
// involutive automorphism, and g -> iota(phi_0(g)) embeds the group onto an
// index-two subgroup isomorphically as a marked group.
inline LamplighterGroup::Element ll_iota(const LamplighterGroup& G,
                                         const LamplighterGroup::Element& g) {
  std::vector<Int> pos = G.positions(g);
  if (g.shift >= 0)
    for (Int j = 0; j < g.shift; ++j) pos.push_back(j);
  else
    for (Int j = g.shift; j < 0; ++j) pos.push_back(j);
  return G.from_positions(g.shift, pos);
}

struct DLCheckReport {
  bool involution_ok = false;
  bool automorphism_ok = false;
  bool embedding_hom_ok = false;
  bool generator_images_ok = false;
  bool ball_match_ok = false;
  bool edges_ok = false;
  bool dist_ok = false;
  int image_index = 0;  // index of the embedded copy, expect 2
  std::size_t ball_size = 0;
  bool ok() const {
    return involution_ok && automorphism_ok && embedding_hom_ok && generator_images_ok &&
           ball_match_ok && edges_ok && dist_ok && image_index == 2;
  }
};

inline DLCheckReport dl_isomorphism_check(std::size_t radius = 4, int samples = 100,
                                          std::uint64_t seed = 7) {
  LamplighterGroup G;
  auto phi0 = [&G](const LamplighterGroup::Element& g) { return G.lamp_mul_t(g); };
  auto theta = [&](const LamplighterGroup::Element& g) { return ll_iota(G, phi0(g)); };

  SplitMix64 rng(seed);
  auto random_element = [&]() {
    Int shift = Int(rng.range(-4, 4));
    std::vector<Int> pos;
    for (long j = -6; j <= 6; ++j)
      if (rng.below(2) == 1) pos.push_back(Int(j));
    return G.from_positions(shift, pos);
  };

  DLCheckReport rep;
  rep.involution_ok = true;
  rep.automorphism_ok = true;
  rep.embedding_hom_ok = true;
  for (int i = 0; i < samples; ++i) {
    auto x = random_element();
    auto y = random_element();
    if (!G.eq(ll_iota(G, ll_iota(G, x)), x)) rep.involution_ok = false;
    if (!G.eq(ll_iota(G, G.mul(x, y)), G.mul(ll_iota(G, x), ll_iota(G, y))))
      rep.automorphism_ok = false;
    if (!G.eq(theta(G.mul(x, y)), G.mul(theta(x), theta(y)))) rep.embedding_hom_ok = false;
  }

  auto gens = G.named_generators();
  LamplighterGroup::Element a = gens[0].second, b = gens[1].second;
  LamplighterGroup::Element ta = theta(a), tb = theta(b);
  rep.generator_images_ok =
      G.eq(tb, a) && G.eq(ta, G.from_positions(Int(1), {Int(1)}));

  std::vector<std::pair<std::string, LamplighterGroup::Element>> src_gens = {
      {"a", a}, {"b", b}, {"a^-1", G.inv(a)}, {"b^-1", G.inv(b)}};
  std::vector<std::pair<std::string, LamplighterGroup::Element>> img_gens = {
      {"a", ta}, {"b", tb}, {"a^-1", G.inv(ta)}, {"b^-1", G.inv(tb)}};
  Ball<LamplighterGroup::Element> B1 = cayley_ball(G, src_gens, radius);
  Ball<LamplighterGroup::Element> B2 = cayley_ball(G, img_gens, radius);
  rep.ball_size = B1.elements.size();
  rep.ball_match_ok = B1.elements.size() == B2.elements.size();
  rep.dist_ok = true;
  std::map<std::string, std::string> key_map;
  for (std::size_t i = 0; i < B1.elements.size() && rep.ball_match_ok; ++i) {
    auto img = theta(B1.elements[i]);
    std::string k = G.key(img);
    auto it = B2.index.find(k);
    if (it == B2.index.end()) {
      rep.ball_match_ok = false;
      break;
    }
    if (B2.dist[static_cast<std::size_t>(it->second)] != B1.dist[i]) rep.dist_ok = false;
    key_map[G.key(B1.elements[i])] = k;
  }
  rep.edges_ok = rep.ball_match_ok && B1.graph.edge_count() == B2.graph.edge_count();
  if (rep.edges_ok)
    for (const auto& [pair, labels] : B1.graph.edges()) {
      auto labels2 = B2.graph.edge_labels(key_map[pair.first], key_map[pair.second]);
      if (labels2 != labels) {
        rep.edges_ok = false;
        break;
      }
    }

  // Coset count of the image subgroup: x is in theta(G) iff iota(x) has an
  // even number of lit lamps.
  auto member = [&](const LamplighterGroup::Element& x) {
    return G.lamp_count_parity(ll_iota(G, x)) == 0;
  };
  std::vector<LamplighterGroup::Element> reps{G.identity()};
  std::size_t head = 0;
  while (head < reps.size() && reps.size() <= 8) {
    LamplighterGroup::Element cur = reps[head++];
    for (const auto& [name, s] : src_gens) {
      LamplighterGroup::Element cand = G.mul(cur, s);
      bool found = false;
      for (const auto& r : reps)
        if (member(G.mul(cand, G.inv(r)))) {
          found = true;
          break;
        }
      if (!found) reps.push_back(cand);
    }
  }
  rep.image_index = static_cast<int>(reps.size());
  return rep;
}

}  // namespace selfsim
