#pragma once

// The affine group GL(d, Z) ⋉ Z^d. The pair (M, v) encodes x |-> M x + v;
// composition applies the left factor first:
//
//   (M, v) * (M', v') = (M' M, M' v + v')
//
// Matrices are unimodular (determinant ±1) and inverted exactly via the
// adjugate.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/ints.hpp"

namespace selfsim {

using IntVec = std::vector<Int>;
using IntMat = std::vector<std::vector<Int>>;  // row-major, square

inline IntMat mat_identity(int d) {
  IntMat m(d, std::vector<Int>(d, 0));
  for (int i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

inline IntMat mat_mul(const IntMat& a, const IntMat& b) {
  int d = static_cast<int>(a.size());
  IntMat r(d, std::vector<Int>(d, 0));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      if (a[i][k] == 0) continue;
      for (int j = 0; j < d; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

inline IntVec mat_apply(const IntMat& a, const IntVec& v) {
  int d = static_cast<int>(a.size());
  IntVec r(d, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r[i] += a[i][j] * v[j];
  return r;
}

inline Int mat_det(const IntMat& a) {
  int d = static_cast<int>(a.size());
  if (d == 1) return a[0][0];
  Int det = 0;
  // Laplace expansion along the first row; dimensions here are tiny.
  for (int j = 0; j < d; ++j) {
    if (a[0][j] == 0) continue;
    IntMat minor(d - 1, std::vector<Int>(d - 1));
    for (int r = 1; r < d; ++r) {
      int cc = 0;
      for (int c = 0; c < d; ++c) {
        if (c == j) continue;
        minor[r - 1][cc++] = a[r][c];
      }
    }
    Int term = a[0][j] * mat_det(minor);
    det += (j % 2 == 0) ? term : -term;
  }
  return det;
}

// Inverse of a unimodular integer matrix (determinant must be ±1).
inline IntMat mat_inv_unimodular(const IntMat& a) {
  int d = static_cast<int>(a.size());
  Int det = mat_det(a);
  if (det != 1 && det != -1) throw std::invalid_argument("matrix is not unimodular");
  IntMat adj(d, std::vector<Int>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      IntMat minor(d - 1, std::vector<Int>(d - 1));
      for (int r = 0, rr = 0; r < d; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < d; ++c) {
          if (c == j) continue;
          minor[rr][cc++] = a[r][c];
        }
        ++rr;
      }
      Int cof = (d == 1) ? Int(1) : mat_det(minor);
      if ((i + j) % 2 != 0) cof = -cof;
      adj[j][i] = cof;  // transpose of the cofactor matrix
    }
  if (det == -1)
    for (auto& row : adj)
      for (auto& e : row) e = -e;
  return adj;
}

struct AffineGroup {
  struct Element {
    IntMat M;
    IntVec v;
    bool operator==(const Element& o) const { return M == o.M && v == o.v; }
    bool operator!=(const Element& o) const { return !(*this == o); }
  };

  int d;

  explicit AffineGroup(int d_) : d(d_) {
    if (d < 1) throw std::invalid_argument("AffineGroup: dimension must be >= 1");
  }

  int dim() const { return d; }

  Element make(IntMat M, IntVec v) const {
    if (static_cast<int>(M.size()) != d || static_cast<int>(v.size()) != d)
      throw std::invalid_argument("AffineGroup: wrong dimensions");
    Int det = mat_det(M);
    if (det != 1 && det != -1) throw std::invalid_argument("AffineGroup: matrix not unimodular");
    return {std::move(M), std::move(v)};
  }

  Element identity() const { return {mat_identity(d), IntVec(d, 0)}; }

  Element mul(const Element& a, const Element& b) const {
    return {mat_mul(b.M, a.M), [&] {
              IntVec r = mat_apply(b.M, a.v);
              for (int i = 0; i < d; ++i) r[i] += b.v[i];
              return r;
            }()};
  }

  Element inv(const Element& a) const {
    IntMat mi = mat_inv_unimodular(a.M);
    IntVec w = mat_apply(mi, a.v);
    for (auto& c : w) c = -c;
    return {std::move(mi), std::move(w)};
  }

  bool eq(const Element& a, const Element& b) const { return a == b; }

  bool is_identity(const Element& a) const {
    return a.M == mat_identity(d) && a.v == IntVec(static_cast<std::size_t>(d), 0);
  }

  std::string key(const Element& a) const {
    std::string s = "A[";
    for (int i = 0; i < d; ++i) {
      if (i) s += ";";
      for (int j = 0; j < d; ++j) {
        if (j) s += ",";
        s += a.M[i][j].str();
      }
    }
    s += "|";
    for (int i = 0; i < d; ++i) {
      if (i) s += ",";
      s += a.v[i].str();
    }
    return s + "]";
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

  Element translation(const IntVec& v) const { return {mat_identity(d), v}; }

  Element linear(const IntMat& M) const { return make(M, IntVec(static_cast<std::size_t>(d), 0)); }

  // Inverse-closed generating set: unit translations, elementary transvection
  // pairs, and the first-axis reflection (d >= 2 adds the transvections).
  std::vector<std::pair<std::string, Element>> named_generators() const {
    std::vector<std::pair<std::string, Element>> gens;
    for (int i = 0; i < d; ++i) {
      IntVec e(static_cast<std::size_t>(d), 0);
      e[static_cast<std::size_t>(i)] = 1;
      gens.emplace_back("t" + std::to_string(i), translation(e));
    }
    for (int i = 0; i < d; ++i) {
      IntVec e(static_cast<std::size_t>(d), 0);
      e[static_cast<std::size_t>(i)] = -1;
      gens.emplace_back("t" + std::to_string(i) + "^-1", translation(e));
    }
    for (int i = 0; i < d && d >= 2; ++i)
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        IntMat m = mat_identity(d);
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
        gens.emplace_back("e" + std::to_string(i) + std::to_string(j), linear(m));
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -1;
        gens.emplace_back("e" + std::to_string(i) + std::to_string(j) + "^-1", linear(m));
      }
    IntMat refl = mat_identity(d);
    refl[0][0] = -1;
    gens.emplace_back("r0", linear(refl));
    return gens;
  }
};

}  // namespace selfsim
