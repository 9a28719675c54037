#pragma once

// Coset monotiles for a finite-index subgroup level: enumerate right cosets
// by a breadth-first walk on the Schreier graph, lift the walk's tree to a
// connected transversal inside the group, and verify that the transversal
// tiles a metric ball (every element belongs to exactly one coset).
//
// The caller supplies the subgroup level as a membership test plus a
// right-coset invariant key. The two are cross-validated against each other:
// distinct transversal representatives must be inequivalent under the
// membership test, and every covered ball element must land in exactly one
// coset.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/affine.hpp"
#include "selfsim/bs.hpp"
#include "selfsim/graph.hpp"
#include "selfsim/group_spec.hpp"
#include "selfsim/ints.hpp"
#include "selfsim/lamplighter.hpp"
#include "selfsim/tiling.hpp"

namespace selfsim {

template <class El>
struct SubgroupLevel {
  std::string name;
  std::function<bool(const El&)> member;            // is the element in G_n?
  std::function<std::string(const El&)> coset_key;  // right-coset invariant
};

template <class El>
struct MonotileReport {
  std::vector<El> transversal;          // BFS-tree lifts; transversal[0] = identity
  std::vector<std::string> keys;        // coset keys, parallel to transversal
  std::vector<int> parent;              // BFS-tree parent index (-1 for the root)
  std::vector<std::string> parent_gen;  // generator used from the parent
  LabeledGraph schreier;                // cosets as vertices, generator-labeled edges
  std::size_t coset_count = 0;
  bool keys_match_membership = false;   // pairwise coset distinctness via member()
  bool tree_connected = false;          // each lift reaches its parent by one generator
  bool partition_ok = false;            // ball elements covered exactly once
  std::size_t ball_checked = 0;
  bool ok() const {
    return keys_match_membership && tree_connected && partition_ok && coset_count > 0;
  }
};

// lift_gens drive the Schreier BFS (they need not be inverse-closed: right
// multiplication permutes the finitely many cosets, so the reachable set is
// closed under the whole group). ball_gens define the metric ball used for
// the partition check and the full edge set of the Schreier graph.
template <GroupOpsLike Ops>
MonotileReport<typename Ops::Element> monotile_lift(
    const Ops& ops,
    const std::vector<std::pair<std::string, typename Ops::Element>>& lift_gens,
    const std::vector<std::pair<std::string, typename Ops::Element>>& ball_gens,
    const SubgroupLevel<typename Ops::Element>& level, std::size_t ball_radius,
    std::size_t max_cosets = 1 << 16) {
  using El = typename Ops::Element;
  MonotileReport<El> rep;

  El id = ops.identity();
  if (!level.member(id))
    throw std::invalid_argument("monotile_lift: identity fails the membership test");

  std::map<std::string, int> index;
  rep.transversal.push_back(id);
  rep.keys.push_back(level.coset_key(id));
  rep.parent.push_back(-1);
  rep.parent_gen.push_back("");
  index.emplace(rep.keys[0], 0);

  std::size_t head = 0;
  while (head < rep.transversal.size()) {
    El cur = rep.transversal[head];
    for (const auto& [name, s] : lift_gens) {
      El cand = ops.mul(cur, s);
      std::string ck = level.coset_key(cand);
      if (index.count(ck)) continue;
      if (rep.transversal.size() >= max_cosets)
        throw std::runtime_error("monotile_lift: coset budget exceeded");
      index.emplace(ck, static_cast<int>(rep.transversal.size()));
      rep.transversal.push_back(cand);
      rep.keys.push_back(ck);
      rep.parent.push_back(static_cast<int>(head));
      rep.parent_gen.push_back(name);
    }
    ++head;
  }
  rep.coset_count = rep.transversal.size();

  // Schreier graph over the full generator set.
  for (std::size_t i = 0; i < rep.coset_count; ++i)
    rep.schreier.add_vertex(rep.keys[i], ops.key(rep.transversal[i]));
  for (std::size_t i = 0; i < rep.coset_count; ++i)
    for (const auto& [name, s] : ball_gens) {
      El cand = ops.mul(rep.transversal[i], s);
      std::string ck = level.coset_key(cand);
      auto it = index.find(ck);
      if (it == index.end())
        throw std::runtime_error("monotile_lift: coset key outside the enumerated set");
      if (ck != rep.keys[i]) rep.schreier.add_edge(rep.keys[i], ck, name);
    }

  // Cross-validate the key function against the membership test.
  rep.keys_match_membership = true;
  for (std::size_t i = 0; i < rep.coset_count; ++i)
    for (std::size_t j = 0; j < rep.coset_count; ++j) {
      bool same = level.member(ops.mul(rep.transversal[i], ops.inv(rep.transversal[j])));
      if (same != (i == j)) rep.keys_match_membership = false;
    }

  // The lift is connected through the Cayley graph by construction; verify.
  rep.tree_connected = true;
  for (std::size_t i = 1; i < rep.coset_count; ++i) {
    El diff = ops.mul(ops.inv(rep.transversal[static_cast<std::size_t>(rep.parent[i])]),
                      rep.transversal[i]);
    bool is_gen = false;
    for (const auto& [name, s] : lift_gens)
      if (ops.key(diff) == ops.key(s)) is_gen = true;
    if (!is_gen) rep.tree_connected = false;
  }

  // Partition check on a metric ball: each element in exactly one coset.
  Ball<El> ball = cayley_ball(ops, ball_gens, ball_radius);
  rep.ball_checked = ball.elements.size();
  rep.partition_ok = true;
  for (const El& v : ball.elements) {
    int hits = 0;
    for (const El& c : rep.transversal)
      if (level.member(ops.mul(v, ops.inv(c)))) ++hits;
    if (hits != 1) rep.partition_ok = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Concrete subgroup levels
// ---------------------------------------------------------------------------

inline SubgroupLevel<LamplighterGroup::Element> lamplighter_level(const LamplighterGroup& G,
                                                                  long n) {
  SubgroupLevel<LamplighterGroup::Element> lvl;
  lvl.name = "lamplighter-level-" + std::to_string(n);
  lvl.member = [G, n](const LamplighterGroup::Element& g) { return G.lamp_in_tn(g, n); };
  lvl.coset_key = [G, n](const LamplighterGroup::Element& g) {
    std::string key;
    for (int c : G.lamp_t_coefficients(g, n)) key += static_cast<char>('0' + c);
    return key;
  };
  return lvl;
}

inline SubgroupLevel<BaumslagSolitarGroup::Element> bs_level(const BaumslagSolitarGroup& G,
                                                             const Int& ell, long n) {
  if (gcd(G.m, ell) != 1) throw std::invalid_argument("bs_level: m and l must be coprime");
  Int L = ipow(ell, static_cast<unsigned long>(n));
  SubgroupLevel<BaumslagSolitarGroup::Element> lvl;
  lvl.name = "bs-level-" + std::to_string(n);
  lvl.member = [G, L](const BaumslagSolitarGroup::Element& g) {
    return G.valid_translation(g.r / Rat(L));
  };
  lvl.coset_key = [L](const BaumslagSolitarGroup::Element& g) {
    Int num = rat_num(g.r), den = rat_den(g.r);
    Int res = imod(num * inv_mod(imod(den, L), L), L);
    return res.str();
  };
  return lvl;
}

// The integer chain Z > 2Z > 4Z > ... realized inside the rank-one affine
// group (translations only).
inline SubgroupLevel<AffineGroup::Element> integer_level(const AffineGroup& G, long n) {
  if (G.dim() != 1) throw std::invalid_argument("integer_level: dimension must be 1");
  Int mod = ipow(Int(2), static_cast<unsigned long>(n));
  SubgroupLevel<AffineGroup::Element> lvl;
  lvl.name = "integers-level-" + std::to_string(n);
  lvl.member = [mod](const AffineGroup::Element& g) {
    return g.M[0][0] == 1 && imod(g.v[0], mod) == 0;
  };
  lvl.coset_key = [mod](const AffineGroup::Element& g) {
    if (g.M[0][0] != 1) throw std::invalid_argument("integer_level: element outside Z");
    return imod(g.v[0], mod).str();
  };
  return lvl;
}

}  // namespace selfsim
