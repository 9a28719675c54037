#pragma once

// Orbital tilings and their combinatorics:
//   * cayley_ball        -- metric balls in a marked group, with labeled graph
//   * letter_adjacency_graph -- first-level adjacency induced by elements that
//                               map one subtree to another identically
//   * level_tiling       -- decomposition of a ball's orbit image into level-k
//                            tiles, with a verified translation certificate
//   * folner_profile     -- exact boundary fraction at level n by enumeration
//
// Tiles at level k collect ball elements whose image rays agree after the
// first k letters. For a free action each tile is a translate: restricting
// any member along the first k letters of the base ray gives the same element
// rho(T), and tile adjacency is detected by mul(inv(rho(T)), rho(T')) lying
// in the nucleus minus the identity. All of that is checked, not assumed.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/graph.hpp"
#include "selfsim/group_spec.hpp"
#include "selfsim/ints.hpp"
#include "selfsim/nucleus.hpp"
#include "selfsim/tree.hpp"

namespace selfsim {

// ---------------------------------------------------------------------------
// Cayley balls
// ---------------------------------------------------------------------------

template <class El>
struct Ball {
  std::vector<El> elements;          // BFS discovery order (deterministic)
  std::vector<std::size_t> dist;     // word length w.r.t. the generating set
  std::map<std::string, int> index;  // key -> position in elements
  LabeledGraph graph;                // vertices keyed by element key
  std::size_t radius = 0;
};

// Breadth-first ball of the given radius over an inverse-closed generating
// set. Neighbor exploration follows generator declaration order, so the
// element order is reproducible.
template <GroupOpsLike Ops>
Ball<typename Ops::Element> cayley_ball(
    const Ops& ops,
    const std::vector<std::pair<std::string, typename Ops::Element>>& gens,
    std::size_t radius, std::size_t max_elements = 2000000) {
  using El = typename Ops::Element;
  Ball<El> ball;
  ball.radius = radius;
  El id = ops.identity();
  ball.elements.push_back(id);
  ball.dist.push_back(0);
  ball.index.emplace(ops.key(id), 0);
  std::size_t head = 0;
  while (head < ball.elements.size()) {
    El cur = ball.elements[head];
    std::size_t d = ball.dist[head];
    ++head;
    if (d == radius) continue;
    for (const auto& [name, s] : gens) {
      El nxt = ops.mul(cur, s);
      std::string k = ops.key(nxt);
      if (ball.index.count(k)) continue;
      if (ball.elements.size() >= max_elements)
        throw std::runtime_error("cayley_ball: element budget exceeded");
      ball.index.emplace(k, static_cast<int>(ball.elements.size()));
      ball.elements.push_back(nxt);
      ball.dist.push_back(d + 1);
    }
  }
  for (std::size_t i = 0; i < ball.elements.size(); ++i)
    ball.graph.add_vertex(ops.key(ball.elements[i]), std::to_string(ball.dist[i]));
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    for (const auto& [name, s] : gens) {
      El nxt = ops.mul(ball.elements[i], s);
      std::string k = ops.key(nxt);
      auto it = ball.index.find(k);
      if (it == ball.index.end()) continue;
      if (k == ops.key(ball.elements[i])) continue;  // skip identity generators
      ball.graph.add_edge(ops.key(ball.elements[i]), k, name);
    }
  }
  ball.graph.set_metadata("radius", std::to_string(radius));
  ball.graph.set_metadata("vertices", std::to_string(ball.elements.size()));
  return ball;
}

// ---------------------------------------------------------------------------
// Letter adjacency
// ---------------------------------------------------------------------------

// Vertices are the tree letters 0..t-1. An element g produces the edge
// {i, i^g} exactly when its section at i is trivial, i.e. g carries the
// subtree below i onto the subtree below i^g letter-for-letter.
template <TreeAction A>
LabeledGraph letter_adjacency_graph(
    const A& action,
    const std::vector<std::pair<std::string, typename A::Element>>& elements) {
  LabeledGraph g;
  for (int i = 0; i < action.arity(); ++i) g.add_vertex(std::to_string(i), "");
  for (const auto& [name, el] : elements) {
    for (int i = 0; i < action.arity(); ++i) {
      auto [j, section] = action.act_letter(el, i);
      if (j != i && action.is_identity(section))
        g.add_edge(std::to_string(i), std::to_string(j), name);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Tile adjacency predicate
// ---------------------------------------------------------------------------

// Two orbit translates by g and h abut exactly when the difference
// inv(g)*h is a non-identity nucleus element.
template <TreeAction A>
bool tile_neighbors(const A& action, const Nucleus<typename A::Element>& nuc,
                    const typename A::Element& g, const typename A::Element& h) {
  auto diff = action.mul(action.inv(g), h);
  if (action.is_identity(diff)) return false;
  return nuc.find(action.key(diff)) >= 0;
}

// ---------------------------------------------------------------------------
// Level tilings
// ---------------------------------------------------------------------------

template <class El>
struct Tile {
  std::string tail_key;          // canonical form of the image ray past level k
  std::vector<int> members;      // ball indices
  bool interior = false;         // every member has its full nucleus neighborhood
  bool rho_defined = false;      // all member restrictions along the base prefix agree
  std::optional<El> rho;         // the common restriction (translate representative)
  bool connected = false;        // members form one piece under nucleus edges
  bool image_checked = false;    // orbit of rho over the shifted base ray matches tail
};

template <class El>
struct LevelTiling {
  Ray base_ray;
  int level = 0;
  Ball<El> ball;
  std::vector<Tile<El>> tiles;          // sorted by tail_key
  std::vector<int> tile_of;             // ball index -> tile index
  LabeledGraph tile_graph;              // tiles as vertices, nucleus-labeled edges
  // Certificate over interior tiles:
  bool cert_sizes = false;        // each interior tile has exactly arity^level members
  bool cert_connected = false;    // each interior tile is connected
  bool cert_rho_injective = false;
  bool cert_adjacency = false;    // ball edges across interior tiles == nucleus criterion
  bool cert_images = false;       // shifted-ray orbit cross-check
  std::size_t interior_tile_count = 0;  // may be zero when the window is small;
                                        // the certificate is then vacuous
  bool certificate() const {
    return cert_sizes && cert_connected && cert_rho_injective && cert_adjacency && cert_images;
  }
};

// Decompose the radius-`radius` ball (generated by the non-identity nucleus
// elements) into level-k tiles of the orbit of `w`, and verify the
// translation-tiling certificate on all interior tiles.
template <TreeAction A>
LevelTiling<typename A::Element> level_tiling(const A& action,
                                              const Nucleus<typename A::Element>& nuc,
                                              const Ray& w, int level,
                                              std::size_t radius,
                                              const OrbitBudget& budget = {}) {
  using El = typename A::Element;
  if (level < 0) throw std::invalid_argument("level_tiling: level must be >= 0");

  std::vector<std::pair<std::string, El>> gens;
  for (std::size_t i = 0; i < nuc.elements.size(); ++i)
    if (static_cast<int>(i) != nuc.identity_index)
      gens.emplace_back(nuc.keys[i], nuc.elements[i]);

  LevelTiling<El> out;
  out.base_ray = w;
  out.level = level;
  out.ball = cayley_ball(action, gens, radius);
  const auto& ball = out.ball;
  const std::size_t nball = ball.elements.size();

  // Image ray of every ball element, keyed by its level-k tail.
  TreeWord prefix = ray_prefix(w, static_cast<std::size_t>(level));
  Ray tail_w = ray_tail(w, static_cast<std::size_t>(level));
  std::map<std::string, std::vector<int>> tiles_by_tail;
  std::vector<std::string> tail_of(nball);
  for (std::size_t i = 0; i < nball; ++i) {
    OrbitPointResult im = orbit_point(action, ball.elements[i], w, budget);
    if (im.diverged)
      throw std::runtime_error("level_tiling: orbit point computation diverged");
    Ray tail = canonical_ray(ray_tail(im.image, static_cast<std::size_t>(level)));
    tail_of[i] = ray_str(tail);
    tiles_by_tail[tail_of[i]].push_back(static_cast<int>(i));
  }

  // Interior vertices: every nucleus neighbor stays inside the ball.
  std::vector<bool> interior_vertex(nball, true);
  for (std::size_t i = 0; i < nball; ++i)
    for (const auto& [name, s] : gens) {
      El nxt = action.mul(ball.elements[i], s);
      if (!ball.index.count(action.key(nxt))) {
        interior_vertex[i] = false;
        break;
      }
    }

  out.tile_of.assign(nball, -1);
  Int expected_size = ipow(Int(action.arity()), static_cast<unsigned long>(level));

  for (const auto& [tail_key, members] : tiles_by_tail) {
    Tile<El> tile;
    tile.tail_key = tail_key;
    tile.members = members;
    int ti = static_cast<int>(out.tiles.size());
    for (int m : members) out.tile_of[m] = ti;

    tile.interior = true;
    for (int m : members)
      if (!interior_vertex[m]) tile.interior = false;

    // Common restriction along the base prefix.
    tile.rho_defined = true;
    for (int m : members) {
      El r = restriction(action, ball.elements[m], prefix);
      if (!tile.rho.has_value()) {
        tile.rho = r;
      } else if (action.key(*tile.rho) != action.key(r)) {
        tile.rho_defined = false;
      }
    }

    // Connectivity of the tile under nucleus-difference edges.
    std::map<int, int> pos;
    for (std::size_t p = 0; p < members.size(); ++p) pos[members[p]] = static_cast<int>(p);
    std::vector<bool> seen(members.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int p = stack.back();
      stack.pop_back();
      for (const auto& [name, s] : gens) {
        El nxt = action.mul(ball.elements[members[p]], s);
        auto it = ball.index.find(action.key(nxt));
        if (it == ball.index.end()) continue;
        auto jt = pos.find(it->second);
        if (jt == pos.end() || seen[jt->second]) continue;
        seen[jt->second] = true;
        ++reached;
        stack.push_back(jt->second);
      }
    }
    tile.connected = reached == members.size();

    // Cross-check: the representative moves the shifted base ray to the tail.
    if (tile.rho_defined && tile.rho.has_value()) {
      OrbitPointResult im = orbit_point(action, *tile.rho, tail_w, budget);
      tile.image_checked =
          !im.diverged && ray_str(canonical_ray(im.image)) == tail_key;
    }
    out.tiles.push_back(std::move(tile));
  }

  // Tile graph: one vertex per tile, edges labeled by the nucleus elements
  // realizing them.
  for (const auto& tile : out.tiles)
    out.tile_graph.add_vertex(tile.tail_key, tile.interior ? "interior" : "boundary");
  for (std::size_t i = 0; i < nball; ++i)
    for (const auto& [name, s] : gens) {
      El nxt = action.mul(ball.elements[i], s);
      auto it = ball.index.find(action.key(nxt));
      if (it == ball.index.end()) continue;
      int ta = out.tile_of[i], tb = out.tile_of[it->second];
      if (ta != tb) out.tile_graph.add_edge(out.tiles[ta].tail_key, out.tiles[tb].tail_key, name);
    }

  // Certificate over interior tiles.
  out.cert_sizes = true;
  out.cert_connected = true;
  out.cert_rho_injective = true;
  out.cert_adjacency = true;
  out.cert_images = true;
  std::map<std::string, int> rho_keys;
  std::vector<int> interior_tiles;
  for (std::size_t t = 0; t < out.tiles.size(); ++t) {
    const auto& tile = out.tiles[t];
    if (!tile.interior) continue;
    ++out.interior_tile_count;
    interior_tiles.push_back(static_cast<int>(t));
    if (Int(static_cast<long>(tile.members.size())) != expected_size) out.cert_sizes = false;
    if (!tile.connected) out.cert_connected = false;
    if (!tile.rho_defined || !tile.rho.has_value()) {
      out.cert_rho_injective = false;
      continue;
    }
    if (!tile.image_checked) out.cert_images = false;
    auto [it, fresh] = rho_keys.emplace(action.key(*tile.rho), static_cast<int>(t));
    if (!fresh) out.cert_rho_injective = false;
  }
  for (std::size_t x = 0; x < interior_tiles.size(); ++x)
    for (std::size_t y = x + 1; y < interior_tiles.size(); ++y) {
      const auto& ta = out.tiles[interior_tiles[x]];
      const auto& tb = out.tiles[interior_tiles[y]];
      if (!ta.rho.has_value() || !tb.rho.has_value()) continue;
      bool by_nucleus = tile_neighbors(action, nuc, *ta.rho, *tb.rho);
      bool by_edges = out.tile_graph.adjacent(ta.tail_key, tb.tail_key);
      if (by_nucleus != by_edges) out.cert_adjacency = false;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary profile by exhaustive enumeration
// ---------------------------------------------------------------------------

struct FolnerProfile {
  int level = 0;
  Int boundary_words;   // words along which some non-identity nucleus element survives
  Int total_words;      // arity^level
  Rat fraction;
};

// Walks every word of the given length through the nucleus transition table,
// one element at a time (no state merging), and counts the words where some
// non-identity element keeps a non-identity restriction.
template <class El>
FolnerProfile folner_profile(const Nucleus<El>& nuc, int arity, int level,
                             std::size_t max_words = (std::size_t{1} << 20)) {
  if (level < 0) throw std::invalid_argument("folner_profile: level must be >= 0");
  Int total = ipow(Int(arity), static_cast<unsigned long>(level));
  if (total > Int(static_cast<unsigned long>(max_words)))
    throw std::runtime_error("folner_profile: word budget exceeded");
  long total_l = to_long(total);
  long boundary = 0;
  std::vector<int> word(static_cast<std::size_t>(level), 0);
  for (long idx = 0; idx < total_l; ++idx) {
    long rem = idx;
    for (int pos = level - 1; pos >= 0; --pos) {
      word[static_cast<std::size_t>(pos)] = static_cast<int>(rem % arity);
      rem /= arity;
    }
    bool survives = false;
    for (std::size_t s = 0; s < nuc.elements.size() && !survives; ++s) {
      if (static_cast<int>(s) == nuc.identity_index) continue;
      int state = static_cast<int>(s);
      for (int pos = 0; pos < level; ++pos)
        state = nuc.section[static_cast<std::size_t>(state)][static_cast<std::size_t>(word[static_cast<std::size_t>(pos)])];
      if (state != nuc.identity_index) survives = true;
    }
    if (survives) ++boundary;
  }
  FolnerProfile out;
  out.level = level;
  out.boundary_words = boundary;
  out.total_words = total;
  out.fraction = Rat(Int(boundary), total);
  return out;
}

// Exact upper bound (N-1) * (1 - t^-ell)^floor(n/ell) for the survival
// probability, valid whenever the open set condition holds with depth ell.
inline Rat boundary_fraction_bound(std::size_t nucleus_size, int arity, std::size_t ell, int n) {
  if (ell == 0) return Rat(0);
  Rat base = Rat(1) - Rat(Int(1), ipow(Int(arity), static_cast<unsigned long>(ell)));
  Rat acc(1);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) / ell; ++i) acc *= base;
  return Rat(Int(static_cast<unsigned long>(nucleus_size - 1))) * acc;
}

}  // namespace selfsim
