#pragma once

// Contracting-action machinery. The nucleus of a self-similar action is the
// smallest inverse- and restriction-closed set N containing the identity
// such that for every pair g, h in N all sufficiently deep restrictions of
// g*h lie in N again.
//
// The computation tracks, for a product p, the set omega(p) of elements that
// occur in arbitrarily deep restrictions of p: these are exactly the states
// reachable from a directed cycle in p's restriction digraph. Saturating a
// candidate set under p |-> omega(p) over all pairs yields the nucleus; a
// growth budget turns genuine non-contraction into a typed verdict with a
// witness cycle instead of a hang.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/ints.hpp"
#include "selfsim/tree.hpp"

namespace selfsim {

struct NucleusOptions {
  std::size_t max_elements = 10000;  // candidate-set growth cap
  std::size_t max_depth = 64;        // per-pair absorption depth cap
};

template <class El>
struct NotContractingEvidence {
  std::size_t elements_reached = 0;
  std::string reason;
  std::vector<El> witness_cycle;            // restriction cycle that refuses to shrink
  std::vector<std::size_t> witness_sizes;   // size proxy per cycle element
};

template <class El>
struct Nucleus {
  std::vector<El> elements;                     // sorted by key
  std::vector<std::string> keys;
  int identity_index = -1;
  std::vector<std::vector<int>> letter_image;   // [state][letter] -> image letter
  std::vector<std::vector<int>> section;        // [state][letter] -> state of restriction
  std::map<std::string, int> index_of;

  int size() const { return static_cast<int>(elements.size()); }

  int find(const std::string& key) const {
    auto it = index_of.find(key);
    return it == index_of.end() ? -1 : it->second;
  }
};

template <class El>
struct ContractionReport {
  bool contracting = false;
  Nucleus<El> nucleus;
  std::map<std::pair<int, int>, std::size_t> pair_depth;   // absorption certificate
  std::map<int, std::pair<int, int>> witness_pair;         // x in omega(g*h): minimality
  NotContractingEvidence<El> evidence;                     // set when !contracting
};

namespace detail {

// Restriction digraph of a single element, explored breadth-first with a cap.
template <TreeAction A>
struct Descendants {
  std::vector<typename A::Element> nodes;
  std::map<std::string, int> index;
  std::vector<std::vector<int>> out;  // out[n][letter] = node index
  bool overflow = false;
  std::vector<int> overflow_path;  // node chain from the root when overflowing
};

template <TreeAction A>
Descendants<A> explore_descendants(const A& a, const typename A::Element& p,
                                   std::size_t max_nodes) {
  Descendants<A> d;
  std::vector<int> parent;
  auto intern = [&](const typename A::Element& e) {
    std::string k = a.key(e);
    auto it = d.index.find(k);
    if (it != d.index.end()) return it->second;
    int id = static_cast<int>(d.nodes.size());
    d.nodes.push_back(e);
    d.index.emplace(std::move(k), id);
    d.out.emplace_back();
    parent.push_back(-1);
    return id;
  };
  intern(p);
  for (std::size_t head = 0; head < d.nodes.size(); ++head) {
    d.out[head].resize(static_cast<std::size_t>(a.arity()), -1);
    for (int i = 0; i < a.arity(); ++i) {
      auto [img, rest] = a.act_letter(d.nodes[head], i);
      (void)img;
      std::size_t before = d.nodes.size();
      int id = intern(rest);
      if (d.nodes.size() > before && parent[static_cast<std::size_t>(id)] == -1)
        parent[static_cast<std::size_t>(id)] = static_cast<int>(head);
      d.out[head][static_cast<std::size_t>(i)] = id;
      if (d.nodes.size() > max_nodes) {
        d.overflow = true;
        for (int n = id; n != -1; n = parent[static_cast<std::size_t>(n)])
          d.overflow_path.push_back(n);
        std::reverse(d.overflow_path.begin(), d.overflow_path.end());
        return d;
      }
    }
  }
  return d;
}

// States of the digraph lying on or reachable from a directed cycle.
template <TreeAction A>
std::vector<int> recurrent_reachable(const Descendants<A>& d) {
  int n = static_cast<int>(d.nodes.size());
  // Tarjan strongly connected components, iterative.
  std::vector<int> indexv(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
      comp(static_cast<std::size_t>(n), -1);
  std::vector<bool> onstack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  int counter = 0, ncomp = 0;
  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (indexv[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    indexv[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    onstack[static_cast<std::size_t>(root)] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < d.out[static_cast<std::size_t>(f.v)].size()) {
        int w = d.out[static_cast<std::size_t>(f.v)][f.edge++];
        if (w < 0) continue;
        if (indexv[static_cast<std::size_t>(w)] == -1) {
          indexv[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
          stack.push_back(w);
          onstack[static_cast<std::size_t>(w)] = true;
          call.push_back({w, 0});
        } else if (onstack[static_cast<std::size_t>(w)]) {
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], indexv[static_cast<std::size_t>(w)]);
        }
      } else {
        int v = f.v;
        call.pop_back();
        if (!call.empty())
          low[static_cast<std::size_t>(call.back().v)] =
              std::min(low[static_cast<std::size_t>(call.back().v)], low[static_cast<std::size_t>(v)]);
        if (low[static_cast<std::size_t>(v)] == indexv[static_cast<std::size_t>(v)]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            onstack[static_cast<std::size_t>(w)] = false;
            comp[static_cast<std::size_t>(w)] = ncomp;
            if (w == v) break;
          }
          ++ncomp;
        }
      }
    }
  }
  std::vector<int> comp_size(static_cast<std::size_t>(ncomp), 0);
  for (int v = 0; v < n; ++v) ++comp_size[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])];
  std::vector<bool> recurrent(static_cast<std::size_t>(n), false);
  for (int v = 0; v < n; ++v) {
    if (comp_size[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] > 1) {
      recurrent[static_cast<std::size_t>(v)] = true;
      continue;
    }
    for (int w : d.out[static_cast<std::size_t>(v)])
      if (w == v) recurrent[static_cast<std::size_t>(v)] = true;
  }
  // forward closure from recurrent states
  std::vector<int> result;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> frontier;
  for (int v = 0; v < n; ++v)
    if (recurrent[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = true;
      frontier.push_back(v);
    }
  while (!frontier.empty()) {
    int v = frontier.back();
    frontier.pop_back();
    result.push_back(v);
    for (int w : d.out[static_cast<std::size_t>(v)])
      if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        frontier.push_back(w);
      }
  }
  std::sort(result.begin(), result.end());
  return result;
}

// Extract one directed cycle from the descendant digraph restricted to its
// recurrent part; used as non-contraction evidence.
template <TreeAction A>
std::vector<typename A::Element> extract_cycle(const A& a, const Descendants<A>& d) {
  std::vector<int> rr = recurrent_reachable(d);
  std::set<int> rset(rr.begin(), rr.end());
  if (rr.empty()) return {};
  // walk within the recurrent set until a state repeats
  int cur = rr.front();
  std::map<int, std::size_t> visited;
  std::vector<int> path;
  while (!visited.count(cur)) {
    visited[cur] = path.size();
    path.push_back(cur);
    int next = -1;
    for (int w : d.out[static_cast<std::size_t>(cur)])
      if (w >= 0 && rset.count(w)) {
        next = w;
        break;
      }
    if (next == -1) break;
    cur = next;
  }
  std::vector<typename A::Element> cycle;
  if (visited.count(cur)) {
    for (std::size_t i = visited[cur]; i < path.size(); ++i)
      cycle.push_back(d.nodes[static_cast<std::size_t>(path[static_cast<std::size_t>(i)])]);
  }
  return cycle;
}

}  // namespace detail

// Inverse- and restriction-closure of the generating set plus identity.
// Returns std::nullopt when the closure exceeds the cap.
template <TreeAction A>
std::optional<std::vector<typename A::Element>> restriction_closure(
    const A& a, const std::vector<typename A::Element>& seeds, std::size_t max_elements = 10000) {
  using El = typename A::Element;
  std::vector<El> elems;
  std::map<std::string, int> index;
  auto intern = [&](const El& e) -> bool {  // true if new
    std::string k = a.key(e);
    if (index.count(k)) return false;
    index.emplace(std::move(k), static_cast<int>(elems.size()));
    elems.push_back(e);
    return true;
  };
  intern(a.identity());
  for (const El& s : seeds) {
    intern(s);
    intern(a.inv(s));
  }
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (int i = 0; i < a.arity(); ++i) {
      auto [img, rest] = a.act_letter(elems[head], i);
      (void)img;
      intern(rest);
      if (elems.size() > max_elements) return std::nullopt;
    }
  }
  return elems;
}

template <TreeAction A>
ContractionReport<typename A::Element> compute_nucleus(
    const A& a, const std::vector<typename A::Element>& generators, NucleusOptions opt = {},
    std::function<std::size_t(const typename A::Element&)> size_hint = {}) {
  using El = typename A::Element;
  ContractionReport<El> rep;
  if (!size_hint) size_hint = [&a](const El& e) { return a.key(e).size(); };

  auto fail = [&](const std::string& reason, std::size_t reached,
                  const std::vector<El>& cycle) {
    rep.contracting = false;
    rep.evidence.reason = reason;
    rep.evidence.elements_reached = reached;
    rep.evidence.witness_cycle = cycle;
    for (const El& e : cycle) rep.evidence.witness_sizes.push_back(size_hint(e));
    return rep;
  };

  // Phase 1: closed candidate set from the generators.
  auto closure = restriction_closure(a, generators, opt.max_elements);
  if (!closure) {
    return fail("restriction closure of the generating set exceeded the element budget",
                opt.max_elements, {});
  }
  std::vector<El> cand = *closure;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < cand.size(); ++i) index.emplace(a.key(cand[i]), static_cast<int>(i));

  auto add_element = [&](const El& e) -> bool {
    std::string k = a.key(e);
    if (index.count(k)) return false;
    index.emplace(std::move(k), static_cast<int>(cand.size()));
    cand.push_back(e);
    return true;
  };

  // Phase 2: saturate under omega(g*h) for all pairs, processing each pair
  // once (new elements enqueue their pairs).
  std::size_t gi = 0;
  for (std::size_t lo = 0; lo < cand.size(); lo = gi) {
    gi = cand.size();
    std::size_t hi = cand.size();
    for (std::size_t x = 0; x < hi; ++x) {
      // pair (x, y) with max(x, y) >= lo ensures each unordered-ordered pair
      // is seen exactly once across rounds
      for (std::size_t y = (x >= lo ? 0 : lo); y < hi; ++y) {
        El p = a.mul(cand[x], cand[y]);
        auto d = detail::explore_descendants(a, p, opt.max_elements);
        if (d.overflow) {
          std::vector<El> chain;
          for (int nidx : d.overflow_path) chain.push_back(d.nodes[static_cast<std::size_t>(nidx)]);
          return fail("restriction digraph of a product exceeded the element budget",
                      cand.size(), chain);
        }
        for (int nidx : detail::recurrent_reachable(d)) {
          if (add_element(d.nodes[static_cast<std::size_t>(nidx)]) &&
              cand.size() > opt.max_elements) {
            auto cycle = detail::extract_cycle(a, d);
            return fail("candidate nucleus exceeded the element budget", cand.size(), cycle);
          }
        }
      }
    }
  }

  // Phase 3: shrink to the recurrent core: keep exactly the elements arising
  // as omega of a pair product, iterating until stable (the set decreases).
  std::set<std::string> core;
  for (const El& e : cand) core.insert(a.key(e));
  std::map<int, std::pair<int, int>> witness;  // candidate index -> pair
  while (true) {
    std::set<std::string> next;
    std::map<int, std::pair<int, int>> wnext;
    std::vector<int> live;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (core.count(a.key(cand[i]))) live.push_back(static_cast<int>(i));
    for (int x : live)
      for (int y : live) {
        El p = a.mul(cand[static_cast<std::size_t>(x)], cand[static_cast<std::size_t>(y)]);
        auto d = detail::explore_descendants(a, p, opt.max_elements);
        if (d.overflow)
          return fail("restriction digraph of a product exceeded the element budget",
                      cand.size(), {});
        for (int nidx : detail::recurrent_reachable(d)) {
          const El& e = d.nodes[static_cast<std::size_t>(nidx)];
          std::string k = a.key(e);
          auto it = index.find(k);
          if (it == index.end())
            throw std::logic_error("compute_nucleus: saturation missed an element");
          if (next.insert(k).second) wnext.emplace(it->second, std::make_pair(x, y));
        }
      }
    if (next == core) {
      witness = std::move(wnext);
      break;
    }
    core = std::move(next);
  }

  // Assemble the nucleus sorted by key for deterministic reports.
  Nucleus<El>& nuc = rep.nucleus;
  std::vector<std::pair<std::string, int>> sorted;
  for (const auto& [k, i] : index)
    if (core.count(k)) sorted.emplace_back(k, i);
  std::sort(sorted.begin(), sorted.end());
  std::map<int, int> old_to_new;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    nuc.keys.push_back(sorted[i].first);
    nuc.elements.push_back(cand[static_cast<std::size_t>(sorted[i].second)]);
    nuc.index_of.emplace(sorted[i].first, static_cast<int>(i));
    old_to_new[sorted[i].second] = static_cast<int>(i);
    if (a.is_identity(nuc.elements.back())) nuc.identity_index = static_cast<int>(i);
  }
  if (nuc.identity_index < 0) throw std::logic_error("compute_nucleus: identity missing from core");
  for (const auto& [idx, pair] : witness)
    rep.witness_pair.emplace(old_to_new.at(idx),
                             std::make_pair(old_to_new.at(pair.first), old_to_new.at(pair.second)));

  nuc.letter_image.resize(nuc.elements.size());
  nuc.section.resize(nuc.elements.size());
  for (std::size_t i = 0; i < nuc.elements.size(); ++i) {
    nuc.letter_image[i].resize(static_cast<std::size_t>(a.arity()));
    nuc.section[i].resize(static_cast<std::size_t>(a.arity()));
    for (int l = 0; l < a.arity(); ++l) {
      auto [img, rest] = a.act_letter(nuc.elements[i], l);
      nuc.letter_image[i][static_cast<std::size_t>(l)] = img;
      int j = nuc.find(a.key(rest));
      if (j < 0) throw std::logic_error("compute_nucleus: core is not restriction-closed");
      nuc.section[i][static_cast<std::size_t>(l)] = j;
    }
  }

  // Per-pair absorption certificates: depth after which every restriction of
  // the product lies in the nucleus.
  for (int x = 0; x < nuc.size(); ++x)
    for (int y = 0; y < nuc.size(); ++y) {
      El p = a.mul(nuc.elements[static_cast<std::size_t>(x)], nuc.elements[static_cast<std::size_t>(y)]);
      std::vector<El> level{p};
      std::size_t depth = 0;
      while (depth <= opt.max_depth) {
        bool all_in = true;
        for (const El& e : level)
          if (nuc.find(a.key(e)) < 0) {
            all_in = false;
            break;
          }
        if (all_in) break;
        std::vector<El> nxt;
        std::map<std::string, bool> seen;
        for (const El& e : level)
          for (int l = 0; l < a.arity(); ++l) {
            auto [img, rest] = a.act_letter(e, l);
            (void)img;
            std::string k = a.key(rest);
            if (!seen.emplace(std::move(k), true).second) continue;
            nxt.push_back(rest);
          }
        level = std::move(nxt);
        ++depth;
      }
      if (depth > opt.max_depth)
        return fail("pair absorption exceeded the depth budget", cand.size(), {});
      rep.pair_depth.emplace(std::make_pair(x, y), depth);
    }

  rep.contracting = true;
  return rep;
}

// ---- Moore diagram conveniences -------------------------------------------

// Shortest witness words v with g|_v = identity, when they exist for every
// state ("open set condition"). The bound ell is the longest witness needed.
template <class El>
struct OpenSetReport {
  bool holds = false;
  std::size_t ell = 0;
  std::vector<std::optional<TreeWord>> witness;  // per nucleus state
};

template <class El>
OpenSetReport<El> open_set_condition(const Nucleus<El>& nuc) {
  OpenSetReport<El> rep;
  int n = nuc.size();
  int t = n > 0 ? static_cast<int>(nuc.section[0].size()) : 0;
  std::vector<long> dist(static_cast<std::size_t>(n), -1);
  std::vector<std::pair<int, int>> back(static_cast<std::size_t>(n), {-1, -1});  // (prev state, letter)
  // reverse BFS from the identity along section edges
  std::vector<std::vector<std::pair<int, int>>> rev(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    for (int l = 0; l < t; ++l)
      rev[static_cast<std::size_t>(nuc.section[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)])]
          .emplace_back(s, l);
  std::vector<int> q{nuc.identity_index};
  dist[static_cast<std::size_t>(nuc.identity_index)] = 0;
  for (std::size_t head = 0; head < q.size(); ++head) {
    int v = q[head];
    for (auto [u, l] : rev[static_cast<std::size_t>(v)])
      if (dist[static_cast<std::size_t>(u)] < 0) {
        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
        back[static_cast<std::size_t>(u)] = {v, l};
        q.push_back(u);
      }
  }
  rep.witness.resize(static_cast<std::size_t>(n));
  rep.holds = true;
  for (int s = 0; s < n; ++s) {
    if (dist[static_cast<std::size_t>(s)] < 0) {
      rep.holds = false;
      continue;
    }
    TreeWord w;
    int cur = s;
    while (cur != nuc.identity_index) {
      auto [prev, l] = back[static_cast<std::size_t>(cur)];
      // back stores, for state u, the pair (v, l) with section(u, l) = v
      w.push_back(l);
      cur = prev;
    }
    rep.witness[static_cast<std::size_t>(s)] = w;
    rep.ell = std::max(rep.ell, w.size());
  }
  return rep;
}

// ---- exact survival probability --------------------------------------------

// Probability that a uniform random length-n word leaves some non-identity
// nucleus element with a non-identity restriction. Exact rational output via
// a dynamic program over subsets of nucleus states.
template <class El>
Rat nontrivial_restriction_probability(const Nucleus<El>& nuc, std::size_t n,
                                       std::size_t max_states = 1 << 20) {
  int t = nuc.size() > 0 ? static_cast<int>(nuc.section[0].size()) : 0;
  std::vector<int> start;
  for (int s = 0; s < nuc.size(); ++s)
    if (s != nuc.identity_index) start.push_back(s);
  auto key_of = [](const std::vector<int>& v) {
    std::string k;
    for (int s : v) k += std::to_string(s) + ",";
    return k;
  };
  std::map<std::string, std::pair<std::vector<int>, Int>> cur;
  cur.emplace(key_of(start), std::make_pair(start, Int(1)));
  Int dead = 0;  // words whose surviving set is empty
  for (std::size_t step = 0; step < n; ++step) {
    std::map<std::string, std::pair<std::vector<int>, Int>> nxt;
    for (const auto& [k, entry] : cur) {
      const auto& [states, count] = entry;
      for (int l = 0; l < t; ++l) {
        std::set<int> img;
        for (int s : states) {
          int r = nuc.section[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)];
          if (r != nuc.identity_index) img.insert(r);
        }
        if (img.empty()) {
          dead += count * ipow(Int(t), Int(n - step - 1));
          continue;
        }
        std::vector<int> v(img.begin(), img.end());
        std::string nk = key_of(v);
        auto it = nxt.find(nk);
        if (it == nxt.end())
          nxt.emplace(std::move(nk), std::make_pair(std::move(v), count));
        else
          it->second.second += count;
        if (nxt.size() > max_states)
          throw std::runtime_error("nontrivial_restriction_probability: state budget exceeded");
      }
    }
    cur = std::move(nxt);
  }
  Int alive = 0;
  for (const auto& [k, entry] : cur) alive += entry.second;
  Int total = ipow(Int(t), Int(n));
  if (alive + dead != total)
    throw std::logic_error("nontrivial_restriction_probability: count mismatch");
  return Rat(alive) / Rat(total);
}

}  // namespace selfsim
