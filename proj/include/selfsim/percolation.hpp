#pragma once

// Site percolation on finite boxes of the d-dimensional lattice, built for
// reproducibility:
//   * every site's openness is an exact rational comparison against a keyed
//     64-bit hash (no floating point, no RNG state to share between sites)
//   * clusters come from union-find, with an independent BFS flood fill used
//     as an oracle in the tests
//   * the good-box predicate asks for one cluster spanning all faces while
//     every other cluster stays small
//
// Monotone coupling: raising p with the same seed can only open more sites,
// since each site compares the same hash value against a larger threshold.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/ints.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

struct BoxSpec {
  int d = 2;
  long n = 16;  // sites per side; vertices are [0, n)^d
  long volume() const {
    long v = 1;
    for (int i = 0; i < d; ++i) v *= n;
    return v;
  }
};

struct SiteConfig {
  BoxSpec box;
  std::uint64_t seed = 0;
  Rat p;
  std::vector<bool> open;  // row-major over coordinates, axis 0 fastest
};

inline long box_vertex_id(const BoxSpec& box, const std::vector<long>& coord) {
  long id = 0;
  for (int i = box.d - 1; i >= 0; --i) id = id * box.n + coord[static_cast<std::size_t>(i)];
  return id;
}

inline std::vector<long> box_vertex_coord(const BoxSpec& box, long id) {
  std::vector<long> c(static_cast<std::size_t>(box.d));
  for (int i = 0; i < box.d; ++i) {
    c[static_cast<std::size_t>(i)] = id % box.n;
    id /= box.n;
  }
  return c;
}

// Site v is open iff keyed_u64(seed, v) < p * 2^64, decided exactly.
inline SiteConfig bernoulli_sites(const BoxSpec& box, const Rat& p, std::uint64_t seed) {
  if (p < 0 || p > 1) throw std::invalid_argument("bernoulli_sites: p must lie in [0, 1]");
  SiteConfig cfg;
  cfg.box = box;
  cfg.seed = seed;
  cfg.p = p;
  long vol = box.volume();
  cfg.open.assign(static_cast<std::size_t>(vol), false);
  // threshold = ceil(num * 2^64 / den); open iff hash < threshold (with the
  // p = 1 case always open).
  Int num = rat_num(p), den = rat_den(p);
  Int shifted = num << 64;
  Int thr = (shifted + den - 1) / den;
  bool always = thr > Int("18446744073709551615");
  std::uint64_t thr64 = always ? 0 : static_cast<std::uint64_t>(thr);
  for (long v = 0; v < vol; ++v) {
    std::uint64_t u = keyed_u64(seed, static_cast<std::uint64_t>(v));
    cfg.open[static_cast<std::size_t>(v)] = always || u < thr64;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Clusters
// ---------------------------------------------------------------------------

struct Clusters {
  std::vector<long> label;          // -1 for closed sites; else cluster id
  long count = 0;
  std::vector<long> sizes;          // by cluster id
  std::vector<std::vector<long>> lo, hi;  // per-cluster coordinate bounding box
};

namespace detail {
struct DisjointSet {
  std::vector<long> parent;
  explicit DisjointSet(long n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0L);
  }
  long find(long x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(long a, long b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

template <class F>
void finish_clusters(const SiteConfig& cfg, Clusters& out, F&& root_of) {
  long vol = cfg.box.volume();
  std::map<long, long> relabel;  // root (smallest member id) -> dense id
  out.label.assign(static_cast<std::size_t>(vol), -1);
  for (long v = 0; v < vol; ++v) {
    if (!cfg.open[static_cast<std::size_t>(v)]) continue;
    long root = root_of(v);
    auto [it, fresh] = relabel.emplace(root, static_cast<long>(relabel.size()));
    long id = it->second;
    out.label[static_cast<std::size_t>(v)] = id;
    if (fresh) {
      out.sizes.push_back(0);
      out.lo.emplace_back(static_cast<std::size_t>(cfg.box.d), cfg.box.n);
      out.hi.emplace_back(static_cast<std::size_t>(cfg.box.d), -1L);
    }
    ++out.sizes[static_cast<std::size_t>(id)];
    std::vector<long> c = box_vertex_coord(cfg.box, v);
    for (int i = 0; i < cfg.box.d; ++i) {
      auto ii = static_cast<std::size_t>(i);
      out.lo[static_cast<std::size_t>(id)][ii] = std::min(out.lo[static_cast<std::size_t>(id)][ii], c[ii]);
      out.hi[static_cast<std::size_t>(id)][ii] = std::max(out.hi[static_cast<std::size_t>(id)][ii], c[ii]);
    }
  }
  out.count = static_cast<long>(relabel.size());
}
}  // namespace detail

inline Clusters clusters_union_find(const SiteConfig& cfg) {
  long vol = cfg.box.volume();
  detail::DisjointSet dsu(vol);
  for (long v = 0; v < vol; ++v) {
    if (!cfg.open[static_cast<std::size_t>(v)]) continue;
    std::vector<long> c = box_vertex_coord(cfg.box, v);
    for (int i = 0; i < cfg.box.d; ++i) {
      if (c[static_cast<std::size_t>(i)] + 1 >= cfg.box.n) continue;
      std::vector<long> c2 = c;
      ++c2[static_cast<std::size_t>(i)];
      long w = box_vertex_id(cfg.box, c2);
      if (cfg.open[static_cast<std::size_t>(w)]) dsu.unite(v, w);
    }
  }
  Clusters out;
  detail::finish_clusters(cfg, out, [&dsu](long v) { return dsu.find(v); });
  return out;
}

// Independent route: breadth-first flood fill.
inline Clusters clusters_bfs(const SiteConfig& cfg) {
  long vol = cfg.box.volume();
  std::vector<long> root(static_cast<std::size_t>(vol), -1);
  for (long v = 0; v < vol; ++v) {
    if (!cfg.open[static_cast<std::size_t>(v)] || root[static_cast<std::size_t>(v)] >= 0) continue;
    std::vector<long> queue{v};
    root[static_cast<std::size_t>(v)] = v;
    std::size_t head = 0;
    while (head < queue.size()) {
      long cur = queue[head++];
      std::vector<long> c = box_vertex_coord(cfg.box, cur);
      for (int i = 0; i < cfg.box.d; ++i)
        for (int dirn = -1; dirn <= 1; dirn += 2) {
          long x = c[static_cast<std::size_t>(i)] + dirn;
          if (x < 0 || x >= cfg.box.n) continue;
          std::vector<long> c2 = c;
          c2[static_cast<std::size_t>(i)] = x;
          long w = box_vertex_id(cfg.box, c2);
          if (!cfg.open[static_cast<std::size_t>(w)] || root[static_cast<std::size_t>(w)] >= 0) continue;
          root[static_cast<std::size_t>(w)] = v;
          queue.push_back(w);
        }
    }
  }
  Clusters out;
  detail::finish_clusters(cfg, out, [&root](long v) { return root[static_cast<std::size_t>(v)]; });
  return out;
}

// ---------------------------------------------------------------------------
// Good boxes and profiles
// ---------------------------------------------------------------------------

struct GoodBoxReport {
  bool crossing_exists = false;  // one cluster touches all 2d faces
  bool others_small = false;     // every other cluster has extent <= eps * n
  long crossing_cluster = -1;
  long largest = 0, second = 0;  // top two cluster sizes
  bool good() const { return crossing_exists && others_small; }
};

inline GoodBoxReport good_box(const SiteConfig& cfg, const Clusters& cl, const Rat& eps) {
  GoodBoxReport rep;
  std::vector<long> order(static_cast<std::size_t>(cl.count));
  std::iota(order.begin(), order.end(), 0L);
  std::sort(order.begin(), order.end(),
            [&cl](long a, long b) { return cl.sizes[static_cast<std::size_t>(a)] > cl.sizes[static_cast<std::size_t>(b)]; });
  if (!order.empty()) rep.largest = cl.sizes[static_cast<std::size_t>(order[0])];
  if (order.size() > 1) rep.second = cl.sizes[static_cast<std::size_t>(order[1])];

  for (long id = 0; id < cl.count; ++id) {
    bool touches_all = true;
    for (int i = 0; i < cfg.box.d && touches_all; ++i) {
      if (cl.lo[static_cast<std::size_t>(id)][static_cast<std::size_t>(i)] != 0) touches_all = false;
      if (cl.hi[static_cast<std::size_t>(id)][static_cast<std::size_t>(i)] != cfg.box.n - 1) touches_all = false;
    }
    if (touches_all) {
      if (rep.crossing_exists) {
        // two all-face clusters: the box cannot be good
        rep.crossing_exists = false;
        rep.crossing_cluster = -1;
        break;
      }
      rep.crossing_exists = true;
      rep.crossing_cluster = id;
    }
  }

  rep.others_small = true;
  Int eps_num = rat_num(eps), eps_den = rat_den(eps);
  for (long id = 0; id < cl.count; ++id) {
    if (id == rep.crossing_cluster) continue;
    long extent = 0;
    for (int i = 0; i < cfg.box.d; ++i)
      extent = std::max(extent, cl.hi[static_cast<std::size_t>(id)][static_cast<std::size_t>(i)] -
                                    cl.lo[static_cast<std::size_t>(id)][static_cast<std::size_t>(i)]);
    // require extent <= eps * n, exactly
    if (Int(extent) * eps_den > eps_num * Int(cfg.box.n)) rep.others_small = false;
  }
  return rep;
}

inline std::uint64_t trial_seed(std::uint64_t master, long n, long trial) {
  return keyed_u64(keyed_u64(master, static_cast<std::uint64_t>(n)),
                   static_cast<std::uint64_t>(trial));
}

struct RenormalizationTrial {
  long trial = 0;
  std::uint64_t seed = 0;
  bool good = false;
  long largest = 0, second = 0;
};

struct RenormalizationProfile {
  BoxSpec box;
  Rat p, eps;
  long trials = 0;
  long good_count = 0;
  std::vector<RenormalizationTrial> rows;
  Rat good_fraction() const { return trials == 0 ? Rat(0) : Rat(Int(good_count), Int(trials)); }
};

inline RenormalizationProfile renormalization_profile(const BoxSpec& box, const Rat& p,
                                                      const Rat& eps, long trials,
                                                      std::uint64_t master_seed) {
  RenormalizationProfile prof;
  prof.box = box;
  prof.p = p;
  prof.eps = eps;
  prof.trials = trials;
  for (long i = 1; i <= trials; ++i) {
    RenormalizationTrial row;
    row.trial = i;
    row.seed = trial_seed(master_seed, box.n, i);
    SiteConfig cfg = bernoulli_sites(box, p, row.seed);
    Clusters cl = clusters_union_find(cfg);
    GoodBoxReport rep = good_box(cfg, cl, eps);
    row.good = rep.good();
    row.largest = rep.largest;
    row.second = rep.second;
    if (row.good) ++prof.good_count;
    prof.rows.push_back(row);
  }
  return prof;
}

// Median of the top-two cluster sizes across trials, per box size; the ratio
// second/largest collapsing with n is the uniqueness signal.
struct GiantProfileRow {
  long n = 0;
  long median_largest = 0;
  long median_second = 0;
};

inline std::vector<GiantProfileRow> unique_giant_profile(int d, const std::vector<long>& ns,
                                                         const Rat& p, long trials,
                                                         std::uint64_t master_seed) {
  std::vector<GiantProfileRow> out;
  for (long n : ns) {
    std::vector<long> firsts, seconds;
    for (long i = 1; i <= trials; ++i) {
      BoxSpec box{d, n};
      SiteConfig cfg = bernoulli_sites(box, p, trial_seed(master_seed, n, i));
      Clusters cl = clusters_union_find(cfg);
      GoodBoxReport rep = good_box(cfg, cl, Rat(1));
      firsts.push_back(rep.largest);
      seconds.push_back(rep.second);
    }
    std::sort(firsts.begin(), firsts.end());
    std::sort(seconds.begin(), seconds.end());
    GiantProfileRow row;
    row.n = n;
    row.median_largest = firsts[firsts.size() / 2];
    row.median_second = seconds[seconds.size() / 2];
    out.push_back(row);
  }
  return out;
}

}  // namespace selfsim
