#pragma once

// Actions on the rooted t-ary tree. Words over the alphabet {0..t-1} label
// vertices; group elements act on the right (w^(g*h) = (w^g)^h). An action
// is described by one primitive: act_letter(g, i) -> (i^g, g|_i), the image
// of the first letter together with the restriction that acts on the rest.
//
// Two realizations are provided:
//  * EndoAction — induced by a finite-index self-embedding (GroupSpec):
//    letters are cosets of phi(G), and g sends the coset of t_i * g' to the
//    coset of t_i * g' * g, descending through psi.
//  * RecursionAction — defined by an explicit wreath table on a generating
//    set plus a factorization of arbitrary elements into those generators.

#include <algorithm>
#include <concepts>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "selfsim/group_spec.hpp"
#include "selfsim/ints.hpp"

namespace selfsim {

template <class El>
struct WreathDatum {
  std::vector<int> perm;    // perm[i] = image of input letter i
  std::vector<El> sections; // sections[i] = restriction at input letter i
};

template <class A>
concept TreeAction = requires(const A& a, const typename A::Element& g, int i) {
  typename A::Element;
  { a.arity() } -> std::convertible_to<int>;
  { a.act_letter(g, i) } -> std::convertible_to<std::pair<int, typename A::Element>>;
  { a.identity() } -> std::convertible_to<typename A::Element>;
  { a.mul(g, g) } -> std::convertible_to<typename A::Element>;
  { a.inv(g) } -> std::convertible_to<typename A::Element>;
  { a.is_identity(g) } -> std::convertible_to<bool>;
  { a.key(g) } -> std::convertible_to<std::string>;
};

// ---- wreath algebra ------------------------------------------------------

// datum of g*h from data of g and h: i^(gh) = (i^g)^h, (gh)|_i = g|_i * h|_(i^g).
template <GroupFamily G>
WreathDatum<typename G::Element> wreath_mul(const G& g, const WreathDatum<typename G::Element>& a,
                                            const WreathDatum<typename G::Element>& b) {
  int t = static_cast<int>(a.perm.size());
  WreathDatum<typename G::Element> r;
  r.perm.resize(t);
  r.sections.reserve(t);
  for (int i = 0; i < t; ++i) {
    int ia = a.perm[static_cast<std::size_t>(i)];
    r.perm[static_cast<std::size_t>(i)] = b.perm[static_cast<std::size_t>(ia)];
    r.sections.push_back(g.mul(a.sections[static_cast<std::size_t>(i)],
                               b.sections[static_cast<std::size_t>(ia)]));
  }
  return r;
}

template <GroupFamily G>
WreathDatum<typename G::Element> wreath_inv(const G& g, const WreathDatum<typename G::Element>& a) {
  int t = static_cast<int>(a.perm.size());
  WreathDatum<typename G::Element> r;
  r.perm.assign(static_cast<std::size_t>(t), 0);
  r.sections.assign(static_cast<std::size_t>(t), g.identity());
  for (int i = 0; i < t; ++i) {
    int j = a.perm[static_cast<std::size_t>(i)];
    r.perm[static_cast<std::size_t>(j)] = i;
    r.sections[static_cast<std::size_t>(j)] = g.inv(a.sections[static_cast<std::size_t>(i)]);
  }
  return r;
}

template <GroupFamily G>
WreathDatum<typename G::Element> wreath_identity(const G& g, int t) {
  WreathDatum<typename G::Element> r;
  r.perm.resize(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) r.perm[static_cast<std::size_t>(i)] = i;
  r.sections.assign(static_cast<std::size_t>(t), g.identity());
  return r;
}

template <GroupFamily G>
WreathDatum<typename G::Element> wreath_pow(const G& g, const WreathDatum<typename G::Element>& a,
                                            const Int& e) {
  WreathDatum<typename G::Element> base = e < 0 ? wreath_inv(g, a) : a;
  Int k = e < 0 ? Int(-e) : e;
  WreathDatum<typename G::Element> acc = wreath_identity<G>(g, static_cast<int>(a.perm.size()));
  while (k > 0) {
    if ((k & 1) != 0) acc = wreath_mul(g, acc, base);
    base = wreath_mul(g, base, base);
    k >>= 1;
  }
  return acc;
}

// ---- coset-induced action ------------------------------------------------

template <GroupFamily G>
class EndoAction {
 public:
  using Element = typename G::Element;
  using El = Element;

  explicit EndoAction(GroupSpec<G> spec) : spec_(std::move(spec)) {
    if (static_cast<int>(spec_.transversal.size()) != spec_.arity)
      throw std::invalid_argument("EndoAction: transversal must list one representative per letter");
  }

  int arity() const { return spec_.arity; }
  El identity() const { return spec_.group.identity(); }
  El mul(const El& a, const El& b) const { return spec_.group.mul(a, b); }
  El inv(const El& a) const { return spec_.group.inv(a); }
  bool is_identity(const El& a) const { return spec_.group.is_identity(a); }
  std::string key(const El& a) const { return spec_.group.key(a); }

  std::pair<int, El> act_letter(const El& g, int i) const {
    const G& gr = spec_.group;
    El p = gr.mul(spec_.transversal[static_cast<std::size_t>(i)], g);
    std::optional<std::pair<int, El>> found;
    for (int j = 0; j < spec_.arity; ++j) {
      El q = gr.mul(p, gr.inv(spec_.transversal[static_cast<std::size_t>(j)]));
      if (spec_.member(q)) {
        auto h = spec_.psi(q);
        if (!h) throw std::logic_error("EndoAction: member accepted but psi failed");
        if (found) throw std::logic_error("EndoAction: two letters matched one coset");
        found = {j, *h};
      }
    }
    if (!found) throw std::logic_error("EndoAction: no letter matched the image coset");
    return *found;
  }

  const GroupSpec<G>& spec() const { return spec_; }

 private:
  GroupSpec<G> spec_;
};

// ---- recursion-defined action --------------------------------------------

template <GroupFamily G>
class RecursionAction {
 public:
  using Element = typename G::Element;
  using El = Element;
  using Factorizer = std::function<std::vector<std::pair<std::string, Int>>(const El&)>;

  struct Seed {
    std::string name;
    El element;
    WreathDatum<El> datum;
  };

  RecursionAction(G group, int arity, std::vector<Seed> seeds, Factorizer factorize)
      : group_(std::move(group)), arity_(arity), factorize_(std::move(factorize)) {
    for (Seed& s : seeds) {
      if (static_cast<int>(s.datum.perm.size()) != arity_ ||
          static_cast<int>(s.datum.sections.size()) != arity_)
        throw std::invalid_argument("RecursionAction: datum arity mismatch for " + s.name);
      table_.emplace(s.name, std::move(s.datum));
      named_.emplace_back(s.name, s.element);
    }
  }

  // Register a further named generator whose datum is derived from already
  // registered ones through a defining word.
  void derive(const std::string& name, const El& element, const std::string& word) {
    WreathDatum<El> acc = wreath_identity<G>(group_, arity_);
    for (const WordFactor& f : parse_word(word)) {
      auto it = table_.find(f.name);
      if (it == table_.end()) throw std::invalid_argument("derive: unknown name " + f.name);
      acc = wreath_mul(group_, acc, wreath_pow(group_, it->second, Int(f.exponent)));
    }
    table_.emplace(name, std::move(acc));
    named_.emplace_back(name, element);
  }

  int arity() const { return arity_; }
  El identity() const { return group_.identity(); }
  El mul(const El& a, const El& b) const { return group_.mul(a, b); }
  El inv(const El& a) const { return group_.inv(a); }
  bool is_identity(const El& a) const { return group_.is_identity(a); }
  std::string key(const El& a) const { return group_.key(a); }
  const G& group() const { return group_; }
  const std::vector<std::pair<std::string, El>>& named_elements() const { return named_; }

  const WreathDatum<El>& datum(const El& g) const {
    std::string k = group_.key(g);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    WreathDatum<El> acc = wreath_identity<G>(group_, arity_);
    for (const auto& [name, e] : factorize_(g)) {
      auto ti = table_.find(name);
      if (ti == table_.end())
        throw std::logic_error("RecursionAction: factorization uses unknown generator " + name);
      acc = wreath_mul(group_, acc, wreath_pow(group_, ti->second, e));
    }
    return memo_.emplace(std::move(k), std::move(acc)).first->second;
  }

  std::pair<int, El> act_letter(const El& g, int i) const {
    const WreathDatum<El>& d = datum(g);
    return {d.perm[static_cast<std::size_t>(i)], d.sections[static_cast<std::size_t>(i)]};
  }

 private:
  G group_;
  int arity_;
  std::vector<std::pair<std::string, El>> named_;
  std::map<std::string, WreathDatum<El>> table_;
  Factorizer factorize_;
  mutable std::map<std::string, WreathDatum<El>> memo_;
};

// ---- vertex words and boundary rays ---------------------------------------

using TreeWord = std::vector<int>;

template <TreeAction A>
std::pair<TreeWord, typename A::Element> act_word_with_restriction(const A& a,
                                                                   const typename A::Element& g,
                                                                   const TreeWord& w) {
  TreeWord out;
  out.reserve(w.size());
  typename A::Element cur = g;
  for (int letter : w) {
    auto [img, rest] = a.act_letter(cur, letter);
    out.push_back(img);
    cur = rest;
  }
  return {out, cur};
}

template <TreeAction A>
TreeWord act_word(const A& a, const typename A::Element& g, const TreeWord& w) {
  return act_word_with_restriction(a, g, w).first;
}

template <TreeAction A>
typename A::Element restriction(const A& a, const typename A::Element& g, const TreeWord& w) {
  return act_word_with_restriction(a, g, w).second;
}

template <TreeAction A>
WreathDatum<typename A::Element> wreath_recursion(const A& a, const typename A::Element& g) {
  WreathDatum<typename A::Element> d;
  int t = a.arity();
  d.perm.resize(static_cast<std::size_t>(t));
  d.sections.reserve(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) {
    auto [img, rest] = a.act_letter(g, i);
    d.perm[static_cast<std::size_t>(i)] = img;
    d.sections.push_back(rest);
  }
  return d;
}

// Eventually periodic boundary ray, kept in canonical form: the period block
// is primitive and the preperiod is minimal (its last letter differs from the
// corresponding letter of the rotated period).
struct Ray {
  std::vector<int> pre;
  std::vector<int> period;  // nonempty

  bool operator==(const Ray& o) const { return pre == o.pre && period == o.period; }
  bool operator!=(const Ray& o) const { return !(*this == o); }
};

inline Ray canonical_ray(std::vector<int> pre, std::vector<int> period) {
  if (period.empty()) throw std::invalid_argument("ray period must be nonempty");
  // primitive period
  std::size_t n = period.size();
  for (std::size_t d = 1; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    bool rep = true;
    for (std::size_t i = d; i < n && rep; ++i) rep = period[i] == period[i - d];
    if (rep) {
      period.resize(d);
      n = d;
      break;
    }
  }
  // minimal preperiod
  while (!pre.empty() && pre.back() == period.back()) {
    pre.pop_back();
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
  }
  return {std::move(pre), std::move(period)};
}

inline Ray canonical_ray(Ray r) { return canonical_ray(std::move(r.pre), std::move(r.period)); }

inline int ray_letter(const Ray& r, std::size_t idx) {
  if (idx < r.pre.size()) return r.pre[idx];
  return r.period[(idx - r.pre.size()) % r.period.size()];
}

inline TreeWord ray_prefix(const Ray& r, std::size_t n) {
  TreeWord w;
  w.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.push_back(ray_letter(r, i));
  return w;
}

inline Ray ray_tail(const Ray& r, std::size_t k) {
  if (k <= r.pre.size())
    return canonical_ray(std::vector<int>(r.pre.begin() + static_cast<long>(k), r.pre.end()),
                         r.period);
  std::size_t rot = (k - r.pre.size()) % r.period.size();
  std::vector<int> p(r.period.begin() + static_cast<long>(rot), r.period.end());
  p.insert(p.end(), r.period.begin(), r.period.begin() + static_cast<long>(rot));
  return canonical_ray({}, std::move(p));
}

inline std::string ray_str(const Ray& r) {
  std::string s;
  for (int x : r.pre) s += std::to_string(x);
  s += "(";
  for (int x : r.period) s += std::to_string(x);
  s += ")*";
  return s;
}

// ---- boundary orbit machinery ---------------------------------------------

struct OrbitBudget {
  std::size_t max_steps = std::size_t{1} << 14;
};

template <class El>
struct OrbitPointResult {
  bool diverged = false;
  std::size_t steps_used = 0;
  Ray image;  // valid when !diverged
};

// Image of an eventually periodic ray under g. Restrictions along the
// periodic part are tracked until a (restriction, phase) state repeats, which
// certifies eventual periodicity of the image ray.
template <TreeAction A>
OrbitPointResult<typename A::Element> orbit_point(const A& a, const typename A::Element& g,
                                                  const Ray& w, OrbitBudget budget = {}) {
  using El = typename A::Element;
  OrbitPointResult<El> res;
  El cur = g;
  std::vector<int> out;
  std::map<std::pair<std::string, std::size_t>, std::size_t> seen;  // (key, phase) -> step
  for (std::size_t i = 0; i < budget.max_steps; ++i) {
    if (i >= w.pre.size()) {
      std::size_t phase = (i - w.pre.size()) % w.period.size();
      auto probe = seen.emplace(std::make_pair(a.key(cur), phase), i);
      if (!probe.second) {
        std::size_t start = probe.first->second;
        res.steps_used = i;
        res.image = canonical_ray(std::vector<int>(out.begin(), out.begin() + static_cast<long>(start)),
                                  std::vector<int>(out.begin() + static_cast<long>(start), out.end()));
        return res;
      }
    }
    auto [img, rest] = a.act_letter(cur, ray_letter(w, i));
    out.push_back(img);
    cur = rest;
  }
  res.diverged = true;
  res.steps_used = budget.max_steps;
  return res;
}

struct StabilizeFixed {
  std::size_t cycle_start;
  std::size_t cycle_length;
};
struct StabilizeMoved {
  std::size_t depth;  // 1-based index of the first letter moved
};
struct StabilizeDiverged {
  std::size_t steps;
};
using StabilizeResult = std::variant<StabilizeFixed, StabilizeMoved, StabilizeDiverged>;

template <TreeAction A>
StabilizeResult stabilizes_ray(const A& a, const typename A::Element& g, const Ray& w,
                               OrbitBudget budget = {}) {
  using El = typename A::Element;
  El cur = g;
  std::map<std::pair<std::string, std::size_t>, std::size_t> seen;
  for (std::size_t i = 0; i < budget.max_steps; ++i) {
    if (i >= w.pre.size()) {
      std::size_t phase = (i - w.pre.size()) % w.period.size();
      auto probe = seen.emplace(std::make_pair(a.key(cur), phase), i);
      if (!probe.second)
        return StabilizeFixed{probe.first->second, i - probe.first->second};
    }
    int letter = ray_letter(w, i);
    auto [img, rest] = a.act_letter(cur, letter);
    if (img != letter) return StabilizeMoved{i + 1};
    cur = rest;
  }
  return StabilizeDiverged{budget.max_steps};
}

// Minimal 1-based index n0 such that the image of w under g agrees with w at
// every position >= n0; reports a periodic disagreement when none exists.
struct ExhaustionIndex {
  bool infinite = false;
  std::size_t n0 = 0;                 // valid when !infinite
  std::size_t witness_position = 0;   // a disagreeing position recurring periodically
  std::size_t witness_period = 0;
};

inline ExhaustionIndex exhaustion_index_of(const Ray& w, const Ray& u) {
  std::size_t s = std::max(w.pre.size(), u.pre.size());
  std::size_t m = std::lcm(w.period.size(), u.period.size());
  ExhaustionIndex r;
  for (std::size_t i = s; i < s + m; ++i) {
    if (ray_letter(w, i) != ray_letter(u, i)) {
      r.infinite = true;
      r.witness_position = i + 1;
      r.witness_period = m;
      return r;
    }
  }
  std::size_t last_bad = 0;
  bool any = false;
  for (std::size_t i = 0; i < s; ++i)
    if (ray_letter(w, i) != ray_letter(u, i)) {
      last_bad = i;
      any = true;
    }
  r.n0 = any ? last_bad + 2 : 1;
  return r;
}

template <TreeAction A>
ExhaustionIndex exhaustion_index(const A& a, const typename A::Element& g, const Ray& w,
                                 OrbitBudget budget = {}) {
  auto img = orbit_point(a, g, w, budget);
  if (img.diverged) throw std::runtime_error("exhaustion_index: orbit computation exceeded budget");
  return exhaustion_index_of(w, img.image);
}

}  // namespace selfsim
