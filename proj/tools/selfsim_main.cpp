// Command-line front end for the self-similar group engine.
//
// Subcommands: nucleus, recursion, tiling, witness, ball, monotile, dlcheck,
// percolate, intersect. Every document embeds provenance (tool, version,
// command line, seed where applicable) and is byte-stable across reruns.
//
// Exit codes: 0 success, 1 verification failure (with evidence in the
// output), 2 usage errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "selfsim/chains.hpp"
#include "selfsim/monotile.hpp"
#include "selfsim/nucleus.hpp"
#include "selfsim/output.hpp"
#include "selfsim/percolation.hpp"
#include "selfsim/specs.hpp"
#include "selfsim/tiling.hpp"
#include "selfsim/version.hpp"

namespace {

using namespace selfsim;

// ---------------------------------------------------------------------------
// Small parsers and writers
// ---------------------------------------------------------------------------

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos)
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(Int(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  Int den = ipow(Int(10), static_cast<unsigned long>(s.size() - dot - 1));
  return Rat(Int(digits), den);
}

int letter_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  throw std::invalid_argument(std::string("bad ray letter: ") + c);
}

// Accepts "pre(period)" with optional trailing '*', e.g. "1(10)" or "(0)*".
Ray parse_ray(std::string s) {
  if (!s.empty() && s.back() == '*') s.pop_back();
  auto open = s.find('('), close = s.find(')');
  if (open == std::string::npos || close == std::string::npos || close < open || close + 1 != s.size())
    throw std::invalid_argument("ray must look like pre(period), e.g. 1(10)");
  Ray r;
  for (std::size_t i = 0; i < open; ++i) r.pre.push_back(letter_value(s[i]));
  for (std::size_t i = open + 1; i < close; ++i) r.period.push_back(letter_value(s[i]));
  if (r.period.empty()) throw std::invalid_argument("ray period must be nonempty");
  return r;
}

IntVec parse_vec(const std::string& s) {
  IntVec v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(Int(item));
  return v;
}

IntMat parse_mat(const std::string& s) {
  IntMat m;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) m.push_back(parse_vec(row));
  for (const auto& r : m)
    if (r.size() != m.size()) throw std::invalid_argument("matrix must be square");
  return m;
}

std::string shell_join(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += " ";
    std::string a = argv[i];
    if (a.find(' ') != std::string::npos) out += "\"" + a + "\"";
    else out += a;
  }
  return out;
}

int write_out(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "cannot open output file: " << path << "\n";
    return 2;
  }
  f << content;
  return 0;
}

std::string word_of(const TreeWord& w) {
  std::string s;
  for (int x : w) s += (x < 10) ? static_cast<char>('0' + x) : static_cast<char>('a' + x - 10);
  return s;
}

// ---------------------------------------------------------------------------
// Group dispatch
// ---------------------------------------------------------------------------

struct GroupOpts {
  std::string group = "lamplighter";
  long m = 2;
  long ell = 3;
  int dim = 2;
};

void add_group_flags(CLI::App* cmd, GroupOpts& g) {
  cmd->add_option("--group", g.group, "group family")
      ->check(CLI::IsMember({"lamplighter", "bs", "affine", "heis-ex1", "heis-ex2", "heis-2-4-2"}));
  cmd->add_option("--m", g.m, "base of the multiplication part (bs)");
  cmd->add_option("--ell", g.ell, "tree degree / index parameter (bs)");
  cmd->add_option("--dim", g.dim, "dimension (affine)");
}

template <class F>
int with_group_action(const GroupOpts& g, F&& f) {
  if (g.group == "lamplighter") {
    auto act = make_lamplighter_action();
    return f(act, act.spec().generators);
  }
  if (g.group == "bs") {
    auto act = make_bs_action(Int(g.m), Int(g.ell));
    return f(act, act.spec().generators);
  }
  if (g.group == "affine") {
    auto act = make_affine_action(g.dim);
    return f(act, act.spec().generators);
  }
  if (g.group == "heis-2-4-2") {
    auto act = EndoAction<HeisenbergGroup>(make_heis_doubling_spec());
    return f(act, act.spec().generators);
  }
  if (g.group == "heis-ex1" || g.group == "heis-ex2") {
    auto act = g.group == "heis-ex1" ? make_heis_ex1_action() : make_heis_ex2_action();
    HeisenbergGroup gr;
    HeisenbergGroup::Element A{1, 0, 0}, C{0, 0, 1};
    std::vector<std::pair<std::string, HeisenbergGroup::Element>> gens = {
        {"A", A}, {"C", C}, {"A^-1", gr.inv(A)}, {"C^-1", gr.inv(C)}};
    return f(act, gens);
  }
  std::cerr << "unknown group: " << g.group << "\n";
  return 2;
}

// ---------------------------------------------------------------------------
// nucleus
// ---------------------------------------------------------------------------

template <TreeAction A>
int do_nucleus(const A& act,
               const std::vector<std::pair<std::string, typename A::Element>>& gens,
               const GroupOpts& g, std::size_t budget, const std::string& format,
               const std::string& out, const Provenance& prov) {
  NucleusOptions opt;
  opt.max_elements = budget;
  std::vector<typename A::Element> els;
  for (const auto& [name, e] : gens) els.push_back(e);
  auto rep = compute_nucleus(act, els, opt);

  OJson res;
  res["group"] = g.group;
  res["arity"] = act.arity();
  OJson gen_names = OJson::array();
  for (const auto& [name, e] : gens) gen_names.push_back(name);
  res["generators"] = gen_names;
  res["budget"] = budget;
  res["contracting"] = rep.contracting;
  if (rep.contracting) {
    const auto& nuc = rep.nucleus;
    res["size"] = nuc.size();
    OJson keys = OJson::array();
    for (const auto& k : nuc.keys) keys.push_back(k);
    res["elements"] = keys;
    res["identity_index"] = nuc.identity_index;
    res["letter_image"] = nuc.letter_image;
    res["section"] = nuc.section;
    std::size_t maxd = 0;
    for (const auto& [pair, d] : rep.pair_depth) maxd = std::max(maxd, d);
    res["max_pair_depth"] = maxd;
    auto osr = open_set_condition(nuc);
    OJson open;
    open["holds"] = osr.holds;
    open["ell"] = osr.ell;
    OJson wit = OJson::object();
    for (int s = 0; s < nuc.size(); ++s)
      if (osr.witness[static_cast<std::size_t>(s)].has_value())
        wit[nuc.keys[static_cast<std::size_t>(s)]] = word_of(*osr.witness[static_cast<std::size_t>(s)]);
    open["witness"] = wit;
    res["open_set"] = open;
  } else {
    OJson ev;
    ev["reason"] = rep.evidence.reason;
    ev["elements_reached"] = rep.evidence.elements_reached;
    OJson cyc = OJson::array();
    for (const auto& e : rep.evidence.witness_cycle) cyc.push_back(act.key(e));
    ev["witness_cycle"] = cyc;
    ev["witness_sizes"] = rep.evidence.witness_sizes;
    res["evidence"] = ev;
  }

  std::string doc;
  if (format == "certificate-json") {
    doc = emit_json(prov, "nucleus", res);
  } else if (format == "table-csv" && rep.contracting) {
    const auto& nuc = rep.nucleus;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"state", "key"};
    for (int l = 0; l < act.arity(); ++l) header.push_back("image_" + std::to_string(l));
    for (int l = 0; l < act.arity(); ++l) header.push_back("section_" + std::to_string(l));
    for (int s = 0; s < nuc.size(); ++s) {
      std::vector<std::string> row{std::to_string(s), nuc.keys[static_cast<std::size_t>(s)]};
      for (int l = 0; l < act.arity(); ++l)
        row.push_back(std::to_string(nuc.letter_image[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)]));
      for (int l = 0; l < act.arity(); ++l)
        row.push_back(nuc.keys[static_cast<std::size_t>(
            nuc.section[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)])]);
      rows.push_back(row);
    }
    doc = emit_csv(prov, header, rows);
  } else if (format == "table-csv") {
    std::cerr << "table-csv requires a contracting action\n";
    return 1;
  } else {
    std::cerr << "nucleus supports formats: certificate-json, table-csv\n";
    return 2;
  }
  int rc = write_out(out, doc);
  if (rc) return rc;
  return rep.contracting ? 0 : 1;
}

// ---------------------------------------------------------------------------
// recursion
// ---------------------------------------------------------------------------

template <TreeAction A>
int do_recursion(const A& act,
                 const std::vector<std::pair<std::string, typename A::Element>>& gens,
                 const GroupOpts& g, const std::string& elements, const std::string& format,
                 const std::string& out, const Provenance& prov) {
  using El = typename A::Element;
  // Parse requested elements as words over the named generators; default to
  // the generator list itself.
  std::vector<std::pair<std::string, El>> targets;
  if (elements.empty()) {
    targets = gens;
  } else {
    std::stringstream ss(elements);
    std::string item;
    while (std::getline(ss, item, ',')) {
      El e = act.identity();
      for (const WordFactor& f : parse_word(item)) {
        const El* base = nullptr;
        for (const auto& [name, el] : gens)
          if (name == f.name) base = &el;
        if (!base) {
          std::cerr << "unknown generator in --elements: " << f.name << "\n";
          return 2;
        }
        El pw = act.identity();
        El b = f.exponent < 0 ? act.inv(*base) : *base;
        for (long i = 0; i < (f.exponent < 0 ? -f.exponent : f.exponent); ++i) pw = act.mul(pw, b);
        e = act.mul(e, pw);
      }
      targets.emplace_back(item, e);
    }
  }

  OJson res;
  res["group"] = g.group;
  res["arity"] = act.arity();
  OJson rows_json = OJson::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& [name, e] : targets) {
    auto d = wreath_recursion(act, e);
    OJson r;
    r["name"] = name;
    r["key"] = act.key(e);
    r["perm"] = d.perm;
    OJson secs = OJson::array();
    for (const auto& s : d.sections) secs.push_back(act.key(s));
    r["sections"] = secs;
    rows_json.push_back(r);

    std::vector<std::string> row{name, act.key(e)};
    std::string perm;
    for (int p : d.perm) {
      if (!perm.empty()) perm += " ";
      perm += std::to_string(p);
    }
    row.push_back(perm);
    for (const auto& s : d.sections) row.push_back(act.key(s));
    rows.push_back(row);
  }
  res["rows"] = rows_json;

  std::string doc;
  if (format == "certificate-json") {
    doc = emit_json(prov, "recursion", res);
  } else if (format == "table-csv") {
    std::vector<std::string> header{"name", "key", "perm"};
    for (int l = 0; l < act.arity(); ++l) header.push_back("section_" + std::to_string(l));
    doc = emit_csv(prov, header, rows);
  } else {
    std::cerr << "recursion supports formats: certificate-json, table-csv\n";
    return 2;
  }
  return write_out(out, doc);
}

// ---------------------------------------------------------------------------
// tiling
// ---------------------------------------------------------------------------

template <TreeAction A>
int do_tiling(const A& act,
              const std::vector<std::pair<std::string, typename A::Element>>& gens,
              const GroupOpts& g, const std::string& ray_s, int level, std::size_t radius,
              std::size_t budget, const std::string& format, const std::string& out,
              const Provenance& prov) {
  Ray w = parse_ray(ray_s);
  for (int x : w.pre)
    if (x >= act.arity()) throw std::invalid_argument("ray letter out of range");
  for (int x : w.period)
    if (x >= act.arity()) throw std::invalid_argument("ray letter out of range");

  NucleusOptions opt;
  opt.max_elements = budget;
  std::vector<typename A::Element> els;
  for (const auto& [name, e] : gens) els.push_back(e);
  auto rep = compute_nucleus(act, els, opt);
  if (!rep.contracting) {
    std::cerr << "tiling requires a contracting action (nucleus computation failed: "
              << rep.evidence.reason << ")\n";
    return 1;
  }
  auto til = level_tiling(act, rep.nucleus, w, level, radius);

  OJson res;
  res["group"] = g.group;
  res["ray"] = ray_str(canonical_ray(w));
  res["level"] = level;
  res["radius"] = radius;
  res["nucleus_size"] = rep.nucleus.size();
  res["ball_size"] = til.ball.elements.size();
  res["tile_count"] = til.tiles.size();
  res["interior_tiles"] = til.interior_tile_count;
  res["cert_sizes"] = til.cert_sizes;
  res["cert_connected"] = til.cert_connected;
  res["cert_rho_injective"] = til.cert_rho_injective;
  res["cert_adjacency"] = til.cert_adjacency;
  res["cert_images"] = til.cert_images;
  res["certificate"] = til.certificate();
  OJson tiles = OJson::array();
  for (const auto& t : til.tiles) {
    OJson tj;
    tj["tail"] = t.tail_key;
    tj["size"] = t.members.size();
    tj["interior"] = t.interior;
    if (t.rho_defined && t.rho.has_value()) tj["rho"] = act.key(*t.rho);
    tiles.push_back(tj);
  }
  res["tiles"] = tiles;
  auto osr = open_set_condition(rep.nucleus);
  if (osr.holds) {
    OJson prof = OJson::array();
    for (int n = 1; n <= 5; ++n) {
      auto fp = folner_profile(rep.nucleus, act.arity(), n);
      OJson pj;
      pj["level"] = n;
      pj["boundary_fraction"] = rat_str(fp.fraction);
      pj["bound"] = rat_str(boundary_fraction_bound(
          static_cast<std::size_t>(rep.nucleus.size()), act.arity(), osr.ell, n));
      prof.push_back(pj);
    }
    res["boundary_profile"] = prof;
  }

  std::string doc;
  if (format == "certificate-json") doc = emit_json(prov, "tiling", res);
  else if (format == "graph-json") doc = emit_json(prov, "tiling-graph", graph_to_json(til.tile_graph));
  else if (format == "graph-dot") doc = emit_dot(prov, "tiling", til.tile_graph);
  else {
    std::cerr << "tiling supports formats: certificate-json, graph-json, graph-dot\n";
    return 2;
  }
  int rc = write_out(out, doc);
  if (rc) return rc;
  return til.certificate() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// ball
// ---------------------------------------------------------------------------

template <TreeAction A>
int do_ball(const A& act,
            const std::vector<std::pair<std::string, typename A::Element>>& gens,
            const GroupOpts& g, std::size_t radius, const std::string& format,
            const std::string& out, const Provenance& prov) {
  auto ball = cayley_ball(act, gens, radius);
  std::string doc;
  if (format == "graph-json") {
    OJson res = graph_to_json(ball.graph);
    res["group"] = g.group;
    doc = emit_json(prov, "ball-graph", res);
  } else if (format == "graph-dot") {
    doc = emit_dot(prov, "ball", ball.graph);
  } else if (format == "table-csv") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < ball.elements.size(); ++i)
      rows.push_back({act.key(ball.elements[i]), std::to_string(ball.dist[i])});
    doc = emit_csv(prov, {"key", "dist"}, rows);
  } else {
    std::cerr << "ball supports formats: graph-json, graph-dot, table-csv\n";
    return 2;
  }
  return write_out(out, doc);
}

// ---------------------------------------------------------------------------
// witness
// ---------------------------------------------------------------------------

std::string stabilize_str(const StabilizeResult& r) {
  if (std::holds_alternative<StabilizeFixed>(r)) return "fixed";
  if (std::holds_alternative<StabilizeMoved>(r)) return "moved";
  return "diverged";
}

int do_witness(const std::string& family, long k, long m, long ell, long p, const std::string& a_s,
               long b, const std::string& mat_s, const std::string& vec_s, int dim,
               const std::string& format, const std::string& out, const Provenance& prov) {
  if (format != "certificate-json") {
    std::cerr << "witness supports formats: certificate-json\n";
    return 2;
  }
  OJson res;
  bool verified = false;
  if (family == "lamplighter") {
    auto w = ll_periodic_witness(k);
    auto act = make_lamplighter_action();
    auto st = stabilizes_ray(act, w.element, w.ray);
    verified = w.division_exact && std::holds_alternative<StabilizeFixed>(st);
    res["family"] = family;
    res["k"] = w.k;
    res["kappa"] = w.kappa;
    res["odd_part"] = to_long(w.K);
    res["order"] = to_long(w.ord);
    res["ell"] = to_long(w.ell);
    res["m"] = to_long(w.m);
    res["quotient"] = w.quotient.str();
    res["division_exact"] = w.division_exact;
    res["element"] = act.key(w.element);
    res["ray"] = ray_str(w.ray);
    res["stabilizes"] = stabilize_str(st);
  } else if (family == "bs") {
    auto w = bs_periodic_witness(Int(m), Int(ell), p, Int(a_s), b);
    auto act = make_bs_action(Int(m), Int(ell));
    auto st = stabilizes_ray(act, w.element, w.ray);
    verified = w.level_checks && std::holds_alternative<StabilizeFixed>(st);
    res["family"] = family;
    res["m"] = m;
    res["ell"] = ell;
    res["p"] = p;
    res["a"] = a_s;
    res["b"] = b;
    res["t"] = to_long(w.t);
    res["xi"] = rat_str(w.xi);
    res["h"] = rat_str(w.h);
    res["element"] = act.key(w.element);
    res["ray"] = ray_str(w.ray);
    res["level_checks"] = w.level_checks;
    res["stabilizes"] = stabilize_str(st);
  } else if (family == "affine-fixing") {
    IntVec v = parse_vec(vec_s);
    IntMat alpha = affine_fixing_matrix(v);
    bool fixes = mat_apply(alpha, v) == v;
    bool powers = affine_unipotent_power_check(alpha, 20);
    verified = fixes && powers && mat_det(alpha) == 1;
    res["family"] = family;
    res["dim"] = v.size();
    res["vec"] = vec_s;
    OJson rows = OJson::array();
    for (const auto& row : alpha) {
      OJson rj = OJson::array();
      for (const Int& x : row) rj.push_back(to_long(x));
      rows.push_back(rj);
    }
    res["matrix"] = rows;
    res["det"] = to_long(mat_det(alpha));
    res["fixes_vec"] = fixes;
    res["power_identity"] = powers;
  } else if (family == "unipotent") {
    IntMat M = parse_mat(mat_s);
    IntVec v = parse_vec(vec_s);
    auto w = unipotent_witness(M, p, v);
    auto act = make_affine_action(w.d);
    auto st = stabilizes_ray(act, w.element, w.ray);
    verified = w.level_checks && std::holds_alternative<StabilizeFixed>(st);
    res["family"] = family;
    res["dim"] = w.d;
    res["p"] = w.p;
    res["n"] = to_long(w.n);
    res["element"] = act.key(w.element);
    res["ray"] = ray_str(w.ray);
    res["level_checks"] = w.level_checks;
    res["stabilizes"] = stabilize_str(st);
  } else {
    std::cerr << "witness families: lamplighter, bs, affine-fixing, unipotent\n";
    return 2;
  }
  (void)dim;
  res["verified"] = verified;
  int rc = write_out(out, emit_json(prov, "witness", res));
  if (rc) return rc;
  return verified ? 0 : 1;
}

// ---------------------------------------------------------------------------
// monotile
// ---------------------------------------------------------------------------

template <GroupOpsLike Ops>
int emit_monotile(const Ops& ops, const MonotileReport<typename Ops::Element>& rep,
                  const std::string& family, long level, const std::string& format,
                  const std::string& out, const Provenance& prov) {
  OJson res;
  res["family"] = family;
  res["level"] = level;
  res["coset_count"] = rep.coset_count;
  OJson tr = OJson::array();
  for (const auto& e : rep.transversal) tr.push_back(ops.key(e));
  res["transversal"] = tr;
  OJson keys = OJson::array();
  for (const auto& k : rep.keys) keys.push_back(k);
  res["coset_keys"] = keys;
  res["keys_match_membership"] = rep.keys_match_membership;
  res["tree_connected"] = rep.tree_connected;
  res["partition_ok"] = rep.partition_ok;
  res["ball_checked"] = rep.ball_checked;
  res["verified"] = rep.ok();

  std::string doc;
  if (format == "certificate-json") doc = emit_json(prov, "monotile", res);
  else if (format == "graph-json") doc = emit_json(prov, "monotile-graph", graph_to_json(rep.schreier));
  else if (format == "graph-dot") doc = emit_dot(prov, "monotile", rep.schreier);
  else {
    std::cerr << "monotile supports formats: certificate-json, graph-json, graph-dot\n";
    return 2;
  }
  int rc = write_out(out, doc);
  if (rc) return rc;
  return rep.ok() ? 0 : 1;
}

int do_monotile(const std::string& family, long m, long ell, long level, std::size_t radius,
                const std::string& format, const std::string& out, const Provenance& prov) {
  if (family == "lamplighter") {
    LamplighterGroup G;
    auto gens = G.named_generators();
    std::vector<std::pair<std::string, LamplighterGroup::Element>> lift{gens[0], gens[1]};
    auto rep = monotile_lift(G, lift, gens, lamplighter_level(G, level), radius);
    return emit_monotile(G, rep, family, level, format, out, prov);
  }
  if (family == "bs") {
    BaumslagSolitarGroup G{Int(m)};
    auto gens = G.named_generators();
    std::vector<std::pair<std::string, BaumslagSolitarGroup::Element>> lift{gens[0], gens[1]};
    auto rep = monotile_lift(G, lift, gens, bs_level(G, Int(ell), level), radius);
    return emit_monotile(G, rep, family, level, format, out, prov);
  }
  if (family == "integers") {
    AffineGroup G{1};
    IntMat I = mat_identity(1);
    AffineGroup::Element plus = G.make(I, {Int(1)});
    std::vector<std::pair<std::string, AffineGroup::Element>> lift{{"s", plus}};
    std::vector<std::pair<std::string, AffineGroup::Element>> ball_gens{
        {"s", plus}, {"s^-1", G.inv(plus)}};
    auto rep = monotile_lift(G, lift, ball_gens, integer_level(G, level), radius);
    return emit_monotile(G, rep, family, level, format, out, prov);
  }
  std::cerr << "monotile families: lamplighter, bs, integers\n";
  return 2;
}

// ---------------------------------------------------------------------------
// dlcheck / percolate / intersect
// ---------------------------------------------------------------------------

int do_dlcheck(std::size_t radius, int samples, std::uint64_t seed, const std::string& format,
               const std::string& out, const Provenance& prov) {
  if (format != "certificate-json") {
    std::cerr << "dlcheck supports formats: certificate-json\n";
    return 2;
  }
  auto rep = dl_isomorphism_check(radius, samples, seed);
  OJson res;
  res["radius"] = radius;
  res["samples"] = samples;
  res["involution_ok"] = rep.involution_ok;
  res["automorphism_ok"] = rep.automorphism_ok;
  res["embedding_hom_ok"] = rep.embedding_hom_ok;
  res["generator_images_ok"] = rep.generator_images_ok;
  res["ball_match_ok"] = rep.ball_match_ok;
  res["edges_ok"] = rep.edges_ok;
  res["dist_ok"] = rep.dist_ok;
  res["image_index"] = rep.image_index;
  res["ball_size"] = rep.ball_size;
  res["verified"] = rep.ok();
  int rc = write_out(out, emit_json(prov, "dlcheck", res));
  if (rc) return rc;
  return rep.ok() ? 0 : 1;
}

int do_percolate(int dim, long n, const std::string& p_s, const std::string& eps_s, long trials,
                 std::uint64_t seed, const std::string& sizes_s, const std::string& format,
                 const std::string& out, const Provenance& prov) {
  Rat p = parse_rat(p_s), eps = parse_rat(eps_s);
  if (!sizes_s.empty()) {
    std::vector<long> ns;
    std::stringstream ss(sizes_s);
    std::string item;
    while (std::getline(ss, item, ',')) ns.push_back(std::stol(item));
    auto prof = unique_giant_profile(dim, ns, p, trials, seed);
    if (format == "table-csv") {
      std::vector<std::vector<std::string>> rows;
      for (const auto& row : prof)
        rows.push_back({std::to_string(row.n), std::to_string(row.median_largest),
                        std::to_string(row.median_second)});
      return write_out(out, emit_csv(prov, {"n", "median_largest", "median_second"}, rows));
    }
    if (format == "certificate-json") {
      OJson res;
      res["dim"] = dim;
      res["p"] = rat_str(p);
      res["trials"] = trials;
      OJson rows = OJson::array();
      for (const auto& row : prof) {
        OJson rj;
        rj["n"] = row.n;
        rj["median_largest"] = row.median_largest;
        rj["median_second"] = row.median_second;
        rows.push_back(rj);
      }
      res["profile"] = rows;
      return write_out(out, emit_json(prov, "percolate-profile", res));
    }
    std::cerr << "percolate supports formats: certificate-json, table-csv\n";
    return 2;
  }

  BoxSpec box{dim, n};
  auto prof = renormalization_profile(box, p, eps, trials, seed);
  if (format == "table-csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : prof.rows)
      rows.push_back({std::to_string(row.trial), std::to_string(row.seed),
                      row.good ? "1" : "0", std::to_string(row.largest),
                      std::to_string(row.second)});
    return write_out(out, emit_csv(prov, {"trial", "seed", "good", "largest", "second"}, rows));
  }
  if (format == "certificate-json") {
    OJson res;
    res["dim"] = dim;
    res["n"] = n;
    res["p"] = rat_str(p);
    res["eps"] = rat_str(eps);
    res["trials"] = trials;
    res["good_count"] = prof.good_count;
    res["good_fraction"] = rat_str(prof.good_fraction());
    OJson rows = OJson::array();
    for (const auto& row : prof.rows) {
      OJson rj;
      rj["trial"] = row.trial;
      rj["seed"] = row.seed;
      rj["good"] = row.good;
      rj["largest"] = row.largest;
      rj["second"] = row.second;
      rows.push_back(rj);
    }
    res["rows"] = rows;
    return write_out(out, emit_json(prov, "percolate", res));
  }
  std::cerr << "percolate supports formats: certificate-json, table-csv\n";
  return 2;
}

int do_intersect(const std::string& group, long radius, int depth, const std::string& format,
                 const std::string& out, const Provenance& prov) {
  if (format != "certificate-json") {
    std::cerr << "intersect supports formats: certificate-json\n";
    return 2;
  }
  GroupSpec<HeisenbergGroup> spec;
  if (group == "heis-2-4-2") spec = make_heis_doubling_spec();
  else if (group == "heis-ex1") spec = make_heis_ex1_spec();
  else if (group == "heis-ex2") spec = make_heis_ex2_spec();
  else {
    std::cerr << "intersect groups: heis-2-4-2, heis-ex1, heis-ex2\n";
    return 2;
  }
  auto box = heisenberg_box(radius);
  auto survivors = box_intersection_samples(spec, box, depth);
  HeisenbergGroup g;
  bool trivial = survivors.size() == 1 && g.is_identity(survivors[0]);
  OJson res;
  res["group"] = group;
  res["radius"] = radius;
  res["depth"] = depth;
  res["box_size"] = box.size();
  OJson surv = OJson::array();
  for (const auto& e : survivors) surv.push_back(g.key(e));
  res["survivors"] = surv;
  res["trivial"] = trivial;
  int rc = write_out(out, emit_json(prov, "intersect", res));
  if (rc) return rc;
  return trivial ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"computational engine for scale-invariant and self-similar groups"};
  app.set_version_flag("--version", std::string(selfsim::kToolName) + " " + selfsim::kToolVersion);
  app.require_subcommand(1);

  selfsim::Provenance prov;
  prov.command = shell_join(argc, argv);

  std::string format = "certificate-json";
  std::string out;
  GroupOpts gopts;

  // nucleus
  auto* c_nucleus = app.add_subcommand("nucleus", "nucleus and contraction certificate");
  GroupOpts g_nucleus;
  std::size_t nucleus_budget = 10000;
  std::string f_nucleus = "certificate-json", o_nucleus;
  add_group_flags(c_nucleus, g_nucleus);
  c_nucleus->add_option("--budget", nucleus_budget, "element budget");
  c_nucleus->add_option("--format", f_nucleus, "output format");
  c_nucleus->add_option("--out", o_nucleus, "output file (default stdout)");

  // recursion
  auto* c_recursion = app.add_subcommand("recursion", "wreath recursion table");
  GroupOpts g_recursion;
  std::string recursion_elements;
  std::string f_recursion = "certificate-json", o_recursion;
  add_group_flags(c_recursion, g_recursion);
  c_recursion->add_option("--elements", recursion_elements,
                          "comma-separated words over the named generators");
  c_recursion->add_option("--format", f_recursion, "output format");
  c_recursion->add_option("--out", o_recursion, "output file");

  // tiling
  auto* c_tiling = app.add_subcommand("tiling", "orbital level tiling with certificate");
  GroupOpts g_tiling;
  g_tiling.group = "heis-ex1";
  std::string tiling_ray = "(0)";
  int tiling_level = 1;
  std::size_t tiling_radius = 3, tiling_budget = 10000;
  std::string f_tiling = "certificate-json", o_tiling;
  add_group_flags(c_tiling, g_tiling);
  c_tiling->add_option("--ray", tiling_ray, "base ray, pre(period)");
  c_tiling->add_option("--level", tiling_level, "tiling level k");
  c_tiling->add_option("--radius", tiling_radius, "ball radius");
  c_tiling->add_option("--budget", tiling_budget, "nucleus element budget");
  c_tiling->add_option("--format", f_tiling, "output format");
  c_tiling->add_option("--out", o_tiling, "output file");

  // ball
  auto* c_ball = app.add_subcommand("ball", "Cayley ball over the family generators");
  GroupOpts g_ball;
  std::size_t ball_radius = 3;
  std::string f_ball = "graph-json", o_ball;
  add_group_flags(c_ball, g_ball);
  c_ball->add_option("--radius", ball_radius, "ball radius");
  c_ball->add_option("--format", f_ball, "output format");
  c_ball->add_option("--out", o_ball, "output file");

  // witness
  auto* c_witness = app.add_subcommand("witness", "ray stabilizer constructions");
  std::string w_family = "lamplighter";
  long w_k = 1, w_m = 2, w_ell = 3, w_p = 1, w_b = 0;
  std::string w_a = "1", w_mat = "1,1;0,1", w_vec = "1,2";
  int w_dim = 2;
  std::string f_witness = "certificate-json", o_witness;
  c_witness->add_option("--family", w_family, "lamplighter | bs | affine-fixing | unipotent");
  c_witness->add_option("--k", w_k, "ray period (lamplighter)");
  c_witness->add_option("--m", w_m, "base (bs)");
  c_witness->add_option("--ell", w_ell, "tree degree (bs)");
  c_witness->add_option("--p", w_p, "digit period (bs, unipotent)");
  c_witness->add_option("--a", w_a, "numerator parameter (bs)");
  c_witness->add_option("--b", w_b, "denominator m-power (bs)");
  c_witness->add_option("--matrix", w_mat, "rows a,b;c,d (unipotent)");
  c_witness->add_option("--vec", w_vec, "vector x,y (affine-fixing, unipotent)");
  c_witness->add_option("--dim", w_dim, "dimension");
  c_witness->add_option("--format", f_witness, "output format");
  c_witness->add_option("--out", o_witness, "output file");

  // monotile
  auto* c_monotile = app.add_subcommand("monotile", "coset transversal monotile");
  std::string mt_family = "lamplighter";
  long mt_m = 2, mt_ell = 3, mt_level = 1;
  std::size_t mt_radius = 6;
  std::string f_monotile = "certificate-json", o_monotile;
  c_monotile->add_option("--family", mt_family, "lamplighter | bs | integers");
  c_monotile->add_option("--m", mt_m, "base (bs)");
  c_monotile->add_option("--ell", mt_ell, "index parameter (bs)");
  c_monotile->add_option("--level", mt_level, "chain level n");
  c_monotile->add_option("--radius", mt_radius, "partition-check ball radius");
  c_monotile->add_option("--format", f_monotile, "output format");
  c_monotile->add_option("--out", o_monotile, "output file");

  // dlcheck
  auto* c_dlcheck = app.add_subcommand("dlcheck", "marked isomorphism onto the index-two image");
  std::size_t dl_radius = 4;
  int dl_samples = 100;
  std::uint64_t dl_seed = 7;
  std::string f_dlcheck = "certificate-json", o_dlcheck;
  c_dlcheck->add_option("--radius", dl_radius, "ball radius");
  c_dlcheck->add_option("--samples", dl_samples, "random sample count");
  c_dlcheck->add_option("--seed", dl_seed, "random seed");
  c_dlcheck->add_option("--format", f_dlcheck, "output format");
  c_dlcheck->add_option("--out", o_dlcheck, "output file");

  // percolate
  auto* c_percolate = app.add_subcommand("percolate", "site percolation good-box statistics");
  int pc_dim = 2;
  long pc_n = 64, pc_trials = 200;
  std::string pc_p = "3/4", pc_eps = "1/2", pc_sizes;
  std::uint64_t pc_seed = 1;
  std::string f_percolate = "table-csv", o_percolate;
  c_percolate->add_option("--dim", pc_dim, "lattice dimension");
  c_percolate->add_option("--n", pc_n, "box side length");
  c_percolate->add_option("--p", pc_p, "site probability (rational or decimal)");
  c_percolate->add_option("--eps", pc_eps, "small-cluster bound");
  c_percolate->add_option("--trials", pc_trials, "number of trials");
  c_percolate->add_option("--seed", pc_seed, "master seed");
  c_percolate->add_option("--sizes", pc_sizes, "comma-separated n values: top-two profile");
  c_percolate->add_option("--format", f_percolate, "output format");
  c_percolate->add_option("--out", o_percolate, "output file");

  // intersect
  auto* c_intersect = app.add_subcommand("intersect", "chain intersection over a coordinate box");
  std::string in_group = "heis-2-4-2";
  long in_radius = 50;
  int in_depth = 8;
  std::string f_intersect = "certificate-json", o_intersect;
  c_intersect->add_option("--group", in_group, "heis-2-4-2 | heis-ex1 | heis-ex2");
  c_intersect->add_option("--radius", in_radius, "box radius");
  c_intersect->add_option("--depth", in_depth, "embedding depth");
  c_intersect->add_option("--format", f_intersect, "output format");
  c_intersect->add_option("--out", o_intersect, "output file");

  (void)format;
  (void)out;
  (void)gopts;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_nucleus->parsed())
      return with_group_action(g_nucleus, [&](const auto& act, const auto& gens) {
        return do_nucleus(act, gens, g_nucleus, nucleus_budget, f_nucleus, o_nucleus, prov);
      });
    if (c_recursion->parsed())
      return with_group_action(g_recursion, [&](const auto& act, const auto& gens) {
        return do_recursion(act, gens, g_recursion, recursion_elements, f_recursion, o_recursion,
                            prov);
      });
    if (c_tiling->parsed())
      return with_group_action(g_tiling, [&](const auto& act, const auto& gens) {
        return do_tiling(act, gens, g_tiling, tiling_ray, tiling_level, tiling_radius,
                         tiling_budget, f_tiling, o_tiling, prov);
      });
    if (c_ball->parsed())
      return with_group_action(g_ball, [&](const auto& act, const auto& gens) {
        return do_ball(act, gens, g_ball, ball_radius, f_ball, o_ball, prov);
      });
    if (c_witness->parsed())
      return do_witness(w_family, w_k, w_m, w_ell, w_p, w_a, w_b, w_mat, w_vec, w_dim, f_witness,
                        o_witness, prov);
    if (c_monotile->parsed())
      return do_monotile(mt_family, mt_m, mt_ell, mt_level, mt_radius, f_monotile, o_monotile,
                         prov);
    if (c_dlcheck->parsed()) {
      prov.seed = dl_seed;
      return do_dlcheck(dl_radius, dl_samples, dl_seed, f_dlcheck, o_dlcheck, prov);
    }
    if (c_percolate->parsed()) {
      prov.seed = pc_seed;
      return do_percolate(pc_dim, pc_n, pc_p, pc_eps, pc_trials, pc_seed, pc_sizes, f_percolate,
                          o_percolate, prov);
    }
    if (c_intersect->parsed())
      return do_intersect(in_group, in_radius, in_depth, f_intersect, o_intersect, prov);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "no subcommand given\n";
  return 2;
}
