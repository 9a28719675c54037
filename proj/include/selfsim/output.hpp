#pragma once

// Serialization helpers shared by the command-line tool. All emitters are
// deterministic: maps iterate in key order, JSON objects preserve insertion
// order, CSV uses RFC 4180 quoting with CRLF line endings, and provenance
// (tool, version, command line, seed) is embedded in every document so runs
// can be reproduced byte for byte. No timestamps.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "selfsim/graph.hpp"
#include "selfsim/version.hpp"

namespace selfsim {

using OJson = nlohmann::ordered_json;

struct Provenance {
  std::string command;  // full command line as invoked
  std::optional<std::uint64_t> seed;
};

inline OJson provenance_json(const Provenance& prov) {
  OJson j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = prov.command;
  if (prov.seed.has_value()) j["seed"] = *prov.seed;
  return j;
}

inline std::string emit_json(const Provenance& prov, const std::string& kind,
                             const OJson& result) {
  OJson doc = provenance_json(prov);
  doc["kind"] = kind;
  doc["result"] = result;
  return doc.dump(2) + "\n";
}

inline OJson graph_to_json(const LabeledGraph& g) {
  OJson j;
  j["vertices"] = OJson::array();
  for (const auto& [id, payload] : g.vertices()) {
    OJson v;
    v["id"] = id;
    if (!payload.empty()) v["payload"] = payload;
    j["vertices"].push_back(v);
  }
  j["edges"] = OJson::array();
  for (const auto& [pair, labels] : g.edges()) {
    OJson e;
    e["a"] = pair.first;
    e["b"] = pair.second;
    e["labels"] = OJson::array();
    for (const auto& l : labels) e["labels"].push_back(l);
    j["edges"].push_back(e);
  }
  if (!g.metadata().empty()) {
    OJson m = OJson::object();
    for (const auto& [k, v] : g.metadata()) m[k] = v;
    j["metadata"] = m;
  }
  return j;
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string emit_dot(const Provenance& prov, const std::string& name,
                            const LabeledGraph& g) {
  std::ostringstream os;
  os << "// tool: " << kToolName << " " << kToolVersion << "\n";
  os << "// command: " << prov.command << "\n";
  if (prov.seed.has_value()) os << "// seed: " << *prov.seed << "\n";
  os << "graph " << name << " {\n";
  for (const auto& [k, v] : g.metadata())
    os << "  // " << k << ": " << v << "\n";
  for (const auto& [id, payload] : g.vertices()) {
    os << "  " << dot_quote(id);
    if (!payload.empty()) os << " [label=" << dot_quote(id + " | " + payload) << "]";
    os << ";\n";
  }
  for (const auto& [pair, labels] : g.edges()) {
    std::string joined;
    for (const auto& l : labels) {
      if (!joined.empty()) joined += ",";
      joined += l;
    }
    os << "  " << dot_quote(pair.first) << " -- " << dot_quote(pair.second) << " [label="
       << dot_quote(joined) << "];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180)
// ---------------------------------------------------------------------------

inline std::string csv_quote(const std::string& s) {
  bool needs = s.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Provenance is prepended as rows whose first cell starts with '#'; all rows
// are padded with empty cells to a uniform column count.
inline std::string emit_csv(const Provenance& prov,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<std::string>> all;
  all.push_back({"#tool", std::string(kToolName) + " " + kToolVersion});
  all.push_back({"#command", prov.command});
  if (prov.seed.has_value()) all.push_back({"#seed", std::to_string(*prov.seed)});
  all.push_back(header);
  for (const auto& r : rows) all.push_back(r);
  std::size_t width = 0;
  for (const auto& r : all) width = std::max(width, r.size());
  std::ostringstream os;
  for (auto& r : all) {
    for (std::size_t i = 0; i < width; ++i) {
      if (i) os << ",";
      if (i < r.size()) os << csv_quote(r[i]);
    }
    os << "\r\n";
  }
  return os.str();
}

}  // namespace selfsim
