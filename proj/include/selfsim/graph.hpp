#pragma once

// A small deterministic labeled-graph container. Vertices are identified by
// strings and carry a payload; edges are undirected, each holding a sorted
// set of labels (parallel labels are deduplicated). Iteration order is
// always sorted, so serializations are byte-stable.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selfsim {

class LabeledGraph {
 public:
  void add_vertex(const std::string& id, const std::string& payload = "") {
    auto it = vertices_.find(id);
    if (it == vertices_.end())
      vertices_.emplace(id, payload);
    else if (it->second != payload && !payload.empty())
      throw std::invalid_argument("LabeledGraph: conflicting payload for vertex " + id);
  }

  bool has_vertex(const std::string& id) const { return vertices_.count(id) > 0; }

  void add_edge(const std::string& a, const std::string& b, const std::string& label) {
    if (!has_vertex(a) || !has_vertex(b))
      throw std::invalid_argument("LabeledGraph: edge endpoint missing");
    auto k = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    edges_[k].insert(label);
  }

  void set_metadata(const std::string& k, const std::string& v) { metadata_[k] = v; }

  const std::map<std::string, std::string>& vertices() const { return vertices_; }
  const std::map<std::pair<std::string, std::string>, std::set<std::string>>& edges() const {
    return edges_;
  }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool adjacent(const std::string& a, const std::string& b) const {
    auto k = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    return edges_.count(k) > 0;
  }

  std::set<std::string> edge_labels(const std::string& a, const std::string& b) const {
    auto k = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = edges_.find(k);
    return it == edges_.end() ? std::set<std::string>{} : it->second;
  }

  std::set<std::string> neighbors(const std::string& v) const {
    std::set<std::string> out;
    for (const auto& [k, labels] : edges_) {
      if (k.first == v) out.insert(k.second);
      else if (k.second == v) out.insert(k.first);
    }
    return out;
  }

  // Number of connected components over all vertices.
  int component_count() const {
    std::map<std::string, int> comp;
    int n = 0;
    for (const auto& [id, payload] : vertices_) {
      if (comp.count(id)) continue;
      std::vector<std::string> stack{id};
      comp[id] = n;
      while (!stack.empty()) {
        std::string v = stack.back();
        stack.pop_back();
        for (const std::string& w : neighbors(v))
          if (!comp.count(w)) {
            comp[w] = n;
            stack.push_back(w);
          }
      }
      ++n;
    }
    return n;
  }

  bool connected() const { return vertices_.empty() || component_count() == 1; }

 private:
  std::map<std::string, std::string> vertices_;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> edges_;
  std::map<std::string, std::string> metadata_;
};

}  // namespace selfsim
