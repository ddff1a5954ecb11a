#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "gqlcore/relation.hpp"
#include "gqlcore/value.hpp"

namespace gqlcore {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Directed property graph. Immutable after construction; node and edge ids
/// are interned to dense handles, the original strings kept for rendering.
class PropertyGraph {
 public:
  std::int32_t node_count() const { return static_cast<std::int32_t>(node_names_.size()); }
  std::int32_t edge_count() const { return static_cast<std::int32_t>(edge_names_.size()); }

  const std::string& node_name(std::int32_t n) const { return node_names_[n]; }
  const std::string& edge_name(std::int32_t e) const { return edge_names_[e]; }

  std::optional<std::int32_t> find_node(const std::string& id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::int32_t> find_edge(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  std::int32_t src(std::int32_t e) const { return src_[e]; }
  std::int32_t tgt(std::int32_t e) const { return tgt_[e]; }

  const std::vector<std::string>& node_labels(std::int32_t n) const { return node_labels_[n]; }
  const std::vector<std::string>& edge_labels(std::int32_t e) const { return edge_labels_[e]; }
  const std::map<std::string, Value>& node_props(std::int32_t n) const { return node_props_[n]; }
  const std::map<std::string, Value>& edge_props(std::int32_t e) const { return edge_props_[e]; }

  const std::vector<std::int32_t>& out_edges(std::int32_t n) const { return out_edges_[n]; }
  const std::vector<std::int32_t>& in_edges(std::int32_t n) const { return in_edges_[n]; }

  /// prop(x, key) for a node or edge value; nullptr when undefined.
  const Value* element_prop(const Value& x, const std::string& key) const {
    const std::map<std::string, Value>* props = nullptr;
    if (is_node(x))
      props = &node_props_[std::get<NodeRef>(x).idx];
    else if (is_edge(x))
      props = &edge_props_[std::get<EdgeRef>(x).idx];
    else
      return nullptr;
    auto it = props->find(key);
    return it == props->end() ? nullptr : &it->second;
  }

  bool element_has_label(const Value& x, const std::string& label) const {
    const std::vector<std::string>* labs = nullptr;
    if (is_node(x))
      labs = &node_labels_[std::get<NodeRef>(x).idx];
    else if (is_edge(x))
      labs = &edge_labels_[std::get<EdgeRef>(x).idx];
    else
      return false;
    return std::binary_search(labs->begin(), labs->end(), label);
  }

  ValueRenderer renderer() const {
    return [this](const Value& v) -> std::string {
      if (is_node(v)) return node_names_[std::get<NodeRef>(v).idx];
      if (is_edge(v)) return edge_names_[std::get<EdgeRef>(v).idx];
      return render_value_plain(v);
    };
  }

 private:
  friend class GraphBuilder;
  std::vector<std::string> node_names_, edge_names_;
  std::unordered_map<std::string, std::int32_t> node_index_, edge_index_;
  std::vector<std::vector<std::string>> node_labels_, edge_labels_;
  std::vector<std::map<std::string, Value>> node_props_, edge_props_;
  std::vector<std::int32_t> src_, tgt_;
  std::vector<std::vector<std::int32_t>> out_edges_, in_edges_;
};

class GraphBuilder {
 public:
  GraphBuilder& add_node(const std::string& id, std::vector<std::string> labels = {},
                         std::map<std::string, Value> props = {}) {
    if (g_.node_index_.count(id)) throw GraphError("duplicate node id: " + id);
    if (g_.edge_index_.count(id)) throw GraphError("node id collides with edge id: " + id);
    check_props(props, id);
    g_.node_index_.emplace(id, g_.node_count());
    g_.node_names_.push_back(id);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    g_.node_labels_.push_back(std::move(labels));
    g_.node_props_.push_back(std::move(props));
    return *this;
  }

  GraphBuilder& add_edge(const std::string& id, const std::string& src_id,
                         const std::string& tgt_id, std::vector<std::string> labels = {},
                         std::map<std::string, Value> props = {}) {
    if (g_.edge_index_.count(id)) throw GraphError("duplicate edge id: " + id);
    if (g_.node_index_.count(id)) throw GraphError("edge id collides with node id: " + id);
    auto s = g_.find_node(src_id);
    auto t = g_.find_node(tgt_id);
    if (!s) throw GraphError("edge " + id + " has dangling src endpoint: " + src_id);
    if (!t) throw GraphError("edge " + id + " has dangling tgt endpoint: " + tgt_id);
    check_props(props, id);
    g_.edge_index_.emplace(id, g_.edge_count());
    g_.edge_names_.push_back(id);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    g_.edge_labels_.push_back(std::move(labels));
    g_.edge_props_.push_back(std::move(props));
    g_.src_.push_back(*s);
    g_.tgt_.push_back(*t);
    return *this;
  }

  PropertyGraph build() {
    g_.out_edges_.assign(g_.node_count(), {});
    g_.in_edges_.assign(g_.node_count(), {});
    for (std::int32_t e = 0; e < g_.edge_count(); ++e) {
      g_.out_edges_[g_.src_[e]].push_back(e);
      g_.in_edges_[g_.tgt_[e]].push_back(e);
    }
    return std::move(g_);
  }

 private:
  static void check_props(const std::map<std::string, Value>& props, const std::string& id) {
    for (const auto& [k, v] : props)
      if (!is_const(v))
        throw GraphError("property " + k + " of " + id + " is neither integer nor string");
  }
  PropertyGraph g_;
};

// ---------------------------------------------------------------------------
// Paths

struct PathStep {
  std::int32_t edge = -1;
  bool forward = true;
  auto operator<=>(const PathStep&) const = default;
};

/// Alternating sequence node0 e1 node1 ... en noden; nodes are recovered from
/// the graph via each step's orientation. n = 0 (a single node) is allowed.
struct Path {
  std::int32_t start = -1;
  std::vector<PathStep> steps;
  auto operator<=>(const Path&) const = default;

  std::int32_t length() const { return static_cast<std::int32_t>(steps.size()); }
};

inline std::int32_t path_node_at(const PropertyGraph& g, const Path& p, std::int32_t i) {
  std::int32_t v = p.start;
  for (std::int32_t k = 0; k < i; ++k) {
    const auto& st = p.steps[k];
    v = st.forward ? g.tgt(st.edge) : g.src(st.edge);
  }
  return v;
}

inline std::int32_t path_end(const PropertyGraph& g, const Path& p) {
  return path_node_at(g, p, p.length());
}

inline bool path_valid(const PropertyGraph& g, const Path& p) {
  if (p.start < 0 || p.start >= g.node_count()) return false;
  std::int32_t v = p.start;
  for (const auto& st : p.steps) {
    if (st.edge < 0 || st.edge >= g.edge_count()) return false;
    if (st.forward) {
      if (g.src(st.edge) != v) return false;
      v = g.tgt(st.edge);
    } else {
      if (g.tgt(st.edge) != v) return false;
      v = g.src(st.edge);
    }
  }
  return true;
}

/// p1 ⊙ p2: defined iff last(p1) = first(p2). A single-node path is a unit.
inline std::optional<Path> concat_paths(const PropertyGraph& g, const Path& p1, const Path& p2) {
  if (path_end(g, p1) != p2.start) return std::nullopt;
  Path out = p1;
  out.steps.insert(out.steps.end(), p2.steps.begin(), p2.steps.end());
  return out;
}

inline std::string path_to_string(const PropertyGraph& g, const Path& p) {
  std::string out = "path(" + g.node_name(p.start);
  std::int32_t v = p.start;
  for (const auto& st : p.steps) {
    out += st.forward ? "," : ",~";
    out += g.edge_name(st.edge);
    v = st.forward ? g.tgt(st.edge) : g.src(st.edge);
    out += "," + g.node_name(v);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// JSON file format

inline PropertyGraph load_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(std::string("graph parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
    throw GraphError("graph document must have nodes and edges arrays");

  auto read_props = [](const nlohmann::json& obj, const std::string& id) {
    std::map<std::string, Value> props;
    if (!obj.contains("properties")) return props;
    for (const auto& [k, v] : obj.at("properties").items()) {
      if (v.is_number_integer())
        props.emplace(k, Value(v.get<std::int64_t>()));
      else if (v.is_string())
        props.emplace(k, Value(v.get<std::string>()));
      else
        throw GraphError("property " + k + " of " + id + " is neither integer nor string");
    }
    return props;
  };
  auto read_labels = [](const nlohmann::json& obj) {
    std::vector<std::string> labels;
    if (obj.contains("labels"))
      for (const auto& l : obj.at("labels")) labels.push_back(l.get<std::string>());
    return labels;
  };

  GraphBuilder b;
  for (const auto& n : doc.at("nodes")) {
    std::string id = n.at("id").get<std::string>();
    b.add_node(id, read_labels(n), read_props(n, id));
  }
  for (const auto& e : doc.at("edges")) {
    std::string id = e.at("id").get<std::string>();
    b.add_edge(id, e.at("src").get<std::string>(), e.at("tgt").get<std::string>(),
               read_labels(e), read_props(e, id));
  }
  return b.build();
}

/// Canonical serialization: ids sorted, keys sorted (nlohmann objects sort).
inline std::string save_graph(const PropertyGraph& g) {
  nlohmann::json doc;
  doc["nodes"] = nlohmann::json::array();
  doc["edges"] = nlohmann::json::array();

  std::vector<std::int32_t> nodes(g.node_count()), edges(g.edge_count());
  for (std::int32_t i = 0; i < g.node_count(); ++i) nodes[i] = i;
  for (std::int32_t i = 0; i < g.edge_count(); ++i) edges[i] = i;
  std::sort(nodes.begin(), nodes.end(),
            [&](auto a, auto b) { return g.node_name(a) < g.node_name(b); });
  std::sort(edges.begin(), edges.end(),
            [&](auto a, auto b) { return g.edge_name(a) < g.edge_name(b); });

  auto props_json = [](const std::map<std::string, Value>& props) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [k, v] : props) {
      if (is_int(v))
        obj[k] = std::get<std::int64_t>(v);
      else
        obj[k] = std::get<std::string>(v);
    }
    return obj;
  };

  for (auto n : nodes) {
    nlohmann::json obj;
    obj["id"] = g.node_name(n);
    obj["labels"] = g.node_labels(n);
    obj["properties"] = props_json(g.node_props(n));
    doc["nodes"].push_back(obj);
  }
  for (auto e : edges) {
    nlohmann::json obj;
    obj["id"] = g.edge_name(e);
    obj["src"] = g.node_name(g.src(e));
    obj["tgt"] = g.node_name(g.tgt(e));
    obj["labels"] = g.edge_labels(e);
    obj["properties"] = props_json(g.edge_props(e));
    doc["edges"].push_back(obj);
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Graph families

inline constexpr const char* kMinEltLabel = "min_elt";
inline constexpr const char* kMaxEltLabel = "max_elt";

enum class GraphFamily { gnp, dataless_path, annotated_path, node_annotated_path };

struct GraphFamilySpec {
  GraphFamily kind = GraphFamily::gnp;
  std::int32_t n = 0;
  double p = 0.0;  // gnp only
  std::string value_key = "val";
  std::int64_t value_min = 0;
  std::int64_t value_max = 100;
  std::uint64_t seed = 0;
};

namespace detail {
inline double rng_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
inline std::int64_t rng_range(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}
}  // namespace detail

/// Deterministic for a fixed spec (including seed).
inline PropertyGraph generate(const GraphFamilySpec& spec) {
  if (spec.n < 0) throw GraphError("generate: n must be nonnegative");
  if (spec.kind == GraphFamily::gnp && (spec.p < 0.0 || spec.p > 1.0))
    throw GraphError("generate: p must lie in [0,1]");
  if (spec.value_min > spec.value_max) throw GraphError("generate: empty value range");

  std::mt19937_64 rng(spec.seed);
  GraphBuilder b;

  switch (spec.kind) {
    case GraphFamily::gnp: {
      // Directed, no self-loops; every ordered pair independently with
      // probability p; each edge carries value_key.
      for (std::int32_t i = 0; i < spec.n; ++i) b.add_node("n" + std::to_string(i));
      std::int32_t k = 0;
      for (std::int32_t i = 0; i < spec.n; ++i)
        for (std::int32_t j = 0; j < spec.n; ++j) {
          if (i == j) continue;
          if (detail::rng_unit(rng) < spec.p) {
            std::map<std::string, Value> props{
                {spec.value_key, Value(detail::rng_range(rng, spec.value_min, spec.value_max))}};
            b.add_edge("e" + std::to_string(k++), "n" + std::to_string(i),
                       "n" + std::to_string(j), {}, std::move(props));
          }
        }
      break;
    }
    case GraphFamily::dataless_path: {
      for (std::int32_t i = 0; i <= spec.n; ++i) {
        std::vector<std::string> labels;
        if (i == 0) labels.push_back(kMinEltLabel);
        if (i == spec.n) labels.push_back(kMaxEltLabel);
        b.add_node("v" + std::to_string(i), std::move(labels));
      }
      for (std::int32_t i = 0; i < spec.n; ++i)
        b.add_edge("e" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string(i + 1));
      break;
    }
    case GraphFamily::annotated_path: {
      for (std::int32_t i = 0; i <= spec.n; ++i) b.add_node("v" + std::to_string(i));
      for (std::int32_t i = 0; i < spec.n; ++i) {
        std::map<std::string, Value> props{
            {spec.value_key, Value(detail::rng_range(rng, spec.value_min, spec.value_max))}};
        b.add_edge("e" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string(i + 1),
                   {}, std::move(props));
      }
      break;
    }
    case GraphFamily::node_annotated_path: {
      for (std::int32_t i = 0; i <= spec.n; ++i) {
        std::map<std::string, Value> props{
            {spec.value_key, Value(detail::rng_range(rng, spec.value_min, spec.value_max))}};
        b.add_node("v" + std::to_string(i), {}, std::move(props));
      }
      for (std::int32_t i = 0; i < spec.n; ++i)
        b.add_edge("e" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string(i + 1));
      break;
    }
  }
  return b.build();
}

/// Annotated path with explicitly given edge values (key `value_key`).
inline PropertyGraph annotated_path_with_values(const std::vector<std::int64_t>& values,
                                                const std::string& value_key = "k") {
  GraphBuilder b;
  for (std::size_t i = 0; i <= values.size(); ++i) b.add_node("v" + std::to_string(i));
  for (std::size_t i = 0; i < values.size(); ++i)
    b.add_edge("e" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string(i + 1), {},
               {{value_key, Value(values[i])}});
  return b.build();
}

/// Path with explicitly given node values (key `value_key`).
inline PropertyGraph node_annotated_path_with_values(const std::vector<std::int64_t>& values,
                                                     const std::string& value_key = "k") {
  GraphBuilder b;
  for (std::size_t i = 0; i < values.size(); ++i)
    b.add_node("v" + std::to_string(i), {}, {{value_key, Value(values[i])}});
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    b.add_edge("e" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string(i + 1));
  return b.build();
}

}  // namespace gqlcore
