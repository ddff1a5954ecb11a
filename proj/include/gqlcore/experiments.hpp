#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gqlcore/graph.hpp"
#include "gqlcore/patmatch.hpp"

namespace gqlcore {

using NodePairSet = std::set<std::pair<std::int32_t, std::int32_t>>;

/// Endpoints of forward paths whose edge values strictly increase, by
/// dynamic programming: process edges by ascending value (equal values in
/// one batch, reading reach sets from before the batch). Polynomial.
/// min_len 0 admits the trivial (u,u) witnesses.
inline NodePairSet q_edge_increasing_oracle(const PropertyGraph& g, const std::string& key,
                                            int min_len = 0) {
  struct Entry {
    std::int64_t val;
    std::int32_t edge;
  };
  if (min_len > 2) throw EvalError("q_edge_increasing_oracle supports min_len 0, 1, or 2");
  std::vector<Entry> entries;
  for (std::int32_t e = 0; e < g.edge_count(); ++e) {
    const Value* v = g.element_prop(Value(EdgeRef{e}), key);
    if (v && is_int(*v)) entries.push_back({std::get<std::int64_t>(*v), e});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.val < b.val; });

  // reach1[v]: sources with an increasing path of >= 1 edges ending at v;
  // reach2[v]: the same with >= 2 edges. Equal-value batches read the
  // snapshots taken before the batch.
  std::vector<std::set<std::int32_t>> reach1(g.node_count()), reach2(g.node_count());
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t j = i;
    while (j < entries.size() && entries[j].val == entries[i].val) ++j;
    struct Addition {
      std::int32_t node;
      std::set<std::int32_t> one, two;
    };
    std::vector<Addition> additions;
    for (std::size_t k = i; k < j; ++k) {
      std::int32_t e = entries[k].edge;
      Addition add;
      add.node = g.tgt(e);
      add.two = reach1[g.src(e)];  // any path extended by e has >= 2 edges
      add.one = add.two;
      add.one.insert(g.src(e));
      additions.push_back(std::move(add));
    }
    for (auto& add : additions) {
      reach1[add.node].insert(add.one.begin(), add.one.end());
      reach2[add.node].insert(add.two.begin(), add.two.end());
    }
    i = j;
  }

  NodePairSet out;
  if (min_len <= 0)
    for (std::int32_t n = 0; n < g.node_count(); ++n) out.emplace(n, n);
  const auto& reach = min_len >= 2 ? reach2 : reach1;
  for (std::int32_t v = 0; v < g.node_count(); ++v)
    for (std::int32_t u : reach[v]) out.emplace(u, v);
  return out;
}

/// Brute-force cross-check: DFS over forward edges with strictly increasing
/// values (terminates because values strictly increase along a walk).
inline NodePairSet edge_increasing_dfs_oracle(const PropertyGraph& g, const std::string& key,
                                              int min_len = 0) {
  NodePairSet out;
  auto edge_val = [&](std::int32_t e) -> std::optional<std::int64_t> {
    const Value* v = g.element_prop(Value(EdgeRef{e}), key);
    if (v && is_int(*v)) return std::get<std::int64_t>(*v);
    return std::nullopt;
  };
  auto walk = [&](auto&& self, std::int32_t origin, std::int32_t at, std::int64_t last,
                  int len) -> void {
    if (len >= min_len) out.emplace(origin, at);
    for (std::int32_t e : g.out_edges(at)) {
      auto v = edge_val(e);
      if (v && *v > last) self(self, origin, g.tgt(e), *v, len + 1);
    }
  };
  for (std::int32_t n = 0; n < g.node_count(); ++n)
    walk(walk, n, n, std::numeric_limits<std::int64_t>::min(), 0);
  return out;
}

/// Endpoints of paths with strictly increasing node values, evaluated as the
/// pattern (x_s) ((x)→(y)⟨x.key < y.key⟩)^{0..∞} (x_t).
inline NodePairSet q_node_increasing(const PropertyGraph& g, const std::string& key) {
  auto step = pat::with_cond(
      pat::concat(pat::concat(pat::node("x"), pat::fwd()), pat::node("y")),
      pc::prop_lt("x", key, "y", key));
  auto pattern = pat::concat(pat::concat(pat::node("xs"), pat::repeat(step, 0, std::nullopt)),
                             pat::node("xt"));
  MatchRel m = eval_pattern(g, *pattern);
  NodePairSet out;
  for (const auto& t : m.triples) out.emplace(t.src, t.tgt);
  return out;
}

/// DFS oracle for the same query.
inline NodePairSet node_increasing_dfs_oracle(const PropertyGraph& g, const std::string& key) {
  NodePairSet out;
  auto node_val = [&](std::int32_t n) -> std::optional<std::int64_t> {
    const Value* v = g.element_prop(Value(NodeRef{n}), key);
    if (v && is_int(*v)) return std::get<std::int64_t>(*v);
    return std::nullopt;
  };
  auto walk = [&](auto&& self, std::int32_t origin, std::int32_t at) -> void {
    out.emplace(origin, at);
    auto cur = node_val(at);
    if (!cur) return;
    for (std::int32_t e : g.out_edges(at)) {
      auto nxt = node_val(g.tgt(e));
      if (nxt && *nxt > *cur) self(self, origin, g.tgt(e));
    }
  };
  for (std::int32_t n = 0; n < g.node_count(); ++n) walk(walk, n, n);
  return out;
}

/// Pairs connected by a path whose node values are pairwise distinct.
/// Exponential in the worst case; intended for small test graphs.
inline NodePairSet q_node_distinct_oracle(const PropertyGraph& g, const std::string& key) {
  NodePairSet out;
  auto node_val = [&](std::int32_t n) -> const Value* {
    return g.element_prop(Value(NodeRef{n}), key);
  };
  std::set<Value> seen;
  std::vector<bool> on_path;
  // Revisiting a node either repeats its value or, for valueless nodes,
  // inserts a removable cycle; cutting it never loses an endpoint pair.
  auto walk = [&](auto&& self, std::int32_t origin, std::int32_t at) -> void {
    out.emplace(origin, at);
    for (std::int32_t e : g.out_edges(at)) {
      std::int32_t to = g.tgt(e);
      if (on_path[to]) continue;
      const Value* v = node_val(to);
      // An undefined value never collides (x.k ≠ y.k reads as ¬(x.k = y.k)).
      if (v && seen.count(*v)) continue;
      if (v) seen.insert(*v);
      on_path[to] = true;
      self(self, origin, to);
      on_path[to] = false;
      if (v) seen.erase(*v);
    }
  };
  for (std::int32_t n = 0; n < g.node_count(); ++n) {
    const Value* v = node_val(n);
    if (v) seen.insert(*v);
    on_path.assign(g.node_count(), false);
    on_path[n] = true;
    walk(walk, n, n);
    seen.clear();
  }
  return out;
}

// ---------------------------------------------------------------------------
// The enumeration workaround: all forward trails of length >= min_len
// (no repeated edges, which is what keeps the engine's enumeration finite),
// folding edge values per trail exactly like the reduce/CASE encoding:
// acc starts at the first edge's value, any v < acc poisons the fold to -1.

struct EnumerationResult {
  bool timed_out = false;
  std::uint64_t trails_enumerated = 0;
  std::uint64_t surviving_paths = 0;
  NodePairSet endpoints;  // of surviving trails
  double elapsed_ms = 0.0;
};

inline EnumerationResult q_edge_increasing_enumeration(const PropertyGraph& g,
                                                       const std::string& key, int min_len,
                                                       double deadline_ms) {
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  EnumerationResult res;

  std::vector<std::int64_t> val(g.edge_count(), -1);
  std::vector<bool> has_val(g.edge_count(), false);
  for (std::int32_t e = 0; e < g.edge_count(); ++e) {
    const Value* v = g.element_prop(Value(EdgeRef{e}), key);
    if (v && is_int(*v)) {
      val[e] = std::get<std::int64_t>(*v);
      has_val[e] = true;
    }
  }

  std::vector<bool> used(g.edge_count(), false);
  std::uint64_t steps = 0;
  bool expired = false;

  auto over_deadline = [&]() {
    if (deadline_ms <= 0) return false;
    if ((++steps & 1023) != 0) return false;
    double ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    return ms > deadline_ms;
  };

  // acc = -1 marks a poisoned fold; the fold itself is only inspected once a
  // trail reaches min_len, but every extension is enumerated regardless.
  auto walk = [&](auto&& self, std::int32_t origin, std::int32_t at, std::int64_t acc,
                  int len) -> void {
    if (expired) return;
    if (len >= min_len) {
      ++res.trails_enumerated;
      if (acc != -1) {
        ++res.surviving_paths;
        res.endpoints.emplace(origin, at);
      }
    }
    for (std::int32_t e : g.out_edges(at)) {
      if (used[e]) continue;
      if (over_deadline()) {
        expired = true;
        return;
      }
      std::int64_t next_acc;
      if (len == 0)
        next_acc = has_val[e] ? val[e] : -1;  // acc seeds from the first edge
      else if (acc == -1)
        next_acc = -1;
      else if (has_val[e] && val[e] >= acc)
        next_acc = val[e];
      else
        next_acc = -1;
      used[e] = true;
      self(self, origin, g.tgt(e), next_acc, len + 1);
      used[e] = false;
    }
  };

  for (std::int32_t n = 0; n < g.node_count() && !expired; ++n)
    walk(walk, n, n, -1, 0);

  res.timed_out = expired;
  res.elapsed_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return res;
}

// ---------------------------------------------------------------------------
// Timeout experiment over G(n, p)

struct TrialConfig {
  int graphs_per_point = 10;
  double timeout_secs = 300.0;
  int min_path_len = 2;
  std::string value_key = "val";
  std::int64_t value_min = 0;
  std::int64_t value_max = 100;
  std::uint64_t seed = 0;
  int warmups = 1;
};

struct PointResult {
  int n = 0;
  double p = 0.0;
  std::vector<std::uint64_t> graph_seeds;
  std::vector<double> runtimes_ms;
  std::vector<bool> timed_out;
  double timeout_fraction = 0.0;
  std::optional<double> median_ms;  // nullopt: more than half timed out (∞)
  double oracle_ms_max = 0.0;
};

inline std::uint64_t derive_seed(std::uint64_t seed, int n, double p, int i) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(n));
  mix(static_cast<std::uint64_t>(p * 1e6));
  mix(static_cast<std::uint64_t>(i));
  return h;
}

inline PointResult run_point(int n, double p, const TrialConfig& cfg) {
  using clock = std::chrono::steady_clock;
  PointResult pr;
  pr.n = n;
  pr.p = p;
  double deadline_ms = cfg.timeout_secs * 1000.0;
  for (int i = 0; i < cfg.graphs_per_point; ++i) {
    GraphFamilySpec spec;
    spec.kind = GraphFamily::gnp;
    spec.n = n;
    spec.p = p;
    spec.value_key = cfg.value_key;
    spec.value_min = cfg.value_min;
    spec.value_max = cfg.value_max;
    spec.seed = derive_seed(cfg.seed, n, p, i);
    PropertyGraph g = generate(spec);

    auto t0 = clock::now();
    q_edge_increasing_oracle(g, cfg.value_key);
    double oracle_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    pr.oracle_ms_max = std::max(pr.oracle_ms_max, oracle_ms);

    for (int w = 0; w < cfg.warmups; ++w)
      q_edge_increasing_enumeration(g, cfg.value_key, cfg.min_path_len, deadline_ms);
    EnumerationResult run =
        q_edge_increasing_enumeration(g, cfg.value_key, cfg.min_path_len, deadline_ms);
    pr.graph_seeds.push_back(spec.seed);
    pr.runtimes_ms.push_back(run.timed_out ? deadline_ms : run.elapsed_ms);
    pr.timed_out.push_back(run.timed_out);
  }
  int timeouts = static_cast<int>(std::count(pr.timed_out.begin(), pr.timed_out.end(), true));
  pr.timeout_fraction = static_cast<double>(timeouts) / cfg.graphs_per_point;
  if (pr.timeout_fraction > 0.5) {
    pr.median_ms = std::nullopt;  // reported as ∞
  } else {
    std::vector<double> sorted = pr.runtimes_ms;
    std::sort(sorted.begin(), sorted.end());
    std::size_t m = sorted.size();
    pr.median_ms = m % 2 ? sorted[m / 2] : (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0;
  }
  return pr;
}

struct ExperimentResult {
  std::vector<PointResult> points;
};

inline ExperimentResult run_experiment(const std::vector<int>& ns, const std::vector<double>& ps,
                                       const TrialConfig& cfg) {
  ExperimentResult out;
  for (double p : ps)
    for (int n : ns) out.points.push_back(run_point(n, p, cfg));
  return out;
}

inline std::string experiment_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "kind,n,p,graph_seed,runtime_ms,timed_out,timeout_fraction,median_ms,oracle_ms_max\n";
  out.setf(std::ios::fixed);
  out.precision(3);
  for (const auto& pt : r.points) {
    for (std::size_t i = 0; i < pt.runtimes_ms.size(); ++i)
      out << "run," << pt.n << ',' << pt.p << ',' << pt.graph_seeds[i] << ','
          << pt.runtimes_ms[i] << ',' << (pt.timed_out[i] ? 1 : 0) << ",,,\n";
    out << "point," << pt.n << ',' << pt.p << ",,,," << pt.timeout_fraction << ','
        << (pt.median_ms ? std::to_string(*pt.median_ms) : std::string("inf")) << ','
        << pt.oracle_ms_max << "\n";
  }
  return out.str();
}

}  // namespace gqlcore
