// Acceptance suite: one pass/fail line per criterion. Each criterion pins
// its tolerances in code; the binary exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gqlcore/automaton.hpp"
#include "gqlcore/core.hpp"
#include "gqlcore/datalog.hpp"
#include "gqlcore/experiments.hpp"
#include "gqlcore/match_oracle.hpp"
#include "gqlcore/pattern_text.hpp"
#include "testsupport.hpp"

using namespace gqlcore;
namespace ts = testsupport;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. RA/LCRA equivalence round trips

Outcome criterion1() {
  auto t0 = clock_type::now();
  ts::Rng rng(1001);
  RASchema schema = ts::small_schema();
  int exprs = 500, dbs_per_expr = 20, counterexamples = 0;
  std::string first_failure;
  for (int i = 0; i < exprs; ++i) {
    auto e = ts::random_ra(rng, schema, 5);
    auto q = ra_to_lcra(*e);
    auto back = lcra_to_ra(*q, schema);
    for (int d = 0; d < dbs_per_expr; ++d) {
      auto db = ts::random_database(rng, schema, 12);
      auto expected = eval_ra(db, *e);
      if (!(eval_lcra(db, *q) == expected) || !(eval_ra(db, *back) == expected)) {
        ++counterexamples;
        if (first_failure.empty()) first_failure = print_ra(*e);
        break;
      }
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream out;
  out << exprs << " exprs x " << dbs_per_expr << " dbs, " << counterexamples
      << " counterexamples, " << std::fixed << secs << "s (< 60s)";
  if (!first_failure.empty()) out << "; first: " << first_failure;
  return {counterexamples == 0 && secs < 60.0, out.str()};
}

// ---------------------------------------------------------------------------
// 2. The simple-pipeline fragment cannot count to two

Outcome criterion2() {
  Database d1, d2;
  {
    Relation u1 = empty_relation({"A"});
    u1.rows.insert(Tuple{{"A", Value(std::int64_t{1})}});
    Relation u2 = u1;
    u2.rows.insert(Tuple{{"A", Value(std::int64_t{2})}});
    d1["U"] = u1;
    d2["U"] = u2;
  }
  RASchema schema = {{"U", {"A"}}};
  ts::Rng rng(2002);
  ts::LcraGenConfig cfg;
  cfg.allow_call = false;
  cfg.allow_diff = false;
  cfg.positive_conditions_only = true;
  int disagreements = 0, corpus = 200;
  for (int i = 0; i < corpus; ++i) {
    std::set<std::string> attrs;
    auto q = ts::random_lcra(rng, schema, 4, {}, attrs, cfg);
    if (!is_slcra(*q)) return {false, "generator produced a non-sLCRA query"};
    bool b1 = check_boolean(eval_lcra(d1, *q));
    bool b2 = check_boolean(eval_lcra(d2, *q));
    if (b1 != b2) ++disagreements;
  }
  auto two = ra::project(
      {}, ra::select(cond::neg(cond::attr_eq("A1", "A2")),
                     ra::join(ra::rename("A", "A1", ra::base("U")),
                              ra::rename("A", "A2", ra::base("U")))));
  auto exactly_one = ra::set_diff(ra::project({}, ra::base("U")), two);
  bool distinguishes = check_boolean(eval_ra(d1, *exactly_one)) &&
                       !check_boolean(eval_ra(d2, *exactly_one));
  std::ostringstream out;
  out << corpus << " sLCRA queries, " << disagreements
      << " distinguished the databases; cardinality-one RA query distinguishes: "
      << (distinguishes ? "yes" : "no");
  return {disagreements == 0 && distinguishes, out.str()};
}

// ---------------------------------------------------------------------------
// 3. Evaluator vs enumeration oracle at saturation

/// Upper bound on the length of a shortest witness for any triple the
/// evaluator may report: unbounded repetitions need at most lo + |N| piece
/// applications (reachability over |N| nodes), bounded ones at most hi.
int witness_bound(const Pattern& p, int n_nodes) {
  constexpr int kCap = 1000;
  auto clamp = [](long long v) { return static_cast<int>(std::min<long long>(v, 1000)); };
  switch (p.kind) {
    case Pattern::Kind::node:
      return 0;
    case Pattern::Kind::fwd:
    case Pattern::Kind::bwd:
      return 1;
    case Pattern::Kind::concat:
      return clamp(static_cast<long long>(witness_bound(*p.left, n_nodes)) +
                   witness_bound(*p.right, n_nodes));
    case Pattern::Kind::alt:
      return std::max(witness_bound(*p.left, n_nodes), witness_bound(*p.right, n_nodes));
    case Pattern::Kind::cond:
      return witness_bound(*p.child, n_nodes);
    case Pattern::Kind::repeat: {
      long long pieces = p.hi ? *p.hi : static_cast<long long>(p.lo) + n_nodes + 1;
      return clamp(pieces * witness_bound(*p.child, n_nodes));
    }
  }
  return kCap;
}

Outcome criterion3() {
  ts::Rng rng(3003);
  ts::PatternGenConfig cfg;

  // Seeded graph family, "= 4 nodes / <= 6 edges, plus degenerate shapes.
  std::vector<PropertyGraph> graphs;
  for (int i = 0; i < 5; ++i) graphs.push_back(ts::random_small_graph(rng, 4, 6));
  graphs.push_back(load_graph(R"({"nodes":[],"edges":[]})"));
  {
    GraphBuilder b;
    b.add_node("a").add_node("b");
    b.add_edge("e1", "a", "b").add_edge("e2", "b", "a");
    graphs.push_back(b.build());
  }

  // Corpus: depth <= 4 with unbounded repetition, conditions, backward
  // edges; witness bound kept enumerable.
  std::vector<PatternPtr> corpus;
  int with_unbounded = 0, with_cond = 0, with_bwd = 0;
  std::function<void(const Pattern&, bool&, bool&, bool&)> scan =
      [&](const Pattern& p, bool& ub, bool& cd, bool& bw) {
        switch (p.kind) {
          case Pattern::Kind::bwd:
            bw = true;
            break;
          case Pattern::Kind::repeat:
            if (!p.hi) ub = true;
            scan(*p.child, ub, cd, bw);
            break;
          case Pattern::Kind::cond:
            cd = true;
            scan(*p.child, ub, cd, bw);
            break;
          case Pattern::Kind::concat:
          case Pattern::Kind::alt:
            scan(*p.left, ub, cd, bw);
            scan(*p.right, ub, cd, bw);
            break;
          default:
            break;
        }
      };
  while (corpus.size() < 300) {
    auto p = ts::random_pattern(rng, 4, cfg);
    if (witness_bound(*p, 4) > 12) continue;
    bool ub = false, cd = false, bw = false;
    scan(*p, ub, cd, bw);
    with_unbounded += ub;
    with_cond += cd;
    with_bwd += bw;
    corpus.push_back(p);
  }
  if (with_unbounded == 0 || with_cond == 0 || with_bwd == 0)
    return {false, "corpus lacks a required feature"};

  // Per-graph path levels, grown on demand and shared across patterns.
  std::vector<std::vector<std::vector<Path>>> levels(graphs.size());
  auto level_paths = [&](std::size_t gi, int len) -> const std::vector<Path>& {
    auto& cache = levels[gi];
    while (static_cast<int>(cache.size()) <= len)
      cache.push_back(paths_of_length(graphs[gi], static_cast<int>(cache.size())));
    return cache[len];
  };

  long long checked = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = graphs[gi];
    for (const auto& p : corpus) {
      auto eval_triples = eval_pattern(g, *p).triples;
      int bound = std::min(witness_bound(*p, g.node_count()), 12);
      std::set<MatchTriple> acc;
      int stagnant = 0;
      for (int len = 0; len <= bound; ++len) {
        auto found = oracle_triples_for_paths(g, *p, level_paths(gi, len));
        std::size_t before = acc.size();
        for (const auto& t : found) {
          if (!eval_triples.count(t)) {
            std::ostringstream out;
            out << "oracle triple missing from evaluator: pattern " << print_pattern(*p)
                << " graph " << gi << " (" << g.node_name(t.src) << "," << g.node_name(t.tgt)
                << ")";
            return {false, out.str()};
          }
          acc.insert(t);
        }
        stagnant = acc.size() == before ? stagnant + 1 : 0;
        if (stagnant >= 2 && acc == eval_triples) break;
      }
      if (!(acc == eval_triples)) {
        for (const auto& t : eval_triples)
          if (!acc.count(t)) {
            std::ostringstream out;
            out << "evaluator triple never witnessed: pattern " << print_pattern(*p)
                << " graph " << gi << " (" << g.node_name(t.src) << "," << g.node_name(t.tgt)
                << ") bound " << bound;
            return {false, out.str()};
          }
      }
      ++checked;
    }
  }
  std::ostringstream out;
  out << corpus.size() << " patterns (" << with_unbounded << " unbounded, " << with_cond
      << " conditioned, " << with_bwd << " backward) x " << graphs.size() << " graphs, "
      << checked << " comparisons, 0 discrepancies";
  return {true, out.str()};
}

// ---------------------------------------------------------------------------
// 4. The erroneous repetition accepts what the oracle rejects

Outcome criterion4() {
  auto g = annotated_path_with_values({3, 4, 1, 2}, "k");
  auto p = parse_pattern("[ () -[x]-> () -[y]-> () | x.k < y.k ]{0..*}");
  auto endpoints = eval_pattern(g, *p).endpoints();
  std::pair<std::int32_t, std::int32_t> v0v4{*g.find_node("v0"), *g.find_node("v4")};
  bool pattern_accepts = endpoints.count(v0v4) > 0;
  bool oracle_rejects = q_edge_increasing_oracle(g, "k").count(v0v4) == 0;

  // Addendum: the one-way classifications of the named patterns.
  bool oneway_ok =
      is_one_way(*parse_pattern("(xs) [ (x) --> (y) | x.k < y.k ]{0..*} (xt)")) &&
      is_one_way(*p) &&
      !is_one_way(*parse_pattern(
          "(xs) [ (u) -[x]-> (z) -[y]-> (v) <-[w]- (z) | x.k < y.k ]{1..*} --> (xt)"
          " + (xs) --> (xt)")) &&
      is_one_way(*parse_pattern(
          "(v1) [ --> ]{0..*} [ () -[x]-> () -[y]-> () | not (x.k < y.k) ] [ --> ]{0..*} (v2)"));

  std::ostringstream out;
  out << "pattern accepts (v0,v4): " << (pattern_accepts ? "yes" : "no")
      << "; oracle rejects: " << (oracle_rejects ? "yes" : "no")
      << "; one-way classifications: " << (oneway_ok ? "ok" : "WRONG");
  return {pattern_accepts && oracle_rejects && oneway_ok, out.str()};
}

// ---------------------------------------------------------------------------
// 5. The two-step look-ahead pattern expresses the query on annotated paths

Outcome criterion5() {
  ts::Rng rng(5005);
  auto p = parse_pattern(
      "(xs) [ (u) -[x]-> (z) -[y]-> (v) <-[w]- (z) | x.k < y.k ]{1..*} --> (xt)"
      " + (xs) --> (xt)");
  OutputSpec out_spec;
  out_spec.items = {{"xs", std::nullopt}, {"xt", std::nullopt}};
  for (int i = 0; i < 50; ++i) {
    int n = 1 + static_cast<int>(ts::pick(rng, 50));
    std::vector<std::int64_t> values;
    for (int v = 0; v < n; ++v) values.push_back(static_cast<std::int64_t>(ts::pick(rng, 101)));
    auto g = annotated_path_with_values(values, "k");
    auto rel = eval_pattern_with_output(g, *p, out_spec);
    NodePairSet got;
    for (const auto& row : rel.rows)
      got.emplace(std::get<NodeRef>(row.at("xs")).idx, std::get<NodeRef>(row.at("xt")).idx);
    auto expected = q_edge_increasing_oracle(g, "k", /*min_len=*/1);
    if (got != expected) {
      std::ostringstream out;
      out << "mismatch on path " << i << " (n=" << n << ")";
      return {false, out.str()};
    }
  }
  return {true, "50 annotated paths (n <= 50, values 0..100), exact agreement"};
}

// ---------------------------------------------------------------------------
// 6. Node-increasing pattern vs brute force

Outcome criterion6() {
  ts::Rng rng(6006);
  for (int i = 0; i < 50; ++i) {
    GraphFamilySpec spec;
    spec.kind = GraphFamily::gnp;
    spec.n = 1 + static_cast<int>(ts::pick(rng, 6));
    spec.p = 0.4;
    spec.seed = rng();
    auto base = generate(spec);
    GraphBuilder b;
    for (std::int32_t n = 0; n < base.node_count(); ++n) {
      std::map<std::string, Value> props;
      if (ts::chance(rng, 0.85))
        props.emplace("k", Value(static_cast<std::int64_t>(ts::pick(rng, 8))));
      b.add_node(base.node_name(n), {}, std::move(props));
    }
    for (std::int32_t e = 0; e < base.edge_count(); ++e)
      b.add_edge(base.edge_name(e), base.node_name(base.src(e)), base.node_name(base.tgt(e)));
    auto g = b.build();
    if (q_node_increasing(g, "k") != node_increasing_dfs_oracle(g, "k"))
      return {false, "mismatch on graph " + std::to_string(i)};
  }
  return {true, "50 random graphs (n <= 6), exact agreement"};
}

// ---------------------------------------------------------------------------
// 7. Scaled timeout experiment

Outcome criterion7() {
  auto t0 = clock_type::now();
  TrialConfig cfg;
  cfg.graphs_per_point = 5;
  cfg.timeout_secs = 10.0;
  cfg.seed = 7007;
  cfg.warmups = 0;

  std::vector<double> ps = {0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<int> thresholds;
  double worst_oracle_ms = 0.0;
  std::ostringstream log;
  for (double p : ps) {
    std::optional<int> threshold;
    for (int n = 4; n <= 30; n += 2) {
      auto pt = run_point(n, p, cfg);
      worst_oracle_ms = std::max(worst_oracle_ms, pt.oracle_ms_max);
      bool infinite = !pt.median_ms.has_value();
      if (pt.timeout_fraction > 0.5 && !infinite)
        return {false, "median/infinity rule violated"};
      if (infinite) {
        threshold = n;
        break;
      }
    }
    if (!threshold) {
      std::ostringstream out;
      out << "no n <= 30 with >50% timeouts at p=" << p;
      return {false, out.str()};
    }
    thresholds.push_back(*threshold);
    log << " p=" << p << ":n=" << *threshold;
  }
  bool monotone_ok = true;
  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i)
    if (thresholds[i + 1] > thresholds[i] + 2) monotone_ok = false;
  double secs = seconds_since(t0);
  std::ostringstream out;
  out << "thresholds" << log.str() << "; nonincreasing within +2: "
      << (monotone_ok ? "yes" : "NO") << "; oracle max " << std::fixed << worst_oracle_ms
      << "ms (< 1000ms); total " << secs << "s (< 1800s)";
  return {monotone_ok && worst_oracle_ms < 1000.0 && secs < 1800.0, out.str()};
}

// ---------------------------------------------------------------------------
// 8. Power-of-two separation witness

Outcome criterion8() {
  auto t0 = clock_type::now();
  DatalogProgram prog = parse_datalog(R"(
eqLen(x, y, z, w) :- E(x, y), E(z, w).
eqLen(x, y, z, w) :- eqLen(x, y2, z, w2), E(y2, y), E(w2, w).
len2n(x, y) :- E(x, z), E(z, y).
len2n(x, y) :- len2n(x, z), len2n(z, y), eqLen(x, z, z, y).
Out() :- len2n(x, y), lab(x, "min_elt"), lab(y, "max_elt").
.out Out
)");
  std::set<int> accepted;
  for (int n = 1; n <= 64; ++n) {
    GraphFamilySpec spec;
    spec.kind = GraphFamily::dataless_path;
    spec.n = n;
    if (eval_datalog(encode_graph(generate(spec)), prog).boolean) accepted.insert(n);
  }
  std::set<int> expected = {2, 4, 8, 16, 32, 64};
  double secs = seconds_since(t0);
  std::ostringstream out;
  out << "accepted {";
  for (int n : accepted) out << n << " ";
  out << "} over 1..64, " << std::fixed << secs << "s (< 10s)";
  return {accepted == expected && secs < 10.0, out.str()};
}

// ---------------------------------------------------------------------------
// 9. Naive vs semi-naive least models

Outcome criterion9() {
  ts::Rng rng(9009);
  for (int i = 0; i < 200; ++i) {
    auto prog = ts::random_datalog(rng);
    auto db = ts::random_datalog_db(rng);
    auto naive = eval_datalog_naive(db, prog);
    auto semi = eval_datalog(db, prog);
    if (!(naive.idb == semi.idb) || naive.boolean != semi.boolean)
      return {false, "strategies disagree on program " + std::to_string(i)};
  }
  return {true, "200 random programs, identical least models"};
}

// ---------------------------------------------------------------------------
// 10. Automaton words vs path matching

Outcome criterion10() {
  ts::Rng rng(10010);
  ts::PatternGenConfig cfg;
  cfg.allow_vars = false;
  cfg.allow_conds = false;
  std::vector<std::string> words = {""};
  {
    std::vector<std::string> level = {""};
    for (int i = 0; i < 6; ++i) {
      std::vector<std::string> next;
      for (const auto& w : level) {
        next.push_back(w + "a");
        next.push_back(w + "b");
      }
      words.insert(words.end(), next.begin(), next.end());
      level = std::move(next);
    }
  }
  for (int i = 0; i < 100; ++i) {
    auto p = ts::random_pattern(rng, 3, cfg);
    auto nfa = pattern_to_automaton(*p);
    for (const auto& w : words) {
      auto [g, path] = zigzag_path(w);
      PathMatcher m(g, path);
      bool matches = !m.match_full(*p).empty();
      if (nfa.accepts(w) != matches) {
        std::ostringstream out;
        out << "disagreement on pattern " << print_pattern(*p) << " word '" << w << "'";
        return {false, out.str()};
      }
    }
  }
  return {true, "100 variable-free patterns x 127 words (|w| <= 6), exact agreement"};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  std::vector<Criterion> criteria = {
      {1, "RA/LCRA equivalence round trips", criterion1},
      {2, "simple pipelines cannot count to two", criterion2},
      {3, "pattern semantics vs enumeration oracle", criterion3},
      {4, "erroneous repetition counterexample", criterion4},
      {5, "look-ahead pattern expresses edge-increasing on paths", criterion5},
      {6, "node-increasing pattern vs brute force", criterion6},
      {7, "enumeration timeout experiment (scaled)", criterion7},
      {8, "power-of-two datalog witness", criterion8},
      {9, "naive vs semi-naive datalog", criterion9},
      {10, "pattern automaton vs path matching", criterion10},
  };

  std::optional<int> only;
  if (argc > 1) only = std::atoi(argv[1]);

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (only && c.id != *only) continue;
    auto t0 = clock_type::now();
    Outcome outcome;
    try {
      outcome = c.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    all_pass &= outcome.pass;
    std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", c.id,
                c.name, outcome.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
