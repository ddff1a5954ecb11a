#include <gtest/gtest.h>

#include "gqlcore/experiments.hpp"
#include "gqlcore/match_oracle.hpp"
#include "gqlcore/patmatch.hpp"
#include "gqlcore/pattern_text.hpp"
#include "testsupport.hpp"

using namespace gqlcore;
namespace ts = testsupport;

namespace {

std::set<std::pair<std::string, std::string>> endpoint_names(const PropertyGraph& g,
                                                             const MatchRel& m) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [s, t] : m.endpoints()) out.emplace(g.node_name(s), g.node_name(t));
  return out;
}

}  // namespace

TEST(EvalPattern, SingleEdgeAtom) {
  GraphBuilder b;
  b.add_node("a").add_node("b");
  b.add_edge("e", "a", "b");
  auto g = b.build();
  auto m = eval_pattern(g, *parse_pattern("-[x]->"));
  ASSERT_EQ(m.triples.size(), 1u);
  const auto& t = *m.triples.begin();
  EXPECT_EQ(g.node_name(t.src), "a");
  EXPECT_EQ(g.node_name(t.tgt), "b");
  EXPECT_EQ(t.mu.at("x"), Value(EdgeRef{0}));

  auto back = eval_pattern(g, *parse_pattern("<-[x]-"));
  const auto& bt = *back.triples.begin();
  EXPECT_EQ(g.node_name(bt.src), "b");
  EXPECT_EQ(g.node_name(bt.tgt), "a");
}

// The repetition that fails to express increasing edge values: on edge
// values 3,4,1,2 it still connects the path's endpoints.
TEST(EvalPattern, ErroneousEdgeIncreasingPatternOverAccepts) {
  auto g = annotated_path_with_values({3, 4, 1, 2}, "k");
  auto p = parse_pattern("[ () -[x]-> () -[y]-> () | x.k < y.k ]{0..*}");
  auto eps = endpoint_names(g, eval_pattern(g, *p));
  EXPECT_TRUE(eps.count({"v0", "v4"}));
  // ...while the polynomial oracle rightly rejects the pair.
  auto oracle = q_edge_increasing_oracle(g, "k");
  EXPECT_FALSE(oracle.count({*g.find_node("v0"), *g.find_node("v4")}));
}

TEST(EvalPattern, ZeroRepetitionIsIdentityOnNodes) {
  ts::Rng rng(3);
  auto g = ts::random_small_graph(rng);
  auto p = parse_pattern("[ --> ]{0..0}");
  auto m = eval_pattern(g, *p);
  EXPECT_EQ(m.triples.size(), static_cast<std::size_t>(g.node_count()));
  for (const auto& t : m.triples) {
    EXPECT_EQ(t.src, t.tgt);
    EXPECT_TRUE(t.mu.empty());
  }
}

TEST(EvalCondition, PropertySemantics) {
  GraphBuilder b;
  b.add_node("a", {}, {{"k", Value(std::int64_t{5})}});
  b.add_node("b", {}, {{"k", Value(std::int64_t{5})}});
  b.add_node("c");
  b.add_edge("e", "a", "b", {"Friends"});
  auto g = b.build();
  Binding mu;
  mu.emplace("x", Value(NodeRef{*g.find_node("a")}));
  mu.emplace("y", Value(NodeRef{*g.find_node("b")}));
  mu.emplace("z", Value(NodeRef{*g.find_node("c")}));
  mu.emplace("e", Value(EdgeRef{*g.find_edge("e")}));

  EXPECT_TRUE(eval_condition(mu, g, *pc::prop_eq("x", "k", "y", "k")));
  EXPECT_FALSE(eval_condition(mu, g, *pc::prop_lt("x", "k", "y", "k")));
  // Undefined on one side: equality atom is false.
  EXPECT_FALSE(eval_condition(mu, g, *pc::prop_eq("x", "k", "z", "k")));
  EXPECT_TRUE(eval_condition(mu, g, *pc::c_not(pc::prop_eq("x", "k", "z", "k"))));
  EXPECT_TRUE(eval_condition(mu, g, *pc::has_label("Friends", "e")));
  EXPECT_FALSE(eval_condition(mu, g, *pc::has_label("Owns", "e")));
}

TEST(EvalCondition, LessThanRequiresIntegers) {
  GraphBuilder b;
  b.add_node("a", {}, {{"k", Value(std::string("p"))}});
  b.add_node("b", {}, {{"k", Value(std::string("q"))}});
  auto g = b.build();
  Binding mu;
  mu.emplace("x", Value(NodeRef{0}));
  mu.emplace("y", Value(NodeRef{1}));
  EXPECT_FALSE(eval_condition(mu, g, *pc::prop_lt("x", "k", "y", "k")));
}

TEST(EvalPatternWithOutput, NodeVariable) {
  GraphBuilder b;
  b.add_node("a").add_node("b");
  auto g = b.build();
  OutputSpec out;
  out.items = {{"x", std::nullopt}};
  auto rel = eval_pattern_with_output(g, *parse_pattern("(x)"), out);
  EXPECT_EQ(rel.attrs, std::set<std::string>{"x"});
  EXPECT_EQ(rel.rows.size(), 2u);
}

TEST(EvalPatternWithOutput, NodeIncreasingPatternOnPath) {
  auto g = node_annotated_path_with_values({1, 2, 3}, "k");
  auto p = parse_pattern("(xs) [ (x) --> (y) | x.k < y.k ]{0..*} (xt)");
  OutputSpec out;
  out.items = {{"xs", std::nullopt}, {"xt", std::nullopt}};
  auto rel = eval_pattern_with_output(g, *p, out);
  Tuple want;
  want.emplace("xs", Value(NodeRef{*g.find_node("v0")}));
  want.emplace("xt", Value(NodeRef{*g.find_node("v2")}));
  EXPECT_TRUE(rel.rows.count(want));
  // Cross-check against brute-force enumeration up to length 3.
  auto oracle = enumerate_matches_oracle(g, *p, 3);
  std::set<Tuple> expected;
  for (const auto& [path, mu] : oracle) {
    Tuple row;
    row.emplace("xs", mu.at("xs"));
    row.emplace("xt", mu.at("xt"));
    expected.insert(row);
  }
  EXPECT_EQ(rel.rows, expected);
}

// ψ^E_< on the annotated path 1,5,9 returns exactly the increasing windows,
// matching the dynamic-programming oracle (length >= 1 witnesses).
TEST(EvalPatternWithOutput, EdgeIncreasingTrickPattern) {
  auto g = annotated_path_with_values({1, 5, 9}, "k");
  auto p = parse_pattern(
      "(xs) [ (u) -[x]-> (z) -[y]-> (v) <-[w]- (z) | x.k < y.k ]{1..*} --> (xt)"
      " + (xs) --> (xt)");
  OutputSpec out;
  out.items = {{"xs", std::nullopt}, {"xt", std::nullopt}};
  auto rel = eval_pattern_with_output(g, *p, out);

  std::set<std::pair<std::string, std::string>> got;
  for (const auto& row : rel.rows)
    got.emplace(g.node_name(std::get<NodeRef>(row.at("xs")).idx),
                g.node_name(std::get<NodeRef>(row.at("xt")).idx));
  std::set<std::pair<std::string, std::string>> expected = {
      {"v0", "v1"}, {"v1", "v2"}, {"v2", "v3"}, {"v0", "v2"}, {"v1", "v3"}, {"v0", "v3"}};
  EXPECT_EQ(got, expected);

  auto oracle = q_edge_increasing_oracle(g, "k", /*min_len=*/1);
  std::set<std::pair<std::string, std::string>> oracle_names;
  for (const auto& [s, t] : oracle) oracle_names.emplace(g.node_name(s), g.node_name(t));
  EXPECT_EQ(got, oracle_names);
}

TEST(EvalPatternWithOutput, UndefinedPropertyRowsDropped) {
  GraphBuilder b;
  b.add_node("a", {}, {{"k", Value(std::int64_t{1})}});
  b.add_node("b");
  auto g = b.build();
  OutputSpec out;
  out.items = {{"x", std::string("k")}};
  auto rel = eval_pattern_with_output(g, *parse_pattern("(x)"), out);
  EXPECT_EQ(rel.rows.size(), 1u);
  EXPECT_EQ(rel.attrs, std::set<std::string>{"x.k"});
}

// ---------------------------------------------------------------------------
// Enumeration oracle

TEST(Oracle, SingleNodePathsForNodePattern) {
  ts::Rng rng(7);
  auto g = ts::random_small_graph(rng);
  auto matches = enumerate_matches_oracle(g, *parse_pattern("(x)"), 0);
  EXPECT_EQ(matches.size(), static_cast<std::size_t>(g.node_count()));
  for (const auto& [p, mu] : matches) EXPECT_EQ(p.length(), 0);
}

TEST(Oracle, TwoCycleUnboundedRepetition) {
  GraphBuilder b;
  b.add_node("a").add_node("b");
  b.add_edge("e1", "a", "b").add_edge("e2", "b", "a");
  auto g = b.build();
  auto p = parse_pattern("[ --> ]{0..*}");
  auto matches = enumerate_matches_oracle(g, *p, 4);
  // Forward-only traversal alternates a,b; every length 0..4 from each node.
  std::map<int, int> by_len;
  for (const auto& [path, mu] : matches) {
    EXPECT_TRUE(mu.empty());
    by_len[path.length()]++;
  }
  for (int len = 0; len <= 4; ++len) EXPECT_EQ(by_len[len], 2) << "length " << len;
}

TEST(Oracle, EndpointProjectionAgreesWithEvalOnSmallCases) {
  ts::Rng rng(11);
  ts::PatternGenConfig cfg;
  for (int i = 0; i < 40; ++i) {
    auto g = ts::random_small_graph(rng, 3, 4);
    auto p = ts::random_pattern(rng, 3, cfg);
    auto eval_triples = eval_pattern(g, *p).triples;
    // Soundness: everything the oracle finds, eval finds.
    for (int len = 0; len <= 4; ++len) {
      auto level = oracle_triples_for_paths(g, *p, paths_of_length(g, len));
      for (const auto& t : level)
        EXPECT_TRUE(eval_triples.count(t))
            << print_pattern(*p) << " missing (" << g.node_name(t.src) << ","
            << g.node_name(t.tgt) << ")";
    }
  }
}

TEST(RepeatFixpoint, TerminatesWithinQuadraticIterations) {
  ts::Rng rng(13);
  for (int i = 0; i < 30; ++i) {
    auto g = ts::random_small_graph(rng, 4, 6);
    EvalStats stats;
    eval_pattern(g, *parse_pattern("[ --> ]{0..*}"), &stats);
    EXPECT_LE(stats.max_closure_iterations, g.node_count() * g.node_count() + 1);
  }
}

TEST(RepeatFixpoint, MonotoneGrowth) {
  // Each additional presence of composition only adds endpoint pairs.
  ts::Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    auto g = ts::random_small_graph(rng, 4, 6);
    auto upto = [&](std::uint32_t hi) {
      return eval_pattern(g, *pat::repeat(pat::fwd(), 0, hi)).endpoints();
    };
    auto prev = upto(0);
    for (std::uint32_t hi = 1; hi <= 4; ++hi) {
      auto cur = upto(hi);
      EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = cur;
    }
  }
}

TEST(UnionArms, ProduceIdenticalBindingDomains) {
  ts::Rng rng(19);
  ts::PatternGenConfig cfg;
  for (int i = 0; i < 50; ++i) {
    auto p = ts::random_pattern(rng, 3, cfg);
    if (p->kind != Pattern::Kind::alt) continue;
    auto g = ts::random_small_graph(rng);
    auto l = eval_pattern(g, *p->left);
    auto r = eval_pattern(g, *p->right);
    for (const auto& t : l.triples) EXPECT_EQ(free_vars(*p->left).size(), t.mu.size());
    for (const auto& t : r.triples) EXPECT_EQ(free_vars(*p->right).size(), t.mu.size());
  }
}

TEST(EvalPatternWithOutput, AttributeSetMatchesOutputExactly) {
  ts::Rng rng(23);
  ts::PatternGenConfig cfg;
  int done = 0;
  for (int i = 0; i < 200 && done < 60; ++i) {
    auto p = ts::random_pattern(rng, 3, cfg);
    auto sch = free_vars(*p);
    if (sch.empty()) continue;
    OutputSpec out;
    std::set<std::string> expect_attrs;
    for (const auto& v : sch) {
      if (ts::chance(rng, 0.5)) {
        out.items.push_back({v, std::nullopt});
        expect_attrs.insert(v);
      } else {
        out.items.push_back({v, std::string("k")});
        expect_attrs.insert(v + ".k");
      }
    }
    auto g = ts::random_small_graph(rng);
    auto rel = eval_pattern_with_output(g, *p, out);
    EXPECT_EQ(rel.attrs, expect_attrs);
    ++done;
  }
  EXPECT_GT(done, 30);
}
