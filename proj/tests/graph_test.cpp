#include <gtest/gtest.h>

#include <random>

#include "gqlcore/graph.hpp"

using namespace gqlcore;

TEST(LoadGraph, EmptyDocument) {
  auto g = load_graph(R"({"nodes":[],"edges":[]})");
  EXPECT_EQ(g.node_count(), 0);
  EXPECT_EQ(g.edge_count(), 0);
}

TEST(LoadGraph, SingletonNodeWithLabel) {
  auto g = load_graph(R"({"nodes":[{"id":"n1","labels":["Account"]}],"edges":[]})");
  ASSERT_EQ(g.node_count(), 1);
  auto n = g.find_node("n1");
  ASSERT_TRUE(n.has_value());
  EXPECT_EQ(g.node_labels(*n), std::vector<std::string>{"Account"});
}

TEST(LoadGraph, DanglingEndpointFails) {
  EXPECT_THROW(
      load_graph(R"({"nodes":[{"id":"a"}],"edges":[{"id":"e1","src":"nX","tgt":"a"}]})"),
      GraphError);
}

TEST(LoadGraph, DuplicateIdFails) {
  EXPECT_THROW(load_graph(R"({"nodes":[{"id":"a"},{"id":"a"}],"edges":[]})"), GraphError);
}

TEST(LoadGraph, NodeAndEdgeIdSpacesAreDisjoint) {
  EXPECT_THROW(
      load_graph(R"({"nodes":[{"id":"a"},{"id":"x"}],"edges":[{"id":"x","src":"a","tgt":"a"}]})"),
      GraphError);
  GraphBuilder b;
  b.add_node("a");
  b.add_edge("x", "a", "a");
  EXPECT_THROW(b.add_node("x"), GraphError);
}

TEST(LoadGraph, NonConstPropertyFails) {
  EXPECT_THROW(load_graph(R"({"nodes":[{"id":"a","properties":{"x":1.5}}],"edges":[]})"),
               GraphError);
  EXPECT_THROW(load_graph(R"({"nodes":[{"id":"a","properties":{"x":[1]}}],"edges":[]})"),
               GraphError);
}

TEST(LoadGraph, ParseErrorReported) {
  EXPECT_THROW(load_graph("{nonsense"), GraphError);
}

TEST(SaveGraph, RoundTripIsIdentity) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    GraphFamilySpec spec;
    spec.kind = GraphFamily::gnp;
    spec.n = 1 + static_cast<int>(rng() % 8);
    spec.p = 0.4;
    spec.seed = rng();
    auto g = generate(spec);
    std::string text = save_graph(g);
    auto g2 = load_graph(text);
    EXPECT_EQ(text, save_graph(g2));
  }
}

TEST(SaveGraph, PreservesLabelsAndProperties) {
  GraphBuilder b;
  b.add_node("a", {"P", "Q"}, {{"city", Value(std::string("paris"))}});
  b.add_node("b");
  b.add_edge("e", "a", "b", {"T"}, {{"amount", Value(std::int64_t{7})}});
  auto g = b.build();
  auto g2 = load_graph(save_graph(g));
  auto a = *g2.find_node("a");
  EXPECT_EQ(g2.node_labels(a), (std::vector<std::string>{"P", "Q"}));
  EXPECT_EQ(*g2.element_prop(Value(NodeRef{a}), "city"), Value(std::string("paris")));
  auto e = *g2.find_edge("e");
  EXPECT_EQ(*g2.element_prop(Value(EdgeRef{e}), "amount"), Value(std::int64_t{7}));
}

TEST(Generate, GnpZeroProbability) {
  auto g = generate({GraphFamily::gnp, 3, 0.0});
  EXPECT_EQ(g.node_count(), 3);
  EXPECT_EQ(g.edge_count(), 0);
}

TEST(Generate, GnpFullProbabilityHasAllOrderedPairs) {
  auto g = generate({GraphFamily::gnp, 4, 1.0});
  EXPECT_EQ(g.node_count(), 4);
  EXPECT_EQ(g.edge_count(), 12);  // ordered pairs, no self-loops
  for (std::int32_t e = 0; e < g.edge_count(); ++e) EXPECT_NE(g.src(e), g.tgt(e));
}

TEST(Generate, DatalessPathLabels) {
  GraphFamilySpec spec;
  spec.kind = GraphFamily::dataless_path;
  spec.n = 2;
  auto g = generate(spec);
  EXPECT_EQ(g.node_count(), 3);
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_TRUE(g.element_has_label(Value(NodeRef{*g.find_node("v0")}), kMinEltLabel));
  EXPECT_TRUE(g.element_has_label(Value(NodeRef{*g.find_node("v2")}), kMaxEltLabel));
  EXPECT_FALSE(g.element_has_label(Value(NodeRef{*g.find_node("v1")}), kMinEltLabel));
}

TEST(Generate, DatalessSingleNodeCarriesBothLabels) {
  GraphFamilySpec spec;
  spec.kind = GraphFamily::dataless_path;
  spec.n = 0;
  auto g = generate(spec);
  EXPECT_EQ(g.node_count(), 1);
  EXPECT_TRUE(g.element_has_label(Value(NodeRef{0}), kMinEltLabel));
  EXPECT_TRUE(g.element_has_label(Value(NodeRef{0}), kMaxEltLabel));
}

TEST(Generate, AnnotatedPathEdgesCarryValues) {
  GraphFamilySpec spec;
  spec.kind = GraphFamily::annotated_path;
  spec.n = 5;
  spec.value_key = "k";
  spec.seed = 11;
  auto g = generate(spec);
  EXPECT_EQ(g.edge_count(), 5);
  for (std::int32_t e = 0; e < g.edge_count(); ++e) {
    const Value* v = g.element_prop(Value(EdgeRef{e}), "k");
    ASSERT_NE(v, nullptr);
    EXPECT_TRUE(is_int(*v));
  }
}

TEST(Generate, DeterministicForFixedSeed) {
  GraphFamilySpec spec;
  spec.kind = GraphFamily::gnp;
  spec.n = 12;
  spec.p = 0.3;
  spec.seed = 42;
  EXPECT_EQ(save_graph(generate(spec)), save_graph(generate(spec)));
  spec.seed = 43;
  auto other = save_graph(generate(spec));
  spec.seed = 42;
  EXPECT_NE(save_graph(generate(spec)), other);
}

// Sanity band: total edges over 1000 seeds of G(20, 0.3) within ±5σ of the
// binomial expectation (380 pairs per graph).
TEST(Generate, GnpEdgeCountWithinBinomialBand) {
  double total = 0;
  for (int i = 0; i < 1000; ++i) {
    GraphFamilySpec spec;
    spec.kind = GraphFamily::gnp;
    spec.n = 20;
    spec.p = 0.3;
    spec.seed = static_cast<std::uint64_t>(i);
    total += generate(spec).edge_count();
  }
  double mean = 1000.0 * 380 * 0.3;
  double sigma = std::sqrt(1000.0 * 380 * 0.3 * 0.7);
  EXPECT_GT(total, mean - 5 * sigma);
  EXPECT_LT(total, mean + 5 * sigma);
}

TEST(Paths, ConcatUnitLaws) {
  GraphBuilder b;
  b.add_node("a").add_node("b").add_node("c");
  b.add_edge("e1", "a", "b").add_edge("e2", "b", "c");
  auto g = b.build();
  std::int32_t a = *g.find_node("a"), b_ = *g.find_node("b"), c = *g.find_node("c");
  Path pa{a, {}};
  Path pab{a, {{*g.find_edge("e1"), true}}};
  Path pbc{b_, {{*g.find_edge("e2"), true}}};
  Path pc{c, {}};

  auto unit = concat_paths(g, pa, pa);
  ASSERT_TRUE(unit.has_value());
  EXPECT_EQ(*unit, pa);

  auto spliced = concat_paths(g, pab, pbc);
  ASSERT_TRUE(spliced.has_value());
  EXPECT_EQ(spliced->start, a);
  EXPECT_EQ(spliced->length(), 2);
  EXPECT_EQ(path_end(g, *spliced), c);

  EXPECT_FALSE(concat_paths(g, pab, pc).has_value());
  // path · path(end) = path
  auto right_unit = concat_paths(g, pab, Path{b_, {}});
  ASSERT_TRUE(right_unit.has_value());
  EXPECT_EQ(*right_unit, pab);
}

TEST(Paths, ConcatAssociativeWhereDefined) {
  auto g = generate({GraphFamily::gnp, 5, 0.6, "val", 0, 100, 3});
  std::mt19937_64 rng(5);
  auto random_path = [&](std::int32_t max_len) {
    Path p;
    p.start = static_cast<std::int32_t>(rng() % g.node_count());
    std::int32_t at = p.start;
    for (std::int32_t i = 0; i < max_len; ++i) {
      std::vector<std::pair<std::int32_t, bool>> moves;
      for (auto e : g.out_edges(at)) moves.emplace_back(e, true);
      for (auto e : g.in_edges(at)) moves.emplace_back(e, false);
      if (moves.empty()) break;
      auto [e, fwd] = moves[rng() % moves.size()];
      p.steps.push_back({e, fwd});
      at = fwd ? g.tgt(e) : g.src(e);
    }
    return p;
  };
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Path p1 = random_path(3), p2 = random_path(3), p3 = random_path(3);
    auto ab = concat_paths(g, p1, p2);
    if (!ab) continue;
    auto bc = concat_paths(g, p2, p3);
    if (!bc) continue;
    auto left = concat_paths(g, *ab, p3);
    auto right = concat_paths(g, p1, *bc);
    ASSERT_TRUE(left.has_value());
    ASSERT_TRUE(right.has_value());
    EXPECT_EQ(*left, *right);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Paths, ValidityChecksOrientation) {
  GraphBuilder b;
  b.add_node("a").add_node("b");
  b.add_edge("e", "a", "b");
  auto g = b.build();
  Path fwd{*g.find_node("a"), {{0, true}}};
  Path bwd{*g.find_node("b"), {{0, false}}};
  Path wrong{*g.find_node("b"), {{0, true}}};
  EXPECT_TRUE(path_valid(g, fwd));
  EXPECT_TRUE(path_valid(g, bwd));
  EXPECT_FALSE(path_valid(g, wrong));
}
