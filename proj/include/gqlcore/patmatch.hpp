#pragma once

#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "gqlcore/graph.hpp"
#include "gqlcore/pattern.hpp"
#include "gqlcore/relation.hpp"

namespace gqlcore {

/// Partial map Var → Value (nodes and edges only, in pattern semantics).
using Binding = Tuple;

struct MatchTriple {
  std::int32_t src = -1;
  std::int32_t tgt = -1;
  Binding mu;

  friend bool operator<(const MatchTriple& a, const MatchTriple& b) {
    return std::tie(a.src, a.tgt, a.mu) < std::tie(b.src, b.tgt, b.mu);
  }
  friend bool operator==(const MatchTriple& a, const MatchTriple& b) {
    return a.src == b.src && a.tgt == b.tgt && a.mu == b.mu;
  }
};

/// Endpoint abstraction of ⟦ψ⟧_G: the pattern language never observes path
/// internals, so (source, target, binding) triples represent the match set
/// losslessly and make unbounded repetition a finite closure.
struct MatchRel {
  std::set<std::string> vars;
  std::set<MatchTriple> triples;

  std::set<std::pair<std::int32_t, std::int32_t>> endpoints() const {
    std::set<std::pair<std::int32_t, std::int32_t>> out;
    for (const auto& t : triples) out.emplace(t.src, t.tgt);
    return out;
  }
};

/// μ ⊨ θ. Property atoms hold only when every involved property is defined;
/// < additionally requires integers.
inline bool eval_condition(const Binding& mu, const PropertyGraph& g, const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::prop_eq:
    case Condition::Kind::prop_lt: {
      auto x = mu.find(c.var);
      auto y = mu.find(c.var2);
      if (x == mu.end() || y == mu.end()) return false;
      const Value* a = g.element_prop(x->second, c.key);
      const Value* b = g.element_prop(y->second, c.key2);
      if (!a || !b) return false;
      if (c.kind == Condition::Kind::prop_eq) return *a == *b;
      auto lt = value_less(*a, *b);
      return lt.has_value() && *lt;
    }
    case Condition::Kind::has_label: {
      auto x = mu.find(c.var);
      return x != mu.end() && g.element_has_label(x->second, c.label);
    }
    case Condition::Kind::c_not:
      return !eval_condition(mu, g, *c.a);
    case Condition::Kind::c_and:
      return eval_condition(mu, g, *c.a) && eval_condition(mu, g, *c.b);
    case Condition::Kind::c_or:
      return eval_condition(mu, g, *c.a) || eval_condition(mu, g, *c.b);
  }
  return false;
}

namespace detail {

using NodePair = std::pair<std::int32_t, std::int32_t>;
using PairSet = std::set<NodePair>;

inline PairSet compose_pairs(const PairSet& a, const PairSet& b) {
  std::multimap<std::int32_t, std::int32_t> by_src;
  for (const auto& [s, t] : b) by_src.emplace(s, t);
  PairSet out;
  for (const auto& [s, t] : a) {
    auto [lo, hi] = by_src.equal_range(t);
    for (auto it = lo; it != hi; ++it) out.emplace(s, it->second);
  }
  return out;
}

struct RepeatStats {
  int closure_iterations = 0;
};

/// ∪_{k≥0} base^k via delta iteration; adds identity on all nodes first.
inline PairSet reflexive_transitive_closure(const PropertyGraph& g, const PairSet& base,
                                            RepeatStats* stats) {
  PairSet total;
  for (std::int32_t n = 0; n < g.node_count(); ++n) total.emplace(n, n);
  PairSet frontier = total;
  while (!frontier.empty()) {
    if (stats) ++stats->closure_iterations;
    PairSet next = compose_pairs(frontier, base);
    PairSet fresh;
    for (const auto& p : next)
      if (!total.count(p)) fresh.insert(p);
    for (const auto& p : fresh) total.insert(p);
    frontier = std::move(fresh);
  }
  return total;
}

}  // namespace detail

struct EvalStats {
  int max_closure_iterations = 0;
};

/// ⟦ψ⟧_G per the compositional semantics. Node and edge atoms range over
/// the graph's elements; repetition discards inner bindings and, when
/// unbounded, is computed as a transitive-closure fixpoint over endpoint
/// pairs.
inline MatchRel eval_pattern(const PropertyGraph& g, const Pattern& p,
                             EvalStats* stats = nullptr) {
  using detail::PairSet;
  switch (p.kind) {
    case Pattern::Kind::node: {
      MatchRel out;
      if (p.var) out.vars.insert(*p.var);
      for (std::int32_t n = 0; n < g.node_count(); ++n) {
        Binding mu;
        if (p.var) mu.emplace(*p.var, Value(NodeRef{n}));
        out.triples.insert({n, n, std::move(mu)});
      }
      return out;
    }
    case Pattern::Kind::fwd:
    case Pattern::Kind::bwd: {
      MatchRel out;
      if (p.var) out.vars.insert(*p.var);
      for (std::int32_t e = 0; e < g.edge_count(); ++e) {
        Binding mu;
        if (p.var) mu.emplace(*p.var, Value(EdgeRef{e}));
        if (p.kind == Pattern::Kind::fwd)
          out.triples.insert({g.src(e), g.tgt(e), std::move(mu)});
        else
          out.triples.insert({g.tgt(e), g.src(e), std::move(mu)});
      }
      return out;
    }
    case Pattern::Kind::concat: {
      MatchRel l = eval_pattern(g, *p.left, stats);
      MatchRel r = eval_pattern(g, *p.right, stats);
      MatchRel out;
      out.vars = l.vars;
      out.vars.insert(r.vars.begin(), r.vars.end());
      std::multimap<std::int32_t, const MatchTriple*> by_src;
      for (const auto& t : r.triples) by_src.emplace(t.src, &t);
      for (const auto& a : l.triples) {
        auto [lo, hi] = by_src.equal_range(a.tgt);
        for (auto it = lo; it != hi; ++it) {
          const MatchTriple& b = *it->second;
          if (!compatible(a.mu, b.mu)) continue;
          out.triples.insert({a.src, b.tgt, merge(a.mu, b.mu)});
        }
      }
      return out;
    }
    case Pattern::Kind::alt: {
      MatchRel l = eval_pattern(g, *p.left, stats);
      MatchRel r = eval_pattern(g, *p.right, stats);
      l.triples.insert(r.triples.begin(), r.triples.end());
      return l;
    }
    case Pattern::Kind::cond: {
      MatchRel in = eval_pattern(g, *p.child, stats);
      MatchRel out;
      out.vars = in.vars;
      for (const auto& t : in.triples)
        if (eval_condition(t.mu, g, *p.guard)) out.triples.insert(t);
      return out;
    }
    case Pattern::Kind::repeat: {
      PairSet base;
      {
        MatchRel inner = eval_pattern(g, *p.child, stats);
        for (const auto& t : inner.triples) base.emplace(t.src, t.tgt);
      }
      PairSet lo_pairs;  // base^lo
      for (std::int32_t n = 0; n < g.node_count(); ++n) lo_pairs.emplace(n, n);
      for (std::uint32_t i = 0; i < p.lo; ++i) lo_pairs = detail::compose_pairs(lo_pairs, base);

      PairSet result;
      if (!p.hi) {
        detail::RepeatStats rs;
        PairSet closure = detail::reflexive_transitive_closure(g, base, &rs);
        if (stats && rs.closure_iterations > stats->max_closure_iterations)
          stats->max_closure_iterations = rs.closure_iterations;
        result = detail::compose_pairs(lo_pairs, closure);
      } else {
        PairSet cur = lo_pairs;
        result = cur;
        for (std::uint32_t i = p.lo; i < *p.hi; ++i) {
          cur = detail::compose_pairs(cur, base);
          result.insert(cur.begin(), cur.end());
        }
      }
      MatchRel out;
      for (const auto& [s, t] : result) out.triples.insert({s, t, Binding{}});
      return out;
    }
  }
  throw EvalError("unreachable pattern kind");
}

/// ⟦ψ_ω⟧_G: projects bindings through the output specification; rows where
/// a requested property is undefined are dropped.
inline Relation eval_pattern_with_output(const PropertyGraph& g, const Pattern& p,
                                         const OutputSpec& out_spec) {
  validate_output(out_spec, p);
  MatchRel m = eval_pattern(g, p);
  Relation out;
  for (const auto& item : out_spec.items) out.attrs.insert(item.attr_name());
  for (const auto& t : m.triples) {
    Tuple row;
    bool ok = true;
    for (const auto& item : out_spec.items) {
      const Value& bound = t.mu.at(item.var);
      if (!item.key) {
        row.emplace(item.attr_name(), bound);
        continue;
      }
      const Value* prop = g.element_prop(bound, *item.key);
      if (!prop) {
        ok = false;
        break;
      }
      row.emplace(item.attr_name(), *prop);
    }
    if (ok) out.rows.insert(std::move(row));
  }
  return out;
}

}  // namespace gqlcore
