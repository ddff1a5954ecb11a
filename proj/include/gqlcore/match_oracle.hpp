#pragma once

#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "gqlcore/patmatch.hpp"

namespace gqlcore {

/// All alternating sequences of length exactly `len`; repeated nodes and
/// edges are allowed and every edge may be traversed in both orientations.
inline std::vector<Path> paths_of_length(const PropertyGraph& g, std::int32_t len) {
  std::vector<Path> out;
  Path cur;
  auto walk = [&](auto&& self, std::int32_t at, std::int32_t remaining) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (std::int32_t e : g.out_edges(at)) {
      cur.steps.push_back({e, true});
      self(self, g.tgt(e), remaining - 1);
      cur.steps.pop_back();
    }
    for (std::int32_t e : g.in_edges(at)) {
      cur.steps.push_back({e, false});
      self(self, g.src(e), remaining - 1);
      cur.steps.pop_back();
    }
  };
  for (std::int32_t n = 0; n < g.node_count(); ++n) {
    cur.start = n;
    walk(walk, n, len);
  }
  return out;
}

inline std::vector<Path> enumerate_paths(const PropertyGraph& g, std::int32_t max_len) {
  std::vector<Path> out;
  for (std::int32_t len = 0; len <= max_len; ++len) {
    auto level = paths_of_length(g, len);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Computes {μ | (p, μ) ∈ ⟦ψ⟧_G} for one concrete path by structural
/// recursion over subranges of the path — the literal reading of the
/// semantics, used to cross-validate the endpoint-abstraction evaluator.
class PathMatcher {
 public:
  PathMatcher(const PropertyGraph& g, const Path& p) : g_(g), p_(p) {
    nodes_.resize(p.length() + 1);
    nodes_[0] = p.start;
    for (std::int32_t i = 0; i < p.length(); ++i) {
      const auto& st = p.steps[i];
      nodes_[i + 1] = st.forward ? g.tgt(st.edge) : g.src(st.edge);
    }
  }

  const std::set<Binding>& match(const Pattern& pat, std::int32_t i, std::int32_t j) {
    auto key = std::make_tuple(&pat, i, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::set<Binding> result = compute(pat, i, j);
    return memo_.emplace(key, std::move(result)).first->second;
  }

  std::set<Binding> match_full(const Pattern& pat) { return match(pat, 0, p_.length()); }

 private:
  std::set<Binding> compute(const Pattern& pat, std::int32_t i, std::int32_t j) {
    std::set<Binding> out;
    switch (pat.kind) {
      case Pattern::Kind::node:
        if (i == j) {
          Binding mu;
          if (pat.var) mu.emplace(*pat.var, Value(NodeRef{nodes_[i]}));
          out.insert(std::move(mu));
        }
        break;
      case Pattern::Kind::fwd:
      case Pattern::Kind::bwd:
        if (j == i + 1) {
          const auto& st = p_.steps[i];
          bool want_forward = pat.kind == Pattern::Kind::fwd;
          if (st.forward == want_forward) {
            Binding mu;
            if (pat.var) mu.emplace(*pat.var, Value(EdgeRef{st.edge}));
            out.insert(std::move(mu));
          }
        }
        break;
      case Pattern::Kind::concat:
        for (std::int32_t k = i; k <= j; ++k) {
          const auto& ls = match(*pat.left, i, k);
          if (ls.empty()) continue;
          const auto& rs = match(*pat.right, k, j);
          for (const auto& a : ls)
            for (const auto& b : rs)
              if (compatible(a, b)) out.insert(merge(a, b));
        }
        break;
      case Pattern::Kind::alt: {
        out = match(*pat.left, i, j);
        const auto& rs = match(*pat.right, i, j);
        out.insert(rs.begin(), rs.end());
        break;
      }
      case Pattern::Kind::cond:
        for (const auto& mu : match(*pat.child, i, j))
          if (eval_condition(mu, g_, *pat.guard)) out.insert(mu);
        break;
      case Pattern::Kind::repeat:
        if (repeat_covers(pat, i, j)) out.insert(Binding{});
        break;
    }
    return out;
  }

  using BoolMatrix = std::vector<std::vector<bool>>;

  BoolMatrix multiply(const BoolMatrix& a, const BoolMatrix& b) const {
    std::size_t n = a.size();
    BoolMatrix out(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (a[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (b[k][j]) out[i][j] = true;
    return out;
  }

  bool repeat_covers(const Pattern& pat, std::int32_t i, std::int32_t j) {
    auto it = repeat_memo_.find(&pat);
    if (it == repeat_memo_.end()) {
      std::size_t n = nodes_.size();
      BoolMatrix piece(n, std::vector<bool>(n, false));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
          if (!match(*pat.child, static_cast<std::int32_t>(a), static_cast<std::int32_t>(b))
                   .empty())
            piece[a][b] = true;
      BoolMatrix identity(n, std::vector<bool>(n, false));
      for (std::size_t a = 0; a < n; ++a) identity[a][a] = true;

      BoolMatrix cur = identity;  // piece^k, k = 0
      for (std::uint32_t k = 0; k < pat.lo; ++k) cur = multiply(cur, piece);

      BoolMatrix acc = cur;
      if (!pat.hi) {
        // cur · piece*: saturate.
        for (;;) {
          BoolMatrix next = multiply(acc, piece);
          bool grew = false;
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
              if (next[a][b] && !acc[a][b]) {
                acc[a][b] = true;
                grew = true;
              }
          if (!grew) break;
        }
      } else {
        for (std::uint32_t k = pat.lo; k < *pat.hi; ++k) {
          cur = multiply(cur, piece);
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
              if (cur[a][b]) acc[a][b] = true;
        }
      }
      it = repeat_memo_.emplace(&pat, std::move(acc)).first;
    }
    return it->second[i][j];
  }

  const PropertyGraph& g_;
  const Path& p_;
  std::vector<std::int32_t> nodes_;
  std::map<std::tuple<const Pattern*, std::int32_t, std::int32_t>, std::set<Binding>> memo_;
  std::map<const Pattern*, BoolMatrix> repeat_memo_;
};

/// Exactly the (p, μ) ∈ ⟦ψ⟧_G with |p| ≤ max_len, by exhaustive enumeration.
inline std::set<std::pair<Path, Binding>> enumerate_matches_oracle(const PropertyGraph& g,
                                                                   const Pattern& pat,
                                                                   std::int32_t max_len) {
  std::set<std::pair<Path, Binding>> out;
  for (const auto& p : enumerate_paths(g, max_len)) {
    PathMatcher m(g, p);
    for (const auto& mu : m.match_full(pat)) out.emplace(p, mu);
  }
  return out;
}

/// Endpoint projection of the oracle at one path length level.
inline std::set<MatchTriple> oracle_triples_for_paths(const PropertyGraph& g, const Pattern& pat,
                                                      const std::vector<Path>& paths) {
  std::set<MatchTriple> out;
  for (const auto& p : paths) {
    PathMatcher m(g, p);
    const auto& mus = m.match_full(pat);
    if (mus.empty()) continue;
    std::int32_t end = path_end(g, p);
    for (const auto& mu : mus) out.insert({p.start, end, mu});
  }
  return out;
}

/// Data-less path whose edge orientations spell `word` (a = forward,
/// b = backward); also returns the full traversal as a path.
inline std::pair<PropertyGraph, Path> zigzag_path(const std::string& word) {
  GraphBuilder b;
  for (std::size_t i = 0; i <= word.size(); ++i) b.add_node("n" + std::to_string(i));
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::string src = "n" + std::to_string(word[i] == 'a' ? i : i + 1);
    std::string tgt = "n" + std::to_string(word[i] == 'a' ? i + 1 : i);
    b.add_edge("e" + std::to_string(i), src, tgt);
  }
  PropertyGraph g = b.build();
  Path p;
  p.start = 0;
  for (std::size_t i = 0; i < word.size(); ++i)
    p.steps.push_back({static_cast<std::int32_t>(i), word[i] == 'a'});
  return {std::move(g), std::move(p)};
}

}  // namespace gqlcore
