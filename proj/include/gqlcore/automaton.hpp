#pragma once

#include <set>
#include <string>
#include <vector>

#include "gqlcore/pattern.hpp"

namespace gqlcore {

/// NFA over the orientation alphabet {a, b}: a = forward edge, b = backward
/// edge. '\0' marks an ε-transition.
struct EdgeWordAutomaton {
  struct Transition {
    char symbol;  // 'a', 'b', or '\0'
    int to;
  };
  std::vector<std::vector<Transition>> delta;
  int initial = 0;
  int final_state = 0;

  int state_count() const { return static_cast<int>(delta.size()); }

  std::set<int> eps_closure(std::set<int> states) const {
    std::vector<int> work(states.begin(), states.end());
    while (!work.empty()) {
      int s = work.back();
      work.pop_back();
      for (const auto& t : delta[s])
        if (t.symbol == '\0' && states.insert(t.to).second) work.push_back(t.to);
    }
    return states;
  }

  bool accepts(const std::string& word) const {
    std::set<int> cur = eps_closure({initial});
    for (char c : word) {
      std::set<int> next;
      for (int s : cur)
        for (const auto& t : delta[s])
          if (t.symbol == c) next.insert(t.to);
      cur = eps_closure(std::move(next));
      if (cur.empty()) return false;
    }
    return cur.count(final_state) > 0;
  }
};

namespace detail {

struct NfaBuilder {
  EdgeWordAutomaton nfa;

  int fresh() {
    nfa.delta.emplace_back();
    return nfa.state_count() - 1;
  }
  void edge(int from, char symbol, int to) { nfa.delta[from].push_back({symbol, to}); }

  struct Frag {
    int start, accept;
  };

  Frag symbol_frag(char c) {
    Frag f{fresh(), fresh()};
    edge(f.start, c, f.accept);
    return f;
  }

  Frag build(const Pattern& p) {
    switch (p.kind) {
      case Pattern::Kind::node:
        return symbol_frag('\0');
      case Pattern::Kind::fwd:
        return symbol_frag('a');
      case Pattern::Kind::bwd:
        return symbol_frag('b');
      case Pattern::Kind::concat: {
        Frag l = build(*p.left);
        Frag r = build(*p.right);
        edge(l.accept, '\0', r.start);
        return {l.start, r.accept};
      }
      case Pattern::Kind::alt: {
        Frag l = build(*p.left);
        Frag r = build(*p.right);
        Frag f{fresh(), fresh()};
        edge(f.start, '\0', l.start);
        edge(f.start, '\0', r.start);
        edge(l.accept, '\0', f.accept);
        edge(r.accept, '\0', f.accept);
        return f;
      }
      case Pattern::Kind::repeat: {
        // lo mandatory copies, then either a star block (unbounded) or
        // hi - lo optional copies.
        int start = fresh();
        int cur = start;
        for (std::uint32_t i = 0; i < p.lo; ++i) {
          Frag f = build(*p.child);
          edge(cur, '\0', f.start);
          cur = f.accept;
        }
        if (!p.hi) {
          Frag f = build(*p.child);
          int accept = fresh();
          edge(cur, '\0', f.start);
          edge(cur, '\0', accept);
          edge(f.accept, '\0', f.start);
          edge(f.accept, '\0', accept);
          return {start, accept};
        }
        int accept = fresh();
        edge(cur, '\0', accept);
        for (std::uint32_t i = p.lo; i < *p.hi; ++i) {
          Frag f = build(*p.child);
          edge(cur, '\0', f.start);
          cur = f.accept;
          edge(cur, '\0', accept);
        }
        return {start, accept};
      }
      case Pattern::Kind::cond:
        throw PatternError("pattern with conditions has no edge-word automaton");
    }
    throw PatternError("unreachable pattern kind");
  }
};

inline bool has_variables(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::node:
    case Pattern::Kind::fwd:
    case Pattern::Kind::bwd:
      return p.var.has_value();
    case Pattern::Kind::concat:
    case Pattern::Kind::alt:
      return has_variables(*p.left) || has_variables(*p.right);
    case Pattern::Kind::repeat:
      return has_variables(*p.child);
    case Pattern::Kind::cond:
      return true;  // handled separately; conditions imply variables
  }
  return false;
}

inline bool has_conditions(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::node:
    case Pattern::Kind::fwd:
    case Pattern::Kind::bwd:
      return false;
    case Pattern::Kind::concat:
    case Pattern::Kind::alt:
      return has_conditions(*p.left) || has_conditions(*p.right);
    case Pattern::Kind::repeat:
      return has_conditions(*p.child);
    case Pattern::Kind::cond:
      return true;
  }
  return false;
}

}  // namespace detail

/// Thompson-style construction. A word o_1…o_m over {a,b} is accepted iff
/// the path with those edge orientations matches ψ on a data-less path.
/// Requires a variable-free, condition-free pattern.
inline EdgeWordAutomaton pattern_to_automaton(const Pattern& p) {
  if (detail::has_conditions(p))
    throw PatternError("pattern_to_automaton requires a condition-free pattern");
  if (detail::has_variables(p))
    throw PatternError("pattern_to_automaton requires a variable-free pattern");
  detail::NfaBuilder b;
  auto frag = b.build(p);
  b.nfa.initial = frag.start;
  b.nfa.final_state = frag.accept;
  return b.nfa;
}

}  // namespace gqlcore
