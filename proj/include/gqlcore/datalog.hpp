#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gqlcore/graph.hpp"
#include "gqlcore/pattern_text.hpp"
#include "gqlcore/value.hpp"

namespace gqlcore {

// Positive Datalog. Heads are variable atoms over IDB predicates; bodies mix
// IDB and EDB atoms and may carry constants. Repeated variables inside an
// atom are permitted and denote equality.

struct DlArg {
  bool is_var = true;
  std::string var;
  Value constant;
};

struct DlAtom {
  std::string pred;
  std::vector<DlArg> args;
};

struct DlRule {
  DlAtom head;
  std::vector<DlAtom> body;
};

struct DatalogProgram {
  std::vector<DlRule> rules;
  std::string out;

  std::set<std::string> idb_predicates() const {
    std::set<std::string> idb;
    for (const auto& r : rules) idb.insert(r.head.pred);
    return idb;
  }
};

struct DatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Program text: one rule per line, `head(x,y) :- atom(x,z), atom(z,y).`
// Constants are quoted strings or integers; `.out P` names the output
// predicate; '#' starts a comment.
inline DatalogProgram parse_datalog(const std::string& text) {
  DatalogProgram prog;
  Lexer lx(text);

  auto parse_atom = [&]() {
    DlAtom atom;
    atom.pred = lx.expect(Tok::ident, "predicate name").text;
    lx.expect(Tok::lparen, "'('");
    if (!lx.at(Tok::rparen)) {
      do {
        DlArg arg;
        if (lx.at(Tok::ident)) {
          arg.is_var = true;
          arg.var = lx.next().text;
        } else if (lx.at(Tok::str)) {
          arg.is_var = false;
          arg.constant = Value(lx.next().text);
        } else if (lx.at(Tok::nat)) {
          arg.is_var = false;
          arg.constant = Value(lx.next().number);
        } else {
          lx.fail("expected variable or constant");
        }
        atom.args.push_back(std::move(arg));
      } while (lx.accept(Tok::comma));
    }
    lx.expect(Tok::rparen, "')'");
    return atom;
  };

  while (!lx.at(Tok::end)) {
    if (lx.accept(Tok::dot)) {
      if (!lx.accept_keyword("out")) lx.fail("expected directive name after '.'");
      prog.out = lx.expect(Tok::ident, "output predicate").text;
      continue;
    }
    DlRule rule;
    rule.head = parse_atom();
    lx.expect(Tok::turnstile, "':-'");
    rule.body.push_back(parse_atom());
    while (lx.accept(Tok::comma)) rule.body.push_back(parse_atom());
    lx.expect(Tok::dot, "'.'");
    prog.rules.push_back(std::move(rule));
  }
  return prog;
}

using DlTuple = std::vector<Value>;
using DlRelation = std::set<DlTuple>;
using DlDatabase = std::map<std::string, DlRelation>;

/// Relational encoding of a property graph: N(x), E(src,tgt), lab(x,l),
/// src(e,x), tgt(e,x), prop(x,k,v).
inline DlDatabase encode_graph(const PropertyGraph& g) {
  DlDatabase db;
  auto& n_rel = db["N"];
  auto& e_rel = db["E"];
  auto& lab = db["lab"];
  auto& src = db["src"];
  auto& tgt = db["tgt"];
  auto& prop = db["prop"];
  for (std::int32_t n = 0; n < g.node_count(); ++n) {
    n_rel.insert({Value(NodeRef{n})});
    for (const auto& l : g.node_labels(n)) lab.insert({Value(NodeRef{n}), Value(l)});
    for (const auto& [k, v] : g.node_props(n)) prop.insert({Value(NodeRef{n}), Value(k), v});
  }
  for (std::int32_t e = 0; e < g.edge_count(); ++e) {
    e_rel.insert({Value(NodeRef{g.src(e)}), Value(NodeRef{g.tgt(e)})});
    src.insert({Value(EdgeRef{e}), Value(NodeRef{g.src(e)})});
    tgt.insert({Value(EdgeRef{e}), Value(NodeRef{g.tgt(e)})});
    for (const auto& l : g.edge_labels(e)) lab.insert({Value(EdgeRef{e}), Value(l)});
    for (const auto& [k, v] : g.edge_props(e)) prop.insert({Value(EdgeRef{e}), Value(k), v});
  }
  return db;
}

struct DlResult {
  std::map<std::string, DlRelation> idb;
  bool boolean = false;  // meaningful when the output predicate is nullary

  bool operator==(const DlResult&) const = default;
};

namespace detail {

using DlEnv = std::map<std::string, Value>;

inline bool unify_tuple(const DlAtom& atom, const DlTuple& tuple, DlEnv& env,
                        std::vector<std::string>& bound_here) {
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const DlArg& arg = atom.args[i];
    if (!arg.is_var) {
      if (!(tuple[i] == arg.constant)) return false;
      continue;
    }
    auto it = env.find(arg.var);
    if (it != env.end()) {
      if (!(it->second == tuple[i])) return false;
    } else {
      env.emplace(arg.var, tuple[i]);
      bound_here.push_back(arg.var);
    }
  }
  return true;
}

inline void undo(DlEnv& env, const std::vector<std::string>& bound_here) {
  for (const auto& v : bound_here) env.erase(v);
}

/// Joins the body left to right; one body position may be substituted with a
/// delta relation (semi-naive); pass nullptr for naive evaluation. Atoms with
/// a bound first argument use a range scan over the sorted relation, fully
/// bound atoms a membership probe.
/// TODO: probe on bound non-leading columns too; leading-column ranges are
/// enough for the programs shipped here.
template <typename Emit>
void eval_rule_bodies(const DlRule& rule, const DlDatabase& edb,
                      const std::map<std::string, DlRelation>& idb,
                      const DlRelation* delta_rel, int delta_pos, Emit&& emit) {
  DlEnv env;
  auto relation_for = [&](const DlAtom& atom, int pos) -> const DlRelation* {
    if (delta_rel && pos == delta_pos) return delta_rel;
    auto i = idb.find(atom.pred);
    if (i != idb.end()) return &i->second;
    auto e = edb.find(atom.pred);
    if (e != edb.end()) return &e->second;
    return nullptr;
  };
  auto walk = [&](auto&& self, std::size_t pos) -> void {
    if (pos == rule.body.size()) {
      DlTuple out;
      out.reserve(rule.head.args.size());
      for (const auto& arg : rule.head.args)
        out.push_back(arg.is_var ? env.at(arg.var) : arg.constant);
      emit(std::move(out));
      return;
    }
    const DlAtom& atom = rule.body[pos];
    const DlRelation* rel = relation_for(atom, static_cast<int>(pos));
    if (!rel || rel->empty()) return;
    if (rel->begin()->size() != atom.args.size())
      throw DatalogError("arity mismatch for predicate " + atom.pred);

    DlTuple probe;
    probe.reserve(atom.args.size());
    bool all_bound = true;
    for (const auto& arg : atom.args) {
      if (!arg.is_var) {
        probe.push_back(arg.constant);
        continue;
      }
      auto it = env.find(arg.var);
      if (it == env.end()) {
        all_bound = false;
        break;
      }
      probe.push_back(it->second);
    }
    if (all_bound) {
      if (rel->count(probe)) self(self, pos + 1);
      return;
    }

    auto scan = [&](DlRelation::const_iterator it, DlRelation::const_iterator end) {
      for (; it != end; ++it) {
        std::vector<std::string> bound_here;
        if (unify_tuple(atom, *it, env, bound_here)) self(self, pos + 1);
        undo(env, bound_here);
      }
    };
    if (!probe.empty()) {
      // First argument bound: walk the contiguous range sharing it.
      Value first = probe.front();
      auto it = rel->lower_bound(DlTuple{first});
      while (it != rel->end() && (*it)[0] == first) {
        std::vector<std::string> bound_here;
        if (unify_tuple(atom, *it, env, bound_here)) self(self, pos + 1);
        undo(env, bound_here);
        ++it;
      }
      return;
    }
    scan(rel->begin(), rel->end());
  };
  walk(walk, 0);
}

inline void check_program(const DatalogProgram& prog, const DlDatabase& edb) {
  auto idb = prog.idb_predicates();
  for (const auto& p : idb)
    if (edb.count(p))
      throw DatalogError("rule head redefines database relation " + p);
  for (const auto& rule : prog.rules) {
    std::set<std::string> body_vars;
    for (const auto& atom : rule.body)
      for (const auto& arg : atom.args)
        if (arg.is_var) body_vars.insert(arg.var);
    for (const auto& arg : rule.head.args) {
      if (!arg.is_var)
        throw DatalogError("constants are not allowed in rule heads (" + rule.head.pred + ")");
      if (!body_vars.count(arg.var))
        throw DatalogError("unsafe rule: head variable " + arg.var + " of " + rule.head.pred +
                           " does not occur in the body");
    }
  }
}

}  // namespace detail

/// Least model via naive iteration (every rule against the full database
/// until nothing changes). Retained as the oracle for the semi-naive path.
inline DlResult eval_datalog_naive(const DlDatabase& edb, const DatalogProgram& prog) {
  detail::check_program(prog, edb);
  DlResult result;
  for (const auto& p : prog.idb_predicates()) result.idb[p];
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : prog.rules) {
      auto& head_rel = result.idb[rule.head.pred];
      std::vector<DlTuple> fresh;
      detail::eval_rule_bodies(rule, edb, result.idb, nullptr, -1, [&](DlTuple t) {
        if (!head_rel.count(t)) fresh.push_back(std::move(t));
      });
      for (auto& t : fresh) changed |= head_rel.insert(std::move(t)).second;
    }
  }
  if (!prog.out.empty()) {
    auto it = result.idb.find(prog.out);
    result.boolean = it != result.idb.end() && !it->second.empty();
  }
  return result;
}

/// Least model via semi-naive (delta) iteration: recursive body positions
/// are joined against the previous round's new facts.
inline DlResult eval_datalog(const DlDatabase& edb, const DatalogProgram& prog) {
  detail::check_program(prog, edb);
  auto idb_preds = prog.idb_predicates();
  DlResult result;
  std::map<std::string, DlRelation> delta;
  for (const auto& p : idb_preds) {
    result.idb[p];
    delta[p];
  }

  // Round zero: rules evaluated over EDB plus (empty) IDB.
  for (const auto& rule : prog.rules) {
    detail::eval_rule_bodies(rule, edb, result.idb, nullptr, -1, [&](DlTuple t) {
      if (result.idb[rule.head.pred].count(t)) return;
      delta[rule.head.pred].insert(std::move(t));
    });
  }
  for (const auto& [p, rel] : delta) result.idb[p].insert(rel.begin(), rel.end());

  auto any_delta = [&]() {
    for (const auto& [p, rel] : delta)
      if (!rel.empty()) return true;
    return false;
  };

  while (any_delta()) {
    std::map<std::string, DlRelation> next;
    for (const auto& p : idb_preds) next[p];
    for (const auto& rule : prog.rules) {
      for (std::size_t pos = 0; pos < rule.body.size(); ++pos) {
        auto d = delta.find(rule.body[pos].pred);
        if (d == delta.end() || d->second.empty()) continue;
        detail::eval_rule_bodies(rule, edb, result.idb, &d->second, static_cast<int>(pos),
                                 [&](DlTuple t) {
                                   if (result.idb[rule.head.pred].count(t)) return;
                                   next[rule.head.pred].insert(std::move(t));
                                 });
      }
    }
    for (const auto& [p, rel] : next) result.idb[p].insert(rel.begin(), rel.end());
    delta = std::move(next);
  }

  if (!prog.out.empty()) {
    auto it = result.idb.find(prog.out);
    result.boolean = it != result.idb.end() && !it->second.empty();
  }
  return result;
}

/// Syntactic linearity: every rule body contains at most one atom whose
/// predicate is mutually recursive with the head (dependency-graph SCCs).
inline bool is_linear(const DatalogProgram& prog) {
  std::set<std::string> preds = prog.idb_predicates();
  std::map<std::string, std::set<std::string>> deps;
  for (const auto& rule : prog.rules)
    for (const auto& atom : rule.body)
      if (preds.count(atom.pred)) deps[rule.head.pred].insert(atom.pred);

  // Mutual recursion via reachability: p ~ q iff p reaches q and q reaches p.
  auto reaches = [&](const std::string& from) {
    std::set<std::string> seen;
    std::vector<std::string> work{from};
    while (!work.empty()) {
      auto cur = work.back();
      work.pop_back();
      for (const auto& nxt : deps[cur])
        if (seen.insert(nxt).second) work.push_back(nxt);
    }
    return seen;
  };
  std::map<std::string, std::set<std::string>> reach;
  for (const auto& p : preds) reach[p] = reaches(p);
  auto same_scc = [&](const std::string& a, const std::string& b) {
    return reach[a].count(b) && reach[b].count(a);
  };

  for (const auto& rule : prog.rules) {
    int recursive = 0;
    for (const auto& atom : rule.body)
      if (preds.count(atom.pred) && same_scc(rule.head.pred, atom.pred)) ++recursive;
    if (recursive > 1) return false;
  }
  return true;
}

}  // namespace gqlcore
