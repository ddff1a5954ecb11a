#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gqlcore/value.hpp"

namespace gqlcore {

struct PatternError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conditions over pattern variables:
// θ := x.k = x'.k' | x.k < x'.k' | L(x) | θ ∧ θ' | θ ∨ θ' | ¬θ
struct Condition;
using CondPtr = std::shared_ptr<const Condition>;

struct Condition {
  enum class Kind { prop_eq, prop_lt, has_label, c_and, c_or, c_not };
  Kind kind;
  std::string var, key;    // prop_eq/prop_lt lhs, has_label var
  std::string var2, key2;  // prop_eq/prop_lt rhs
  std::string label;
  CondPtr a, b;
};

namespace pc {
inline CondPtr prop_eq(std::string x, std::string k, std::string y, std::string k2) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::prop_eq;
  c->var = std::move(x);
  c->key = std::move(k);
  c->var2 = std::move(y);
  c->key2 = std::move(k2);
  return c;
}
inline CondPtr prop_lt(std::string x, std::string k, std::string y, std::string k2) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::prop_lt;
  c->var = std::move(x);
  c->key = std::move(k);
  c->var2 = std::move(y);
  c->key2 = std::move(k2);
  return c;
}
inline CondPtr has_label(std::string label, std::string x) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::has_label;
  c->label = std::move(label);
  c->var = std::move(x);
  return c;
}
inline CondPtr c_and(CondPtr l, CondPtr r) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::c_and;
  c->a = std::move(l);
  c->b = std::move(r);
  return c;
}
inline CondPtr c_or(CondPtr l, CondPtr r) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::c_or;
  c->a = std::move(l);
  c->b = std::move(r);
  return c;
}
inline CondPtr c_not(CondPtr x) {
  auto c = std::make_shared<Condition>();
  c->kind = Condition::Kind::c_not;
  c->a = std::move(x);
  return c;
}
}  // namespace pc

inline void condition_vars(const Condition& c, std::set<std::string>& out) {
  switch (c.kind) {
    case Condition::Kind::prop_eq:
    case Condition::Kind::prop_lt:
      out.insert(c.var);
      out.insert(c.var2);
      break;
    case Condition::Kind::has_label:
      out.insert(c.var);
      break;
    case Condition::Kind::c_not:
      condition_vars(*c.a, out);
      break;
    case Condition::Kind::c_and:
    case Condition::Kind::c_or:
      condition_vars(*c.a, out);
      condition_vars(*c.b, out);
      break;
  }
}

// ---------------------------------------------------------------------------
// Pattern AST:
// ψ := (x) | →x | ←x | ψ1 ψ2 | ψ1 + ψ2 | ψ^{n..m} | ψ⟨θ⟩
// Variables on atoms are optional. Construction goes through the factories
// below, which enforce the side conditions.

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Pattern {
  enum class Kind { node, fwd, bwd, concat, alt, repeat, cond };
  Kind kind;
  std::optional<std::string> var;     // atoms
  PatternPtr left, right;             // concat / alt
  PatternPtr child;                   // repeat / cond
  std::uint32_t lo = 0;
  std::optional<std::uint32_t> hi;    // repeat; nullopt = ∞
  CondPtr guard;                      // cond
};

/// sch(ψ): free variables. Repetition binds everything beneath it.
inline std::set<std::string> free_vars(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::node:
    case Pattern::Kind::fwd:
    case Pattern::Kind::bwd:
      return p.var ? std::set<std::string>{*p.var} : std::set<std::string>{};
    case Pattern::Kind::concat: {
      auto l = free_vars(*p.left);
      auto r = free_vars(*p.right);
      l.insert(r.begin(), r.end());
      return l;
    }
    case Pattern::Kind::alt:
      return free_vars(*p.left);
    case Pattern::Kind::repeat:
      return {};
    case Pattern::Kind::cond:
      return free_vars(*p.child);
  }
  return {};
}

inline std::string print_condition(const Condition& c) {
  switch (c.kind) {
    case Condition::Kind::prop_eq:
      return c.var + "." + c.key + " = " + c.var2 + "." + c.key2;
    case Condition::Kind::prop_lt:
      return c.var + "." + c.key + " < " + c.var2 + "." + c.key2;
    case Condition::Kind::has_label:
      return ":" + c.label + "(" + c.var + ")";
    case Condition::Kind::c_not:
      return "not (" + print_condition(*c.a) + ")";
    case Condition::Kind::c_and:
      return "(" + print_condition(*c.a) + " and " + print_condition(*c.b) + ")";
    case Condition::Kind::c_or:
      return "(" + print_condition(*c.a) + " or " + print_condition(*c.b) + ")";
  }
  return "";
}

/// Concrete syntax; parses back to an equal AST. Right-nested concatenations
/// and unions keep their shape through explicit bracket groups.
inline std::string print_pattern(const Pattern& p) {
  auto group = [](const std::string& s) { return "[ " + s + " ]"; };
  auto as_concat_operand = [&](const Pattern& x) {
    std::string s = print_pattern(x);
    if (x.kind == Pattern::Kind::alt ||
        (x.kind == Pattern::Kind::concat))  // keep association explicit
      return group(s);
    return s;
  };
  switch (p.kind) {
    case Pattern::Kind::node:
      return p.var ? "(" + *p.var + ")" : "()";
    case Pattern::Kind::fwd:
      return p.var ? "-[" + *p.var + "]->" : "-->";
    case Pattern::Kind::bwd:
      return p.var ? "<-[" + *p.var + "]-" : "<--";
    case Pattern::Kind::concat: {
      std::string l =
          p.left->kind == Pattern::Kind::alt ? group(print_pattern(*p.left)) : print_pattern(*p.left);
      return l + " " + as_concat_operand(*p.right);
    }
    case Pattern::Kind::alt: {
      std::string r = p.right->kind == Pattern::Kind::alt ? group(print_pattern(*p.right))
                                                          : print_pattern(*p.right);
      return print_pattern(*p.left) + " + " + r;
    }
    case Pattern::Kind::repeat: {
      std::string bounds =
          "{" + std::to_string(p.lo) + ".." + (p.hi ? std::to_string(*p.hi) : "*") + "}";
      return group(print_pattern(*p.child)) + bounds;
    }
    case Pattern::Kind::cond:
      return "[ " + print_pattern(*p.child) + " | " + print_condition(*p.guard) + " ]";
  }
  return "";
}

namespace pat {
inline PatternPtr node(std::optional<std::string> var = std::nullopt) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::node;
  p->var = std::move(var);
  return p;
}
inline PatternPtr fwd(std::optional<std::string> var = std::nullopt) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::fwd;
  p->var = std::move(var);
  return p;
}
inline PatternPtr bwd(std::optional<std::string> var = std::nullopt) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::bwd;
  p->var = std::move(var);
  return p;
}
inline PatternPtr concat(PatternPtr l, PatternPtr r) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::concat;
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}
inline PatternPtr alt(PatternPtr l, PatternPtr r) {
  auto lv = free_vars(*l);
  auto rv = free_vars(*r);
  if (lv != rv) {
    auto render = [](const std::set<std::string>& s) {
      std::string out = "{";
      for (const auto& v : s) {
        if (out.size() > 1) out += ",";
        out += v;
      }
      return out + "}";
    };
    throw PatternError("union arms bind different free variables: " + render(lv) +
                       " vs " + render(rv));
  }
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::alt;
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}
inline PatternPtr repeat(PatternPtr child, std::uint32_t lo,
                         std::optional<std::uint32_t> hi) {
  if (hi && *hi < lo) throw PatternError("repetition bounds must satisfy lo <= hi");
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::repeat;
  p->child = std::move(child);
  p->lo = lo;
  p->hi = hi;
  return p;
}
inline PatternPtr with_cond(PatternPtr child, CondPtr guard) {
  std::set<std::string> used;
  condition_vars(*guard, used);
  auto sch = free_vars(*child);
  for (const auto& v : used)
    if (!sch.count(v))
      throw PatternError("condition variable " + v + " is not free in the conditioned pattern");
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::cond;
  p->child = std::move(child);
  p->guard = std::move(guard);
  return p;
}
}  // namespace pat

inline bool condition_equal(const Condition& a, const Condition& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Condition::Kind::prop_eq:
    case Condition::Kind::prop_lt:
      return a.var == b.var && a.key == b.key && a.var2 == b.var2 && a.key2 == b.key2;
    case Condition::Kind::has_label:
      return a.label == b.label && a.var == b.var;
    case Condition::Kind::c_not:
      return condition_equal(*a.a, *b.a);
    case Condition::Kind::c_and:
    case Condition::Kind::c_or:
      return condition_equal(*a.a, *b.a) && condition_equal(*a.b, *b.b);
  }
  return false;
}

inline bool pattern_equal(const Pattern& a, const Pattern& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Pattern::Kind::node:
    case Pattern::Kind::fwd:
    case Pattern::Kind::bwd:
      return a.var == b.var;
    case Pattern::Kind::concat:
    case Pattern::Kind::alt:
      return pattern_equal(*a.left, *b.left) && pattern_equal(*a.right, *b.right);
    case Pattern::Kind::repeat:
      return a.lo == b.lo && a.hi == b.hi && pattern_equal(*a.child, *b.child);
    case Pattern::Kind::cond:
      return condition_equal(*a.guard, *b.guard) && pattern_equal(*a.child, *b.child);
  }
  return false;
}

// ---------------------------------------------------------------------------
// One-way path patterns: no backward atoms and variable-disjoint
// concatenations. Violations are reported per offending subterm.

struct OneWayViolation {
  std::string reason;
  std::string subterm;
};

inline void one_way_violations(const Pattern& p, std::vector<OneWayViolation>& out) {
  switch (p.kind) {
    case Pattern::Kind::node:
    case Pattern::Kind::fwd:
      break;
    case Pattern::Kind::bwd:
      out.push_back({"backward edge", print_pattern(p)});
      break;
    case Pattern::Kind::concat: {
      auto l = free_vars(*p.left);
      auto r = free_vars(*p.right);
      for (const auto& v : l)
        if (r.count(v)) {
          out.push_back({"variable " + v + " shared across concatenation", print_pattern(p)});
          break;
        }
      one_way_violations(*p.left, out);
      one_way_violations(*p.right, out);
      break;
    }
    case Pattern::Kind::alt:
      one_way_violations(*p.left, out);
      one_way_violations(*p.right, out);
      break;
    case Pattern::Kind::repeat:
    case Pattern::Kind::cond:
      one_way_violations(*p.child, out);
      break;
  }
}

inline bool is_one_way(const Pattern& p, std::vector<OneWayViolation>* report = nullptr) {
  std::vector<OneWayViolation> v;
  one_way_violations(p, v);
  if (report) *report = v;
  return v.empty();
}

// ---------------------------------------------------------------------------
// +-normal form: union occurs only under unbounded repetition (a top-level
// sum of union-free arms). The translation distributes concatenation over
// union arms and unfolds bounded repetitions. Unfolded copies get fresh
// variables and a {1..1} wrapper that discards their bindings, so
// sch(ψ^{n..m}) = ∅ is preserved exactly. In dataless mode variables and
// conditions are stripped first, which keeps semantics only on graphs
// without properties.

namespace detail {

inline PatternPtr strip_vars_and_conds(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::node:
      return pat::node();
    case Pattern::Kind::fwd:
      return pat::fwd();
    case Pattern::Kind::bwd:
      return pat::bwd();
    case Pattern::Kind::concat:
      return pat::concat(strip_vars_and_conds(*p.left), strip_vars_and_conds(*p.right));
    case Pattern::Kind::alt:
      return pat::alt(strip_vars_and_conds(*p.left), strip_vars_and_conds(*p.right));
    case Pattern::Kind::repeat:
      return pat::repeat(strip_vars_and_conds(*p.child), p.lo, p.hi);
    case Pattern::Kind::cond:
      return strip_vars_and_conds(*p.child);
  }
  return nullptr;
}

inline CondPtr rename_cond(const Condition& c, const std::string& suffix) {
  switch (c.kind) {
    case Condition::Kind::prop_eq:
      return pc::prop_eq(c.var + suffix, c.key, c.var2 + suffix, c.key2);
    case Condition::Kind::prop_lt:
      return pc::prop_lt(c.var + suffix, c.key, c.var2 + suffix, c.key2);
    case Condition::Kind::has_label:
      return pc::has_label(c.label, c.var + suffix);
    case Condition::Kind::c_not:
      return pc::c_not(rename_cond(*c.a, suffix));
    case Condition::Kind::c_and:
      return pc::c_and(rename_cond(*c.a, suffix), rename_cond(*c.b, suffix));
    case Condition::Kind::c_or:
      return pc::c_or(rename_cond(*c.a, suffix), rename_cond(*c.b, suffix));
  }
  return nullptr;
}

inline PatternPtr rename_vars(const Pattern& p, const std::string& suffix) {
  switch (p.kind) {
    case Pattern::Kind::node:
      return pat::node(p.var ? std::optional<std::string>(*p.var + suffix) : std::nullopt);
    case Pattern::Kind::fwd:
      return pat::fwd(p.var ? std::optional<std::string>(*p.var + suffix) : std::nullopt);
    case Pattern::Kind::bwd:
      return pat::bwd(p.var ? std::optional<std::string>(*p.var + suffix) : std::nullopt);
    case Pattern::Kind::concat:
      return pat::concat(rename_vars(*p.left, suffix), rename_vars(*p.right, suffix));
    case Pattern::Kind::alt:
      return pat::alt(rename_vars(*p.left, suffix), rename_vars(*p.right, suffix));
    case Pattern::Kind::repeat:
      // Variables under repetition are not free; copies still get renamed so
      // nested unfoldings stay apart, which is harmless.
      return pat::repeat(rename_vars(*p.child, suffix), p.lo, p.hi);
    case Pattern::Kind::cond:
      return pat::with_cond(rename_vars(*p.child, suffix), rename_cond(*p.guard, suffix));
  }
  return nullptr;
}

struct PnfContext {
  int fresh = 0;
};

inline std::vector<PatternPtr> pnf_arms(const Pattern& p, PnfContext& ctx);

inline std::vector<PatternPtr> pnf_repeat(const Pattern& p, PnfContext& ctx) {
  if (!p.hi) {
    // Unbounded repetition passes through; unions beneath it are allowed.
    return {pat::repeat(p.child, p.lo, std::nullopt)};
  }
  std::vector<PatternPtr> arms;
  for (std::uint32_t k = p.lo; k <= *p.hi; ++k) {
    if (k == 0) {
      arms.push_back(pat::node());
      continue;
    }
    PatternPtr unfolded;
    for (std::uint32_t i = 0; i < k; ++i) {
      auto copy = rename_vars(*p.child, "_u" + std::to_string(ctx.fresh++));
      unfolded = unfolded ? pat::concat(unfolded, copy) : copy;
    }
    for (auto& arm : pnf_arms(*unfolded, ctx)) {
      if (!free_vars(*arm).empty()) arm = pat::repeat(arm, 1, 1);
      arms.push_back(arm);
    }
  }
  return arms;
}

inline std::vector<PatternPtr> pnf_arms(const Pattern& p, PnfContext& ctx) {
  switch (p.kind) {
    case Pattern::Kind::node:
    case Pattern::Kind::fwd:
    case Pattern::Kind::bwd:
      return {std::make_shared<Pattern>(p)};
    case Pattern::Kind::alt: {
      auto arms = pnf_arms(*p.left, ctx);
      auto right = pnf_arms(*p.right, ctx);
      arms.insert(arms.end(), right.begin(), right.end());
      return arms;
    }
    case Pattern::Kind::concat: {
      auto ls = pnf_arms(*p.left, ctx);
      auto rs = pnf_arms(*p.right, ctx);
      std::vector<PatternPtr> arms;
      for (const auto& l : ls)
        for (const auto& r : rs) arms.push_back(pat::concat(l, r));
      return arms;
    }
    case Pattern::Kind::cond: {
      auto arms = pnf_arms(*p.child, ctx);
      for (auto& a : arms) a = pat::with_cond(a, p.guard);
      return arms;
    }
    case Pattern::Kind::repeat:
      return pnf_repeat(p, ctx);
  }
  return {};
}

}  // namespace detail

inline PatternPtr plus_normal_form(const Pattern& p, bool dataless_mode = false) {
  std::vector<OneWayViolation> violations;
  if (!is_one_way(p, &violations))
    throw PatternError("plus-normal form requires a one-way pattern; " +
                       violations.front().reason + " in " + violations.front().subterm);
  detail::PnfContext ctx;
  PatternPtr input = dataless_mode ? detail::strip_vars_and_conds(p)
                                   : std::make_shared<Pattern>(p);
  auto arms = detail::pnf_arms(*input, ctx);
  PatternPtr out;
  for (const auto& arm : arms) out = out ? pat::alt(out, arm) : arm;
  return out;
}

inline bool plus_nf_arm_ok(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::node:
    case Pattern::Kind::fwd:
    case Pattern::Kind::bwd:
      return true;
    case Pattern::Kind::alt:
      return false;
    case Pattern::Kind::concat:
      return plus_nf_arm_ok(*p.left) && plus_nf_arm_ok(*p.right);
    case Pattern::Kind::cond:
      return plus_nf_arm_ok(*p.child);
    case Pattern::Kind::repeat:
      return !p.hi ? true : plus_nf_arm_ok(*p.child);
  }
  return false;
}

inline bool is_plus_nf(const Pattern& p) {
  if (p.kind == Pattern::Kind::alt) return is_plus_nf(*p.left) && is_plus_nf(*p.right);
  return plus_nf_arm_ok(p);
}

// ---------------------------------------------------------------------------
// Patterns with output

struct OutputItem {
  std::string var;
  std::optional<std::string> key;  // set: project prop(μ(var), key)

  std::string attr_name() const { return key ? var + "." + *key : var; }
  auto operator<=>(const OutputItem&) const = default;
};

struct OutputSpec {
  std::vector<OutputItem> items;
};

inline void validate_output(const OutputSpec& out, const Pattern& p) {
  auto sch = free_vars(p);
  std::set<std::string> names;
  for (const auto& item : out.items) {
    if (!sch.count(item.var))
      throw PatternError("output variable " + item.var + " is not free in the pattern");
    if (!names.insert(item.attr_name()).second)
      throw PatternError("duplicate output attribute " + item.attr_name());
  }
}

}  // namespace gqlcore
