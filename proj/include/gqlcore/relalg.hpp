#pragma once

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>

#include "gqlcore/relation.hpp"

namespace gqlcore {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Equality conditions: θ := A = A' | A = c | ¬θ | θ ∨ θ' | θ ∧ θ'.
// The attr=constant atom exists for the pipelined worked example; random
// corpora stick to attribute equality.

struct EqCond;
using EqCondPtr = std::shared_ptr<const EqCond>;

struct EqCond {
  enum class Kind { attr_eq, const_eq, neg, conj, disj };
  Kind kind;
  std::string lhs, rhs;  // attr_eq: lhs = rhs; const_eq: lhs = constant
  Value constant;
  EqCondPtr a, b;
};

namespace cond {
inline EqCondPtr attr_eq(std::string l, std::string r) {
  auto c = std::make_shared<EqCond>();
  c->kind = EqCond::Kind::attr_eq;
  c->lhs = std::move(l);
  c->rhs = std::move(r);
  return c;
}
inline EqCondPtr const_eq(std::string l, Value v) {
  auto c = std::make_shared<EqCond>();
  c->kind = EqCond::Kind::const_eq;
  c->lhs = std::move(l);
  c->constant = std::move(v);
  return c;
}
inline EqCondPtr neg(EqCondPtr x) {
  auto c = std::make_shared<EqCond>();
  c->kind = EqCond::Kind::neg;
  c->a = std::move(x);
  return c;
}
inline EqCondPtr conj(EqCondPtr l, EqCondPtr r) {
  auto c = std::make_shared<EqCond>();
  c->kind = EqCond::Kind::conj;
  c->a = std::move(l);
  c->b = std::move(r);
  return c;
}
inline EqCondPtr disj(EqCondPtr l, EqCondPtr r) {
  auto c = std::make_shared<EqCond>();
  c->kind = EqCond::Kind::disj;
  c->a = std::move(l);
  c->b = std::move(r);
  return c;
}
}  // namespace cond

/// μ ⊨ θ; an equality atom holds only when both attributes are bound.
inline bool cond_matches(const Tuple& t, const EqCond& c) {
  switch (c.kind) {
    case EqCond::Kind::attr_eq: {
      auto l = t.find(c.lhs);
      auto r = t.find(c.rhs);
      return l != t.end() && r != t.end() && l->second == r->second;
    }
    case EqCond::Kind::const_eq: {
      auto l = t.find(c.lhs);
      return l != t.end() && l->second == c.constant;
    }
    case EqCond::Kind::neg:
      return !cond_matches(t, *c.a);
    case EqCond::Kind::conj:
      return cond_matches(t, *c.a) && cond_matches(t, *c.b);
    case EqCond::Kind::disj:
      return cond_matches(t, *c.a) || cond_matches(t, *c.b);
  }
  return false;
}

inline void cond_attrs(const EqCond& c, std::set<std::string>& out) {
  switch (c.kind) {
    case EqCond::Kind::attr_eq:
      out.insert(c.lhs);
      out.insert(c.rhs);
      break;
    case EqCond::Kind::const_eq:
      out.insert(c.lhs);
      break;
    case EqCond::Kind::neg:
      cond_attrs(*c.a, out);
      break;
    case EqCond::Kind::conj:
    case EqCond::Kind::disj:
      cond_attrs(*c.a, out);
      cond_attrs(*c.b, out);
      break;
  }
}

inline std::string print_cond(const EqCond& c) {
  auto quote = [](const Value& v) -> std::string {
    if (is_int(v)) return std::to_string(std::get<std::int64_t>(v));
    return "\"" + std::get<std::string>(v) + "\"";
  };
  switch (c.kind) {
    case EqCond::Kind::attr_eq:
      return c.lhs + " = " + c.rhs;
    case EqCond::Kind::const_eq:
      return c.lhs + " = " + quote(c.constant);
    case EqCond::Kind::neg:
      return "not (" + print_cond(*c.a) + ")";
    case EqCond::Kind::conj:
      return "(" + print_cond(*c.a) + " and " + print_cond(*c.b) + ")";
    case EqCond::Kind::disj:
      return "(" + print_cond(*c.a) + " or " + print_cond(*c.b) + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// RA expressions

struct RAExpr;
using RAExprPtr = std::shared_ptr<const RAExpr>;

struct RAExpr {
  enum class Kind {
    base,
    unit,  // I_∅ literal; target of pipelined clauses with no scan
    project,
    select,
    rename,
    join,
    set_union,
    set_intersect,
    set_diff
  };
  Kind kind;
  std::string rel;              // base
  std::set<std::string> attrs;  // project
  EqCondPtr cond;               // select
  std::string from, to;         // rename
  RAExprPtr left, right;
};

namespace ra {
inline RAExprPtr base(std::string rel) {
  auto e = std::make_shared<RAExpr>();
  e->kind = RAExpr::Kind::base;
  e->rel = std::move(rel);
  return e;
}
inline RAExprPtr unit() {
  auto e = std::make_shared<RAExpr>();
  e->kind = RAExpr::Kind::unit;
  return e;
}
inline RAExprPtr project(std::set<std::string> attrs, RAExprPtr x) {
  auto e = std::make_shared<RAExpr>();
  e->kind = RAExpr::Kind::project;
  e->attrs = std::move(attrs);
  e->left = std::move(x);
  return e;
}
inline RAExprPtr select(EqCondPtr c, RAExprPtr x) {
  auto e = std::make_shared<RAExpr>();
  e->kind = RAExpr::Kind::select;
  e->cond = std::move(c);
  e->left = std::move(x);
  return e;
}
inline RAExprPtr rename(std::string from, std::string to, RAExprPtr x) {
  auto e = std::make_shared<RAExpr>();
  e->kind = RAExpr::Kind::rename;
  e->from = std::move(from);
  e->to = std::move(to);
  e->left = std::move(x);
  return e;
}
inline RAExprPtr join(RAExprPtr l, RAExprPtr r) {
  // I_∅ is the unit of ⋈.
  if (l->kind == RAExpr::Kind::unit) return r;
  if (r->kind == RAExpr::Kind::unit) return l;
  auto e = std::make_shared<RAExpr>();
  e->kind = RAExpr::Kind::join;
  e->left = std::move(l);
  e->right = std::move(r);
  return e;
}
inline RAExprPtr set_op(RAExpr::Kind k, RAExprPtr l, RAExprPtr r) {
  auto e = std::make_shared<RAExpr>();
  e->kind = k;
  e->left = std::move(l);
  e->right = std::move(r);
  return e;
}
inline RAExprPtr set_union(RAExprPtr l, RAExprPtr r) {
  return set_op(RAExpr::Kind::set_union, std::move(l), std::move(r));
}
inline RAExprPtr set_intersect(RAExprPtr l, RAExprPtr r) {
  return set_op(RAExpr::Kind::set_intersect, std::move(l), std::move(r));
}
inline RAExprPtr set_diff(RAExprPtr l, RAExprPtr r) {
  return set_op(RAExpr::Kind::set_diff, std::move(l), std::move(r));
}
}  // namespace ra

using RASchema = std::map<std::string, std::set<std::string>>;
using Database = std::map<std::string, Relation>;

inline std::string print_ra(const RAExpr& e);

/// attr(·) with the usual side conditions; throws SchemaError naming the
/// offending subexpression.
inline std::set<std::string> ra_attrs(const RAExpr& e, const RASchema& schema) {
  auto fail = [&](const std::string& why) -> std::set<std::string> {
    throw SchemaError(why + " in: " + print_ra(e));
  };
  switch (e.kind) {
    case RAExpr::Kind::base: {
      auto it = schema.find(e.rel);
      if (it == schema.end()) return fail("unknown relation " + e.rel);
      return it->second;
    }
    case RAExpr::Kind::unit:
      return {};
    case RAExpr::Kind::project: {
      auto in = ra_attrs(*e.left, schema);
      for (const auto& a : e.attrs)
        if (!in.count(a)) return fail("projection attribute " + a + " not available");
      return e.attrs;
    }
    case RAExpr::Kind::select: {
      auto in = ra_attrs(*e.left, schema);
      std::set<std::string> used;
      cond_attrs(*e.cond, used);
      for (const auto& a : used)
        if (!in.count(a)) return fail("condition attribute " + a + " not available");
      return in;
    }
    case RAExpr::Kind::rename: {
      auto in = ra_attrs(*e.left, schema);
      if (!in.count(e.from)) return fail("rename source " + e.from + " not available");
      if (in.count(e.to)) return fail("rename target " + e.to + " already present");
      in.erase(e.from);
      in.insert(e.to);
      return in;
    }
    case RAExpr::Kind::join: {
      auto l = ra_attrs(*e.left, schema);
      auto r = ra_attrs(*e.right, schema);
      l.insert(r.begin(), r.end());
      return l;
    }
    case RAExpr::Kind::set_union:
    case RAExpr::Kind::set_intersect:
    case RAExpr::Kind::set_diff: {
      auto l = ra_attrs(*e.left, schema);
      auto r = ra_attrs(*e.right, schema);
      if (l != r) return fail("set operation over different attribute sets");
      return l;
    }
  }
  return {};
}

inline RASchema database_schema(const Database& db) {
  RASchema s;
  for (const auto& [name, rel] : db) s.emplace(name, rel.attrs);
  return s;
}

inline Relation eval_ra(const Database& db, const RAExpr& e) {
  switch (e.kind) {
    case RAExpr::Kind::base: {
      auto it = db.find(e.rel);
      if (it == db.end()) throw EvalError("missing base relation: " + e.rel);
      check_row_domains(it->second, e.rel.c_str());
      return it->second;
    }
    case RAExpr::Kind::unit:
      return unit_relation();
    case RAExpr::Kind::project: {
      Relation in = eval_ra(db, *e.left);
      Relation out = empty_relation(e.attrs);
      for (const auto& row : in.rows) out.rows.insert(restrict_tuple(row, e.attrs));
      return out;
    }
    case RAExpr::Kind::select: {
      Relation in = eval_ra(db, *e.left);
      Relation out = empty_relation(in.attrs);
      for (const auto& row : in.rows)
        if (cond_matches(row, *e.cond)) out.rows.insert(row);
      return out;
    }
    case RAExpr::Kind::rename: {
      Relation in = eval_ra(db, *e.left);
      auto attrs = in.attrs;
      attrs.erase(e.from);
      attrs.insert(e.to);
      Relation out = empty_relation(attrs);
      for (const auto& row : in.rows) {
        Tuple t;
        for (const auto& [k, v] : row) t.emplace(k == e.from ? e.to : k, v);
        out.rows.insert(std::move(t));
      }
      return out;
    }
    case RAExpr::Kind::join:
      return join(eval_ra(db, *e.left), eval_ra(db, *e.right));
    case RAExpr::Kind::set_union:
    case RAExpr::Kind::set_intersect:
    case RAExpr::Kind::set_diff: {
      Relation l = eval_ra(db, *e.left);
      Relation r = eval_ra(db, *e.right);
      if (l.attrs != r.attrs) throw SchemaError("set operation over different attribute sets");
      Relation out = empty_relation(l.attrs);
      if (e.kind == RAExpr::Kind::set_union) {
        out.rows = l.rows;
        out.rows.insert(r.rows.begin(), r.rows.end());
      } else if (e.kind == RAExpr::Kind::set_intersect) {
        for (const auto& row : l.rows)
          if (r.rows.count(row)) out.rows.insert(row);
      } else {
        for (const auto& row : l.rows)
          if (!r.rows.count(row)) out.rows.insert(row);
      }
      return out;
    }
  }
  throw EvalError("unreachable RA kind");
}

inline std::string print_ra(const RAExpr& e) {
  auto attrs_list = [](const std::set<std::string>& attrs) {
    std::string s;
    for (const auto& a : attrs) {
      if (!s.empty()) s += ", ";
      s += a;
    }
    return s;
  };
  switch (e.kind) {
    case RAExpr::Kind::base:
      return e.rel;
    case RAExpr::Kind::unit:
      return "unit";
    case RAExpr::Kind::project:
      return "pi(" + attrs_list(e.attrs) + "; " + print_ra(*e.left) + ")";
    case RAExpr::Kind::select:
      return "sigma(" + print_cond(*e.cond) + "; " + print_ra(*e.left) + ")";
    case RAExpr::Kind::rename:
      return "rho(" + e.from + " -> " + e.to + "; " + print_ra(*e.left) + ")";
    case RAExpr::Kind::join:
      return "(" + print_ra(*e.left) + " join " + print_ra(*e.right) + ")";
    case RAExpr::Kind::set_union:
      return "(" + print_ra(*e.left) + " union " + print_ra(*e.right) + ")";
    case RAExpr::Kind::set_intersect:
      return "(" + print_ra(*e.left) + " intersect " + print_ra(*e.right) + ")";
    case RAExpr::Kind::set_diff:
      return "(" + print_ra(*e.left) + " diff " + print_ra(*e.right) + ")";
  }
  return "";
}

}  // namespace gqlcore
