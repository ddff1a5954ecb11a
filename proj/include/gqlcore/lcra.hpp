#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gqlcore/relalg.hpp"

namespace gqlcore {

// Linear Composition Relational Algebra. A linear clause maps a driving
// table to a relation; a query is a clause sequence or a set operation over
// queries. Output schemas are dynamic.

struct LCRAQuery;
using LcraPtr = std::shared_ptr<const LCRAQuery>;

struct LinearClause {
  enum class Kind { scan, proj, filt, ren, call };
  Kind kind;
  std::string rel;              // scan
  std::set<std::string> attrs;  // proj
  EqCondPtr cond;               // filt
  std::string from, to;         // ren
  LcraPtr sub;                  // call
};
using ClausePtr = std::shared_ptr<const LinearClause>;

struct LCRAQuery {
  enum class Kind { lin, set_union, set_intersect, set_diff };
  Kind kind;
  std::vector<ClausePtr> clauses;  // lin: the sequence, applied left to right
  LcraPtr left, right;
};

namespace lcra {
inline ClausePtr scan(std::string rel) {
  auto c = std::make_shared<LinearClause>();
  c->kind = LinearClause::Kind::scan;
  c->rel = std::move(rel);
  return c;
}
inline ClausePtr proj(std::set<std::string> attrs) {
  auto c = std::make_shared<LinearClause>();
  c->kind = LinearClause::Kind::proj;
  c->attrs = std::move(attrs);
  return c;
}
inline ClausePtr filt(EqCondPtr cond) {
  auto c = std::make_shared<LinearClause>();
  c->kind = LinearClause::Kind::filt;
  c->cond = std::move(cond);
  return c;
}
inline ClausePtr ren(std::string from, std::string to) {
  auto c = std::make_shared<LinearClause>();
  c->kind = LinearClause::Kind::ren;
  c->from = std::move(from);
  c->to = std::move(to);
  return c;
}
inline ClausePtr call(LcraPtr q) {
  auto c = std::make_shared<LinearClause>();
  c->kind = LinearClause::Kind::call;
  c->sub = std::move(q);
  return c;
}
inline LcraPtr lin(std::vector<ClausePtr> clauses) {
  auto q = std::make_shared<LCRAQuery>();
  q->kind = LCRAQuery::Kind::lin;
  q->clauses = std::move(clauses);
  return q;
}
inline LcraPtr set_op(LCRAQuery::Kind k, LcraPtr l, LcraPtr r) {
  auto q = std::make_shared<LCRAQuery>();
  q->kind = k;
  q->left = std::move(l);
  q->right = std::move(r);
  return q;
}
inline LcraPtr set_union(LcraPtr l, LcraPtr r) {
  return set_op(LCRAQuery::Kind::set_union, std::move(l), std::move(r));
}
inline LcraPtr set_intersect(LcraPtr l, LcraPtr r) {
  return set_op(LCRAQuery::Kind::set_intersect, std::move(l), std::move(r));
}
inline LcraPtr set_diff(LcraPtr l, LcraPtr r) {
  return set_op(LCRAQuery::Kind::set_diff, std::move(l), std::move(r));
}
}  // namespace lcra

// ---------------------------------------------------------------------------
// Evaluation

inline Relation eval_lcra(const Database& db, const LCRAQuery& q, const Relation& driving);

inline Relation eval_clause(const Database& db, const LinearClause& c, const Relation& in) {
  switch (c.kind) {
    case LinearClause::Kind::scan: {
      auto it = db.find(c.rel);
      if (it == db.end()) throw EvalError("missing base relation: " + c.rel);
      return join(in, it->second);
    }
    case LinearClause::Kind::proj: {
      std::set<std::string> keep;
      for (const auto& a : c.attrs)
        if (in.attrs.count(a)) keep.insert(a);
      Relation out = empty_relation(keep);
      for (const auto& row : in.rows) out.rows.insert(restrict_tuple(row, keep));
      return out;
    }
    case LinearClause::Kind::filt: {
      Relation out = empty_relation(in.attrs);
      for (const auto& row : in.rows)
        if (cond_matches(row, *c.cond)) out.rows.insert(row);
      return out;
    }
    case LinearClause::Kind::ren: {
      // Tuple-level rule: rename from→to, dropping tuples where `to` is
      // already bound (even when to = from). Relations are uniform, so that
      // is all or nothing.
      if (!in.attrs.count(c.from))
        throw SchemaError("rename source " + c.from + " not in driving table");
      bool clash = in.attrs.count(c.to) != 0;
      auto attrs = in.attrs;
      attrs.erase(c.from);
      attrs.insert(c.to);
      Relation out = empty_relation(attrs);
      if (clash) return out;
      for (const auto& row : in.rows) {
        Tuple t;
        for (const auto& [k, v] : row) t.emplace(k == c.from ? c.to : k, v);
        out.rows.insert(std::move(t));
      }
      return out;
    }
    case LinearClause::Kind::call:
      return join(in, eval_lcra(db, *c.sub, in));
  }
  throw EvalError("unreachable clause kind");
}

inline Relation eval_lcra(const Database& db, const LCRAQuery& q, const Relation& driving) {
  switch (q.kind) {
    case LCRAQuery::Kind::lin: {
      Relation r = driving;
      for (const auto& c : q.clauses) r = eval_clause(db, *c, r);
      return r;
    }
    case LCRAQuery::Kind::set_union:
    case LCRAQuery::Kind::set_intersect:
    case LCRAQuery::Kind::set_diff: {
      Relation l = eval_lcra(db, *q.left, driving);
      Relation r = eval_lcra(db, *q.right, driving);
      if (l.attrs != r.attrs)
        throw SchemaError("set operation arms produced different attribute sets");
      Relation out = empty_relation(l.attrs);
      if (q.kind == LCRAQuery::Kind::set_union) {
        out.rows = l.rows;
        out.rows.insert(r.rows.begin(), r.rows.end());
      } else if (q.kind == LCRAQuery::Kind::set_intersect) {
        for (const auto& row : l.rows)
          if (r.rows.count(row)) out.rows.insert(row);
      } else {
        for (const auto& row : l.rows)
          if (!r.rows.count(row)) out.rows.insert(row);
      }
      return out;
    }
  }
  throw EvalError("unreachable query kind");
}

/// Query output on a database: evaluation against I_∅.
inline Relation eval_lcra(const Database& db, const LCRAQuery& q) {
  return eval_lcra(db, q, unit_relation());
}

/// sLCRA: no {Q} (call) construct anywhere.
inline bool is_slcra(const LCRAQuery& q) {
  switch (q.kind) {
    case LCRAQuery::Kind::lin:
      for (const auto& c : q.clauses)
        if (c->kind == LinearClause::Kind::call) return false;
      return true;
    default:
      return is_slcra(*q.left) && is_slcra(*q.right);
  }
}

// ---------------------------------------------------------------------------
// RA -> LCRA: one direction of the equivalence between the two algebras.
//
// Base relations become scans, unary operators are appended as clauses, a
// join becomes a sequence of two calls, and set operations act on called
// arms. One repair over the textbook construction: a projection or rename
// translated into an embedded position (join argument or set-op arm) would
// see the caller's driving table instead of I_∅, and π/ρ do not commute
// with the implicit join against it. Such units are prefixed with π_∅,
// which resets any nonempty driving table to I_∅ and preserves ∅, making
// their value driving-independent. Top-level chains stay literal.

namespace detail {

struct TrQuery {
  LcraPtr q;
  bool strong;  // value independent of the (nonempty) driving table
};

inline TrQuery tr_ra(const RAExpr& e, bool embedded);

inline TrQuery tr_append(TrQuery in, ClausePtr clause, bool embedded) {
  bool in_lin = in.q->kind == LCRAQuery::Kind::lin;
  bool needs_shield = embedded && !(in.strong && in_lin);
  if (needs_shield) {
    return {lcra::lin({lcra::proj({}), lcra::call(in.q), std::move(clause)}), true};
  }
  if (in_lin) {
    auto clauses = in.q->clauses;
    clauses.push_back(std::move(clause));
    return {lcra::lin(std::move(clauses)), in.strong};
  }
  return {lcra::lin({lcra::call(in.q), std::move(clause)}), false};
}

inline TrQuery tr_ra(const RAExpr& e, bool embedded) {
  switch (e.kind) {
    case RAExpr::Kind::base:
      return {lcra::lin({lcra::scan(e.rel)}), false};
    case RAExpr::Kind::unit:
      return {lcra::lin({lcra::proj({})}), true};
    case RAExpr::Kind::select: {
      // σ commutes with the driving-table join, so no shield is needed.
      TrQuery in = tr_ra(*e.left, embedded);
      if (in.q->kind == LCRAQuery::Kind::lin) {
        auto clauses = in.q->clauses;
        clauses.push_back(lcra::filt(e.cond));
        return {lcra::lin(std::move(clauses)), in.strong};
      }
      return {lcra::lin({lcra::call(in.q), lcra::filt(e.cond)}), false};
    }
    case RAExpr::Kind::project:
      return tr_append(tr_ra(*e.left, embedded), lcra::proj(e.attrs), embedded);
    case RAExpr::Kind::rename:
      return tr_append(tr_ra(*e.left, embedded), lcra::ren(e.from, e.to), embedded);
    case RAExpr::Kind::join:
      return {lcra::lin({lcra::call(tr_ra(*e.left, true).q), lcra::call(tr_ra(*e.right, true).q)}),
              false};
    case RAExpr::Kind::set_union:
    case RAExpr::Kind::set_intersect:
    case RAExpr::Kind::set_diff: {
      auto l = lcra::lin({lcra::call(tr_ra(*e.left, true).q)});
      auto r = lcra::lin({lcra::call(tr_ra(*e.right, true).q)});
      LCRAQuery::Kind k = e.kind == RAExpr::Kind::set_union      ? LCRAQuery::Kind::set_union
                          : e.kind == RAExpr::Kind::set_intersect ? LCRAQuery::Kind::set_intersect
                                                                   : LCRAQuery::Kind::set_diff;
      return {lcra::set_op(k, std::move(l), std::move(r)), false};
    }
  }
  throw EvalError("unreachable RA kind");
}

}  // namespace detail

inline LcraPtr ra_to_lcra(const RAExpr& e) { return detail::tr_ra(e, false).q; }

// ---------------------------------------------------------------------------
// LCRA -> RA, parsed left to right while the RA image grows bottom-up.
// The accumulated prefix expression is substituted as the driving table of
// every {Q} clause and set-operation arm. Attribute sets are tracked
// alongside, since the language is dynamically schemaed.

namespace detail {

struct RAState {
  RAExprPtr expr;
  std::set<std::string> attrs;
};

/// Rewrites θ for a fixed attribute set: atoms over absent attributes are
/// false. Returns nullptr + `constant` when θ folds to a constant.
inline EqCondPtr fold_cond(const EqCond& c, const std::set<std::string>& attrs, bool& constant,
                           bool& is_const_out) {
  switch (c.kind) {
    case EqCond::Kind::attr_eq:
      if (!attrs.count(c.lhs) || !attrs.count(c.rhs)) {
        is_const_out = true;
        constant = false;
        return nullptr;
      }
      is_const_out = false;
      return cond::attr_eq(c.lhs, c.rhs);
    case EqCond::Kind::const_eq:
      if (!attrs.count(c.lhs)) {
        is_const_out = true;
        constant = false;
        return nullptr;
      }
      is_const_out = false;
      return cond::const_eq(c.lhs, c.constant);
    case EqCond::Kind::neg: {
      bool sub_const = false, sub_val = false;
      auto sub = fold_cond(*c.a, attrs, sub_val, sub_const);
      if (sub_const) {
        is_const_out = true;
        constant = !sub_val;
        return nullptr;
      }
      is_const_out = false;
      return cond::neg(sub);
    }
    case EqCond::Kind::conj:
    case EqCond::Kind::disj: {
      bool lc = false, lv = false, rc = false, rv = false;
      auto l = fold_cond(*c.a, attrs, lv, lc);
      auto r = fold_cond(*c.b, attrs, rv, rc);
      bool is_and = c.kind == EqCond::Kind::conj;
      if (lc && rc) {
        is_const_out = true;
        constant = is_and ? (lv && rv) : (lv || rv);
        return nullptr;
      }
      if (lc) {
        if (is_and ? !lv : lv) {
          is_const_out = true;
          constant = lv;
          return nullptr;
        }
        is_const_out = rc;
        constant = rv;
        return r;
      }
      if (rc) {
        if (is_and ? !rv : rv) {
          is_const_out = true;
          constant = rv;
          return nullptr;
        }
        is_const_out = lc;
        constant = lv;
        return l;
      }
      is_const_out = false;
      return is_and ? cond::conj(l, r) : cond::disj(l, r);
    }
  }
  is_const_out = true;
  constant = false;
  return nullptr;
}

inline RAExprPtr ra_empty_like(const RAState& s) { return ra::set_diff(s.expr, s.expr); }

inline RAState tr_lcra(const LCRAQuery& q, const RASchema& schema, RAState in);

inline RAState tr_clause(const LinearClause& c, const RASchema& schema, RAState in) {
  switch (c.kind) {
    case LinearClause::Kind::scan: {
      auto it = schema.find(c.rel);
      if (it == schema.end()) throw SchemaError("unknown relation " + c.rel);
      RAState out;
      out.expr = ra::join(in.expr, ra::base(c.rel));
      out.attrs = in.attrs;
      out.attrs.insert(it->second.begin(), it->second.end());
      return out;
    }
    case LinearClause::Kind::proj: {
      std::set<std::string> keep;
      for (const auto& a : c.attrs)
        if (in.attrs.count(a)) keep.insert(a);
      return {ra::project(keep, in.expr), keep};
    }
    case LinearClause::Kind::filt: {
      bool constant = false, is_const = false;
      auto folded = fold_cond(*c.cond, in.attrs, constant, is_const);
      if (is_const) {
        if (constant) return in;
        return {ra_empty_like(in), in.attrs};
      }
      return {ra::select(folded, in.expr), in.attrs};
    }
    case LinearClause::Kind::ren: {
      if (!in.attrs.count(c.from))
        throw SchemaError("rename source " + c.from + " not in driving table");
      auto attrs = in.attrs;
      attrs.erase(c.from);
      attrs.insert(c.to);
      if (c.to == c.from) return {ra_empty_like(in), attrs};
      if (in.attrs.count(c.to)) {
        // The tuple rule drops every row; build an empty relation over the
        // shifted attribute set out of the prefix itself.
        auto rest = in.attrs;
        rest.erase(c.from);
        RAExprPtr shaped = ra::join(ra::project(rest, in.expr),
                                    ra::rename(c.from, c.to, ra::project({c.from}, in.expr)));
        return {ra::set_diff(shaped, shaped), attrs};
      }
      return {ra::rename(c.from, c.to, in.expr), attrs};
    }
    case LinearClause::Kind::call: {
      RAState sub = tr_lcra(*c.sub, schema, in);
      RAState out;
      out.expr = ra::join(in.expr, sub.expr);
      out.attrs = in.attrs;
      out.attrs.insert(sub.attrs.begin(), sub.attrs.end());
      return out;
    }
  }
  throw EvalError("unreachable clause kind");
}

inline RAState tr_lcra(const LCRAQuery& q, const RASchema& schema, RAState in) {
  switch (q.kind) {
    case LCRAQuery::Kind::lin: {
      RAState s = std::move(in);
      for (const auto& c : q.clauses) s = tr_clause(*c, schema, s);
      return s;
    }
    case LCRAQuery::Kind::set_union:
    case LCRAQuery::Kind::set_intersect:
    case LCRAQuery::Kind::set_diff: {
      RAState l = tr_lcra(*q.left, schema, in);
      RAState r = tr_lcra(*q.right, schema, in);
      if (l.attrs != r.attrs)
        throw SchemaError("set operation arms have different dynamic attribute sets");
      RAExpr::Kind k = q.kind == LCRAQuery::Kind::set_union      ? RAExpr::Kind::set_union
                       : q.kind == LCRAQuery::Kind::set_intersect ? RAExpr::Kind::set_intersect
                                                                   : RAExpr::Kind::set_diff;
      return {ra::set_op(k, l.expr, r.expr), l.attrs};
    }
  }
  throw EvalError("unreachable query kind");
}

}  // namespace detail

inline RAExprPtr lcra_to_ra(const LCRAQuery& q, const RASchema& schema) {
  return detail::tr_lcra(q, schema, {ra::unit(), {}}).expr;
}

// ---------------------------------------------------------------------------

inline std::string print_lcra(const LCRAQuery& q) {
  auto attrs_list = [](const std::set<std::string>& attrs) {
    std::string s;
    for (const auto& a : attrs) {
      if (!s.empty()) s += ", ";
      s += a;
    }
    return s;
  };
  switch (q.kind) {
    case LCRAQuery::Kind::lin: {
      std::string s;
      for (const auto& c : q.clauses) {
        if (!s.empty()) s += ' ';
        switch (c->kind) {
          case LinearClause::Kind::scan:
            s += c->rel;
            break;
          case LinearClause::Kind::proj:
            s += "pi(" + attrs_list(c->attrs) + ")";
            break;
          case LinearClause::Kind::filt:
            s += "sigma(" + print_cond(*c->cond) + ")";
            break;
          case LinearClause::Kind::ren:
            s += "rho(" + c->from + " -> " + c->to + ")";
            break;
          case LinearClause::Kind::call:
            s += "call { " + print_lcra(*c->sub) + " }";
            break;
        }
      }
      return s;
    }
    case LCRAQuery::Kind::set_union:
      return "{ " + print_lcra(*q.left) + " } union { " + print_lcra(*q.right) + " }";
    case LCRAQuery::Kind::set_intersect:
      return "{ " + print_lcra(*q.left) + " } intersect { " + print_lcra(*q.right) + " }";
    case LCRAQuery::Kind::set_diff:
      return "{ " + print_lcra(*q.left) + " } diff { " + print_lcra(*q.right) + " }";
  }
  return "";
}

}  // namespace gqlcore
