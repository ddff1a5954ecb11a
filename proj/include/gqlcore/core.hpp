#pragma once

#include <string>
#include <vector>

#include "gqlcore/lcra.hpp"
#include "gqlcore/patmatch.hpp"
#include "gqlcore/pattern_text.hpp"
#include "gqlcore/relalg.hpp"

namespace gqlcore {

/// A named base relation R_{ψ,ω}: attributes are ω's entries.
struct PatRelation {
  std::string name;
  PatternPtr pattern;
  OutputSpec output;

  std::set<std::string> attrs() const {
    std::set<std::string> out;
    for (const auto& item : output.items) out.insert(item.attr_name());
    return out;
  }
};

/// Query file: pattern relation declarations plus one body, evaluated
/// bottom-up (pgq / relational algebra) or pipelined (gql / linear
/// composition).
struct CoreQueryFile {
  std::vector<PatRelation> rels;
  bool is_pgq = true;
  RAExprPtr ra;   // pgq body
  LcraPtr lcra;   // gql body
};

// ---------------------------------------------------------------------------
// Query file syntax
//
//   rel <name> = match <pattern> columns ( <item>, ... );   — repeated
//   query pgq = <ra expr>        |  query gql = <clause sequence>
//
//   ra expr:  name | unit | pi(attrs; e) | sigma(cond; e) | rho(A -> B; e)
//             | e join e | e union e | e intersect e | e diff e | (e)
//   gql body: clauses `name  pi(attrs)  sigma(cond)  rho(A -> B)  call { q }`
//             with union/intersect/diff between braced queries
//   cond:     attr = attr | attr = <int> | attr = "str", and/or/not, parens
//   attr:     ident or ident.ident

namespace detail {

inline std::string parse_attr_name(Lexer& lx) {
  std::string name = lx.expect(Tok::ident, "attribute").text;
  if (lx.accept(Tok::dot)) name += "." + lx.expect(Tok::ident, "attribute suffix").text;
  return name;
}

inline EqCondPtr parse_eqcond_disj(Lexer& lx);

inline EqCondPtr parse_eqcond_atom(Lexer& lx) {
  if (lx.accept_keyword("not")) {
    lx.expect(Tok::lparen, "'('");
    auto c = parse_eqcond_disj(lx);
    lx.expect(Tok::rparen, "')'");
    return cond::neg(c);
  }
  if (lx.accept(Tok::lparen)) {
    auto c = parse_eqcond_disj(lx);
    lx.expect(Tok::rparen, "')'");
    return c;
  }
  std::string lhs = parse_attr_name(lx);
  lx.expect(Tok::eq, "'='");
  if (lx.at(Tok::nat)) return cond::const_eq(lhs, Value(lx.next().number));
  if (lx.at(Tok::str)) return cond::const_eq(lhs, Value(lx.next().text));
  return cond::attr_eq(lhs, parse_attr_name(lx));
}

inline EqCondPtr parse_eqcond_conj(Lexer& lx) {
  auto c = parse_eqcond_atom(lx);
  while (lx.accept_keyword("and")) c = cond::conj(c, parse_eqcond_atom(lx));
  return c;
}

inline EqCondPtr parse_eqcond_disj(Lexer& lx) {
  auto c = parse_eqcond_conj(lx);
  while (lx.accept_keyword("or")) c = cond::disj(c, parse_eqcond_conj(lx));
  return c;
}

inline std::set<std::string> parse_attr_list(Lexer& lx) {
  std::set<std::string> attrs;
  if (lx.at(Tok::ident)) {
    attrs.insert(parse_attr_name(lx));
    while (lx.accept(Tok::comma)) attrs.insert(parse_attr_name(lx));
  }
  return attrs;
}

inline RAExprPtr parse_ra_expr(Lexer& lx);

inline RAExprPtr parse_ra_factor(Lexer& lx) {
  if (lx.accept(Tok::lparen)) {
    auto e = parse_ra_expr(lx);
    lx.expect(Tok::rparen, "')'");
    return e;
  }
  if (lx.accept_keyword("unit")) return ra::unit();
  if (lx.accept_keyword("pi")) {
    lx.expect(Tok::lparen, "'('");
    auto attrs = parse_attr_list(lx);
    lx.expect(Tok::semi, "';'");
    auto e = parse_ra_expr(lx);
    lx.expect(Tok::rparen, "')'");
    return ra::project(std::move(attrs), e);
  }
  if (lx.accept_keyword("sigma")) {
    lx.expect(Tok::lparen, "'('");
    auto c = parse_eqcond_disj(lx);
    lx.expect(Tok::semi, "';'");
    auto e = parse_ra_expr(lx);
    lx.expect(Tok::rparen, "')'");
    return ra::select(c, e);
  }
  if (lx.accept_keyword("rho")) {
    lx.expect(Tok::lparen, "'('");
    std::string from = parse_attr_name(lx);
    lx.expect(Tok::rarrow, "'->'");
    std::string to = parse_attr_name(lx);
    lx.expect(Tok::semi, "';'");
    auto e = parse_ra_expr(lx);
    lx.expect(Tok::rparen, "')'");
    return ra::rename(from, to, e);
  }
  return ra::base(lx.expect(Tok::ident, "relation name").text);
}

inline RAExprPtr parse_ra_term(Lexer& lx) {
  auto e = parse_ra_factor(lx);
  while (lx.accept_keyword("join")) e = ra::join(e, parse_ra_factor(lx));
  return e;
}

inline RAExprPtr parse_ra_expr(Lexer& lx) {
  auto e = parse_ra_term(lx);
  for (;;) {
    if (lx.accept_keyword("union"))
      e = ra::set_union(e, parse_ra_term(lx));
    else if (lx.accept_keyword("intersect"))
      e = ra::set_intersect(e, parse_ra_term(lx));
    else if (lx.accept_keyword("diff"))
      e = ra::set_diff(e, parse_ra_term(lx));
    else
      break;
  }
  return e;
}

inline LcraPtr parse_gql_query(Lexer& lx);

inline bool starts_gql_clause(const Lexer& lx) {
  return lx.at(Tok::ident);  // pi/sigma/rho/call/relation name
}

inline LcraPtr parse_gql_clauseseq(Lexer& lx) {
  std::vector<ClausePtr> clauses;
  while (starts_gql_clause(lx)) {
    if (lx.accept_keyword("pi")) {
      lx.expect(Tok::lparen, "'('");
      auto attrs = parse_attr_list(lx);
      lx.expect(Tok::rparen, "')'");
      clauses.push_back(lcra::proj(std::move(attrs)));
    } else if (lx.accept_keyword("sigma")) {
      lx.expect(Tok::lparen, "'('");
      auto c = parse_eqcond_disj(lx);
      lx.expect(Tok::rparen, "')'");
      clauses.push_back(lcra::filt(c));
    } else if (lx.accept_keyword("rho")) {
      lx.expect(Tok::lparen, "'('");
      std::string from = parse_attr_name(lx);
      lx.expect(Tok::rarrow, "'->'");
      std::string to = parse_attr_name(lx);
      lx.expect(Tok::rparen, "')'");
      clauses.push_back(lcra::ren(from, to));
    } else if (lx.accept_keyword("call")) {
      lx.expect(Tok::lbrace, "'{'");
      auto q = parse_gql_query(lx);
      lx.expect(Tok::rbrace, "'}'");
      clauses.push_back(lcra::call(q));
    } else if (lx.at_keyword("union") || lx.at_keyword("intersect") || lx.at_keyword("diff")) {
      break;
    } else {
      clauses.push_back(lcra::scan(lx.next().text));
    }
  }
  if (clauses.empty()) lx.fail("expected a clause sequence");
  return lcra::lin(std::move(clauses));
}

inline LcraPtr parse_gql_term(Lexer& lx) {
  if (lx.accept(Tok::lbrace)) {
    auto q = parse_gql_query(lx);
    lx.expect(Tok::rbrace, "'}'");
    return q;
  }
  return parse_gql_clauseseq(lx);
}

inline LcraPtr parse_gql_query(Lexer& lx) {
  auto q = parse_gql_term(lx);
  for (;;) {
    if (lx.accept_keyword("union"))
      q = lcra::set_union(q, parse_gql_term(lx));
    else if (lx.accept_keyword("intersect"))
      q = lcra::set_intersect(q, parse_gql_term(lx));
    else if (lx.accept_keyword("diff"))
      q = lcra::set_diff(q, parse_gql_term(lx));
    else
      break;
  }
  return q;
}

}  // namespace detail

inline CoreQueryFile parse_core_query(const std::string& text) {
  CoreQueryFile qf;
  Lexer lx(text);
  std::set<std::string> names;
  while (lx.accept_keyword("rel")) {
    PatRelation rel;
    rel.name = lx.expect(Tok::ident, "relation name").text;
    if (!names.insert(rel.name).second) lx.fail("duplicate relation " + rel.name);
    lx.expect(Tok::eq, "'='");
    if (!lx.accept_keyword("match")) lx.fail("expected 'match'");
    rel.pattern = parse_pattern(lx);
    if (!lx.accept_keyword("columns")) lx.fail("expected 'columns'");
    rel.output = parse_output(lx);
    try {
      validate_output(rel.output, *rel.pattern);
    } catch (const PatternError& e) {
      lx.fail(e.what());
    }
    lx.expect(Tok::semi, "';'");
    qf.rels.push_back(std::move(rel));
  }
  if (!lx.accept_keyword("query")) lx.fail("expected 'query'");
  if (lx.accept_keyword("pgq")) {
    qf.is_pgq = true;
    lx.expect(Tok::eq, "'='");
    qf.ra = detail::parse_ra_expr(lx);
  } else if (lx.accept_keyword("gql")) {
    qf.is_pgq = false;
    lx.expect(Tok::eq, "'='");
    qf.lcra = detail::parse_gql_query(lx);
  } else {
    lx.fail("expected 'pgq' or 'gql'");
  }
  if (!lx.at(Tok::end)) lx.fail("trailing input after query body");
  return qf;
}

// ---------------------------------------------------------------------------

/// ⟦R_{ψ,ω}⟧_G := ⟦ψ_ω⟧_G for every declared relation.
inline Database materialize(const PropertyGraph& g, const std::vector<PatRelation>& rels) {
  Database db;
  for (const auto& rel : rels) {
    Relation r = eval_pattern_with_output(g, *rel.pattern, rel.output);
    if (r.attrs != rel.attrs())
      throw EvalError("materialized attributes disagree with columns of " + rel.name);
    db.emplace(rel.name, std::move(r));
  }
  return db;
}

inline Relation eval_core(const PropertyGraph& g, const CoreQueryFile& qf) {
  Database db = materialize(g, qf.rels);
  if (qf.is_pgq) {
    ra_attrs(*qf.ra, database_schema(db));  // surface schema errors up front
    return eval_ra(db, *qf.ra);
  }
  return eval_lcra(db, *qf.lcra);
}

/// Boolean queries: nonempty relation over any attribute set.
inline bool check_boolean(const Relation& rel) { return !rel.rows.empty(); }

inline std::string print_core_query(const CoreQueryFile& qf) {
  std::string out;
  for (const auto& rel : qf.rels) {
    out += "rel " + rel.name + " = match " + print_pattern(*rel.pattern) + " columns (";
    bool first = true;
    for (const auto& item : rel.output.items) {
      out += first ? " " : ", ";
      out += item.attr_name();
      first = false;
    }
    out += first ? ");\n" : " );\n";
  }
  if (qf.is_pgq)
    out += "query pgq = " + print_ra(*qf.ra) + "\n";
  else
    out += "query gql = " + print_lcra(*qf.lcra) + "\n";
  return out;
}

}  // namespace gqlcore
