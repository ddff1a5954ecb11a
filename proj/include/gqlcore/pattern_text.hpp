#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "gqlcore/pattern.hpp"

namespace gqlcore {

// Shared tokenizer for the pattern language and the query file syntax.

enum class Tok {
  end,
  ident,
  nat,
  str,
  lparen,
  rparen,
  lbrack,
  rbrack,
  lbrace,
  rbrace,
  plus,
  pipe,
  comma,
  semi,
  dot,
  dotdot,
  eq,
  lt,
  colon,
  turnstile,  // :-
  star,
  rarrow,          // ->
  arrow_fwd,       // -->
  arrow_bwd,       // <--
  edge_open_fwd,   // -[
  edge_close_fwd,  // ]->
  edge_open_bwd,   // <-[
  edge_close_bwd,  // ]-
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::int64_t number = 0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string text) : text_(std::move(text)) { advance(); }

  const Token& peek() const { return current_; }
  Token next() {
    Token t = current_;
    advance();
    return t;
  }
  bool at(Tok k) const { return current_.kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(current_.pos) +
                     (current_.kind == Tok::end ? " (end of input)" : " near '" + current_.text + "'"));
  }
  bool accept_keyword(const char* kw) {
    if (at(Tok::ident) && current_.text == kw) {
      advance();
      return true;
    }
    return false;
  }
  bool at_keyword(const char* kw) const { return at(Tok::ident) && current_.text == kw; }

 private:
  void advance() {
    skip_ws();
    current_ = Token{};
    current_.pos = i_;
    if (i_ >= text_.size()) {
      current_.kind = Tok::end;
      return;
    }
    char c = text_[i_];
    auto two = [&](char a, char b) {
      return c == a && i_ + 1 < text_.size() && text_[i_ + 1] == b;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      current_.kind = Tok::ident;
      current_.text = text_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      current_.kind = Tok::nat;
      current_.text = text_.substr(i_, j - i_);
      current_.number = std::stoll(current_.text);
      i_ = j;
      return;
    }
    if (c == '"') {
      std::string s;
      std::size_t j = i_ + 1;
      while (j < text_.size() && text_[j] != '"') {
        if (text_[j] == '\\' && j + 1 < text_.size()) ++j;
        s += text_[j++];
      }
      if (j >= text_.size()) fail_at(i_, "unterminated string literal");
      current_.kind = Tok::str;
      current_.text = std::move(s);
      i_ = j + 1;
      return;
    }
    switch (c) {
      case '(': one(Tok::lparen); return;
      case ')': one(Tok::rparen); return;
      case '{': one(Tok::lbrace); return;
      case '}': one(Tok::rbrace); return;
      case '+': one(Tok::plus); return;
      case '|': one(Tok::pipe); return;
      case ',': one(Tok::comma); return;
      case ';': one(Tok::semi); return;
      case '=': one(Tok::eq); return;
      case ':':
        if (two(':', '-')) {
          current_.kind = Tok::turnstile;
          current_.text = ":-";
          i_ += 2;
        } else {
          one(Tok::colon);
        }
        return;
      case '*': one(Tok::star); return;
      case '[': one(Tok::lbrack); return;
      case '.':
        if (two('.', '.')) {
          current_.kind = Tok::dotdot;
          current_.text = "..";
          i_ += 2;
        } else {
          one(Tok::dot);
        }
        return;
      case '-':
        if (i_ + 2 < text_.size() && text_[i_ + 1] == '-' && text_[i_ + 2] == '>') {
          current_.kind = Tok::arrow_fwd;
          current_.text = "-->";
          i_ += 3;
        } else if (two('-', '[')) {
          current_.kind = Tok::edge_open_fwd;
          current_.text = "-[";
          i_ += 2;
        } else if (two('-', '>')) {
          current_.kind = Tok::rarrow;
          current_.text = "->";
          i_ += 2;
        } else {
          fail_at(i_, "stray '-'");
        }
        return;
      case '<':
        if (i_ + 2 < text_.size() && text_[i_ + 1] == '-' && text_[i_ + 2] == '-') {
          current_.kind = Tok::arrow_bwd;
          current_.text = "<--";
          i_ += 3;
        } else if (i_ + 2 < text_.size() && text_[i_ + 1] == '-' && text_[i_ + 2] == '[') {
          current_.kind = Tok::edge_open_bwd;
          current_.text = "<-[";
          i_ += 3;
        } else {
          one(Tok::lt);
        }
        return;
      case ']':
        if (i_ + 2 < text_.size() && text_[i_ + 1] == '-' && text_[i_ + 2] == '>') {
          current_.kind = Tok::edge_close_fwd;
          current_.text = "]->";
          i_ += 3;
        } else if (i_ + 1 < text_.size() && text_[i_ + 1] == '-') {
          current_.kind = Tok::edge_close_bwd;
          current_.text = "]-";
          i_ += 2;
        } else {
          one(Tok::rbrack);
        }
        return;
      default:
        fail_at(i_, std::string("unexpected character '") + c + "'");
    }
  }

  void one(Tok k) {
    current_.kind = k;
    current_.text = text_.substr(i_, 1);
    ++i_;
  }

  void skip_ws() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') ++i_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos));
  }

  std::string text_;
  std::size_t i_ = 0;
  Token current_;
};

// ---------------------------------------------------------------------------
// Pattern grammar:
//   union  := concat ('+' concat)*
//   concat := atom+
//   atom   := node | edge | '[' union ('|' cond)? ']' rep?
//   rep    := '{' nat '..' (nat | '*') '}'
//   node   := '(' ident? ')'
//   edge   := '-[' ident? ']->' | '<-[' ident? ']-' | '-->' | '<--'
//   cond   := disj over 'x.k = y.k', 'x.k < y.k', ':L(x)' with and/or/not

namespace detail {

inline CondPtr parse_cond_disj(Lexer& lx);

inline CondPtr parse_cond_atom(Lexer& lx) {
  if (lx.accept_keyword("not")) return pc::c_not(parse_cond_atom(lx));
  if (lx.accept(Tok::lparen)) {
    auto c = parse_cond_disj(lx);
    lx.expect(Tok::rparen, "')'");
    return c;
  }
  if (lx.accept(Tok::colon)) {
    std::string label = lx.expect(Tok::ident, "label name").text;
    lx.expect(Tok::lparen, "'('");
    std::string var = lx.expect(Tok::ident, "variable").text;
    lx.expect(Tok::rparen, "')'");
    return pc::has_label(label, var);
  }
  std::string var = lx.expect(Tok::ident, "variable").text;
  lx.expect(Tok::dot, "'.'");
  std::string key = lx.expect(Tok::ident, "property key").text;
  bool less;
  if (lx.accept(Tok::eq))
    less = false;
  else if (lx.accept(Tok::lt))
    less = true;
  else
    lx.fail("expected '=' or '<'");
  std::string var2 = lx.expect(Tok::ident, "variable").text;
  lx.expect(Tok::dot, "'.'");
  std::string key2 = lx.expect(Tok::ident, "property key").text;
  return less ? pc::prop_lt(var, key, var2, key2) : pc::prop_eq(var, key, var2, key2);
}

inline CondPtr parse_cond_conj(Lexer& lx) {
  auto c = parse_cond_atom(lx);
  while (lx.accept_keyword("and")) c = pc::c_and(c, parse_cond_atom(lx));
  return c;
}

inline CondPtr parse_cond_disj(Lexer& lx) {
  auto c = parse_cond_conj(lx);
  while (lx.accept_keyword("or")) c = pc::c_or(c, parse_cond_conj(lx));
  return c;
}

inline bool starts_atom(const Lexer& lx) {
  switch (lx.peek().kind) {
    case Tok::lparen:
    case Tok::lbrack:
    case Tok::arrow_fwd:
    case Tok::arrow_bwd:
    case Tok::edge_open_fwd:
    case Tok::edge_open_bwd:
      return true;
    default:
      return false;
  }
}

inline PatternPtr parse_union(Lexer& lx);

inline PatternPtr parse_atom(Lexer& lx) {
  std::size_t pos = lx.peek().pos;
  PatternPtr base;
  if (lx.accept(Tok::lparen)) {
    std::optional<std::string> var;
    if (lx.at(Tok::ident)) var = lx.next().text;
    lx.expect(Tok::rparen, "')'");
    base = pat::node(var);
  } else if (lx.accept(Tok::arrow_fwd)) {
    base = pat::fwd();
  } else if (lx.accept(Tok::arrow_bwd)) {
    base = pat::bwd();
  } else if (lx.accept(Tok::edge_open_fwd)) {
    std::optional<std::string> var;
    if (lx.at(Tok::ident)) var = lx.next().text;
    lx.expect(Tok::edge_close_fwd, "']->'");
    base = pat::fwd(var);
  } else if (lx.accept(Tok::edge_open_bwd)) {
    std::optional<std::string> var;
    if (lx.at(Tok::ident)) var = lx.next().text;
    lx.expect(Tok::edge_close_bwd, "']-'");
    base = pat::bwd(var);
  } else if (lx.accept(Tok::lbrack)) {
    base = parse_union(lx);
    if (lx.accept(Tok::pipe)) {
      auto guard = parse_cond_disj(lx);
      try {
        base = pat::with_cond(base, guard);
      } catch (const PatternError& e) {
        throw ParseError(std::string(e.what()) + " at offset " + std::to_string(pos));
      }
    }
    lx.expect(Tok::rbrack, "']'");
  } else {
    lx.fail("expected a pattern atom");
  }
  if (lx.at(Tok::lbrace)) {
    lx.next();
    std::uint32_t lo = static_cast<std::uint32_t>(lx.expect(Tok::nat, "lower bound").number);
    lx.expect(Tok::dotdot, "'..'");
    std::optional<std::uint32_t> hi;
    if (lx.accept(Tok::star))
      hi = std::nullopt;
    else
      hi = static_cast<std::uint32_t>(lx.expect(Tok::nat, "upper bound").number);
    lx.expect(Tok::rbrace, "'}'");
    try {
      base = pat::repeat(base, lo, hi);
    } catch (const PatternError& e) {
      throw ParseError(std::string(e.what()) + " at offset " + std::to_string(pos));
    }
  }
  return base;
}

inline PatternPtr parse_concat(Lexer& lx) {
  auto p = parse_atom(lx);
  while (starts_atom(lx)) p = pat::concat(p, parse_atom(lx));
  return p;
}

inline PatternPtr parse_union(Lexer& lx) {
  std::size_t pos = lx.peek().pos;
  auto p = parse_concat(lx);
  while (lx.accept(Tok::plus)) {
    auto q = parse_concat(lx);
    try {
      p = pat::alt(p, q);
    } catch (const PatternError& e) {
      throw ParseError(std::string(e.what()) + " at offset " + std::to_string(pos));
    }
  }
  return p;
}

}  // namespace detail

/// Parses a pattern embedded in a larger token stream.
inline PatternPtr parse_pattern(Lexer& lx) { return detail::parse_union(lx); }

inline PatternPtr parse_pattern(const std::string& text) {
  Lexer lx(text);
  auto p = detail::parse_union(lx);
  if (!lx.at(Tok::end)) lx.fail("trailing input after pattern");
  return p;
}

/// Output list: '(' item (',' item)* ')' with item := x | x.k; empty list allowed.
inline OutputSpec parse_output(Lexer& lx) {
  OutputSpec out;
  lx.expect(Tok::lparen, "'('");
  if (!lx.at(Tok::rparen)) {
    do {
      OutputItem item;
      item.var = lx.expect(Tok::ident, "variable").text;
      if (lx.accept(Tok::dot)) item.key = lx.expect(Tok::ident, "property key").text;
      out.items.push_back(std::move(item));
    } while (lx.accept(Tok::comma));
  }
  lx.expect(Tok::rparen, "')'");
  return out;
}

inline OutputSpec parse_output(const std::string& text) {
  Lexer lx(text);
  auto out = parse_output(lx);
  if (!lx.at(Tok::end)) lx.fail("trailing input after output list");
  return out;
}

}  // namespace gqlcore
