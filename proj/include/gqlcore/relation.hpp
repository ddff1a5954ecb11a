#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gqlcore/value.hpp"

namespace gqlcore {

/// A tuple in the named perspective: a total map from attribute names to values.
using Tuple = std::map<std::string, Value>;

/// 1NF relation under set semantics. Every row's domain equals `attrs`.
struct Relation {
  std::set<std::string> attrs;
  std::set<Tuple> rows;

  bool operator==(const Relation&) const = default;
};

/// I_∅: the singleton relation holding the empty tuple.
inline Relation unit_relation() {
  Relation r;
  r.rows.insert(Tuple{});
  return r;
}

inline Relation empty_relation(std::set<std::string> attrs) {
  Relation r;
  r.attrs = std::move(attrs);
  return r;
}

/// μ1 ~ μ2: the tuples agree on every shared attribute.
inline bool compatible(const Tuple& a, const Tuple& b) {
  auto it = a.begin();
  auto jt = b.begin();
  while (it != a.end() && jt != b.end()) {
    if (it->first < jt->first) {
      ++it;
    } else if (jt->first < it->first) {
      ++jt;
    } else {
      if (!(it->second == jt->second)) return false;
      ++it;
      ++jt;
    }
  }
  return true;
}

/// μ1 ⋈ μ2, defined only for compatible tuples.
inline Tuple merge(const Tuple& a, const Tuple& b) {
  Tuple out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline Tuple restrict_tuple(const Tuple& t, const std::set<std::string>& attrs) {
  Tuple out;
  for (const auto& a : attrs) {
    auto it = t.find(a);
    if (it != t.end()) out.emplace(a, it->second);
  }
  return out;
}

/// Natural join; keeps only compatible pairs.
inline Relation join(const Relation& a, const Relation& b) {
  Relation out;
  out.attrs = a.attrs;
  out.attrs.insert(b.attrs.begin(), b.attrs.end());
  for (const auto& ra : a.rows)
    for (const auto& rb : b.rows)
      if (compatible(ra, rb)) out.rows.insert(merge(ra, rb));
  return out;
}

inline void check_row_domains(const Relation& r, const char* what) {
  for (const auto& row : r.rows) {
    if (row.size() != r.attrs.size())
      throw EvalError(std::string(what) + ": row domain does not match relation attributes");
    for (const auto& [k, v] : row)
      if (!r.attrs.count(k))
        throw EvalError(std::string(what) + ": row binds unknown attribute " + k);
  }
}

using ValueRenderer = std::function<std::string(const Value&)>;

/// Renders constants; node/edge handles get positional names when no graph
/// is available to resolve them.
inline std::string render_value_plain(const Value& v) {
  if (is_int(v)) return std::to_string(std::get<std::int64_t>(v));
  if (is_string(v)) return std::get<std::string>(v);
  if (is_node(v)) return "@n" + std::to_string(std::get<NodeRef>(v).idx);
  return "@e" + std::to_string(std::get<EdgeRef>(v).idx);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Deterministic CSV: lexicographically sorted header, sorted rows.
inline std::string to_csv(const Relation& r, const ValueRenderer& render = render_value_plain) {
  std::ostringstream out;
  bool first = true;
  for (const auto& a : r.attrs) {
    if (!first) out << ',';
    out << csv_escape(a);
    first = false;
  }
  out << '\n';
  std::vector<std::string> lines;
  lines.reserve(r.rows.size());
  for (const auto& row : r.rows) {
    std::ostringstream line;
    first = true;
    for (const auto& a : r.attrs) {
      if (!first) line << ',';
      line << csv_escape(render(row.at(a)));
      first = false;
    }
    lines.push_back(line.str());
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << l << '\n';
  return out.str();
}

}  // namespace gqlcore
