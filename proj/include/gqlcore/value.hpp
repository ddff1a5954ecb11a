#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace gqlcore {

/// Interned node handle. The owning graph maps it back to the textual id.
struct NodeRef {
  std::int32_t idx = -1;
  auto operator<=>(const NodeRef&) const = default;
};

/// Interned edge handle.
struct EdgeRef {
  std::int32_t idx = -1;
  auto operator<=>(const EdgeRef&) const = default;
};

// A value is a node id, an edge id, or a constant. Constants are integers
// or strings; only integer constants are ordered. The variant's built-in
// ordering (alternative index, then payload) is used for deterministic
// container layout, never for query-level comparison.
using Value = std::variant<NodeRef, EdgeRef, std::int64_t, std::string>;

inline bool is_node(const Value& v) { return std::holds_alternative<NodeRef>(v); }
inline bool is_edge(const Value& v) { return std::holds_alternative<EdgeRef>(v); }
inline bool is_int(const Value& v) { return std::holds_alternative<std::int64_t>(v); }
inline bool is_string(const Value& v) { return std::holds_alternative<std::string>(v); }
inline bool is_const(const Value& v) { return is_int(v) || is_string(v); }

/// Query-level order: defined exactly when both operands are integer constants.
inline std::optional<bool> value_less(const Value& a, const Value& b) {
  if (is_int(a) && is_int(b))
    return std::get<std::int64_t>(a) < std::get<std::int64_t>(b);
  return std::nullopt;
}

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gqlcore
