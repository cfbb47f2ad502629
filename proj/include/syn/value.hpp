// Runtime values and per-tick messages.
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace syn {

struct TypeDef;

// `num` holds the boolean, the integer, the enum literal index or the variant
// constructor index.  User-typed values point at their definition so that
// field access and matching work without static type information.
struct Value {
  enum class Kind : std::uint8_t { Bool, Int, Enum, Variant, Record };

  Kind kind = Kind::Bool;
  std::int64_t num = 0;
  std::vector<Value> items;
  const TypeDef* type = nullptr;

  static Value boolean(bool b) { return {Kind::Bool, b ? 1 : 0, {}, nullptr}; }
  static Value integer(std::int64_t v) { return {Kind::Int, v, {}, nullptr}; }
  static Value enumeration(const TypeDef* def, std::size_t idx) {
    return {Kind::Enum, static_cast<std::int64_t>(idx), {}, def};
  }
  static Value variant(const TypeDef* def, std::size_t ctor, std::vector<Value> payload) {
    return {Kind::Variant, static_cast<std::int64_t>(ctor), std::move(payload), def};
  }
  static Value record(const TypeDef* def, std::vector<Value> fields) {
    return {Kind::Record, 0, std::move(fields), def};
  }

  bool as_bool() const { return num != 0; }

  bool operator==(const Value&) const = default;
  std::strong_ordering operator<=>(const Value&) const = default;
};

// Present(value) or Absent.
using Message = std::optional<Value>;

inline Message present(Value v) { return Message{std::move(v)}; }
inline constexpr std::nullopt_t absent = std::nullopt;

}  // namespace syn
