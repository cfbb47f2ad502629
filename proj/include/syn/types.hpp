// Resolved types, name resolution and the canonical textual value form.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "syn/ast.hpp"
#include "syn/value.hpp"

namespace syn {

struct Type {
  enum class Kind { Bool, Int, Enum, Variant, Record };
  Kind kind = Kind::Bool;
  std::int64_t lo = kIntMin;
  std::int64_t hi = kIntMax;
  const TypeDef* def = nullptr;  // Enum/Variant/Record (and named BoundedInt)

  static Type boolean() { return {}; }
  static Type integer(std::int64_t lo = kIntMin, std::int64_t hi = kIntMax) {
    return {Kind::Int, lo, hi, nullptr};
  }
  bool is_int() const { return kind == Kind::Int; }
  bool is_bool() const { return kind == Kind::Bool; }
};

// Same carrier: ints need equal ranges, user types the same definition.
bool same_type(const Type& a, const Type& b);
// Assignment compatibility: any int fits any int slot (checked at runtime).
bool assignable(const Type& from, const Type& to);
std::string describe(const Type& t);

enum class ResolveError { NotFound, Ambiguous };

struct CtorInfo {
  const TypeDef* type = nullptr;
  std::size_t index = 0;
};

// Name lookup over a model's definitions.  Duplicates are remembered so that
// resolution can report them instead of silently picking one.
class TypeTable {
 public:
  TypeTable() = default;
  explicit TypeTable(const Model& model);

  std::variant<const TypeDef*, const FuncDef*, ResolveError> resolve(std::string_view name) const;

  const TypeDef* find_type(std::string_view name) const;
  const FuncDef* find_func(std::string_view name) const;
  const CtorInfo* find_ctor(std::string_view name) const;

  // nullopt when a named type does not exist.
  std::optional<Type> resolve(const TypeRef& ref) const;
  Type resolve_or_throw(const TypeRef& ref) const;

  Type payload_type(const TypeDef& variant, std::size_t ctor, std::size_t i) const;
  Type field_type(const TypeDef& record, std::size_t i) const;

  const std::vector<std::string>& duplicates() const { return duplicates_; }

 private:
  std::unordered_map<std::string, const TypeDef*> types_;
  std::unordered_map<std::string, const FuncDef*> funcs_;
  std::unordered_map<std::string, CtorInfo> ctors_;
  std::vector<std::string> duplicates_;
};

// Built-in Bool, reachable under resolve("Bool").
const TypeDef& builtin_bool();
const TypeDef& builtin_int();

bool conforms(const Value& v, const Type& t, const TypeTable& types);

class ValueSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical rendering: `-12`, `true`, `Lit`, `Ctor(1,2)`, `{a=1,b=false}`.
std::string render_value(const Value& v, const Type& t, const TypeTable& types);
void render_value(std::string& out, const Value& v, const Type& t, const TypeTable& types);
std::string render_message(const Message& m, const Type& t, const TypeTable& types);

// Parses the canonical rendering (`-` is Absent); throws ValueSyntaxError.
Value parse_value(std::string_view text, const Type& t, const TypeTable& types);
Message parse_message(std::string_view text, const Type& t, const TypeTable& types);

// Number of values of `t`, saturating at `cap + 1`.
std::uint64_t value_count(const Type& t, const TypeTable& types, std::uint64_t cap);
// Every value of `t` in canonical order, or nullopt if there are more than `cap`.
std::optional<std::vector<Value>> enumerate_values(const Type& t, const TypeTable& types,
                                                   std::uint64_t cap);
// Deterministic default value (lowest enumerated value).
Value default_value(const Type& t, const TypeTable& types);

}  // namespace syn
