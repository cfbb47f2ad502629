// Expression evaluation and input pattern matching.
//
// Integer arithmetic is checked against the 32-bit carrier range and every
// store into a typed slot (parameter, result, payload, field) is checked
// against the slot's range.  Nothing ever wraps.  `div`/`mod` truncate toward
// zero.  `and`, `or` and `if` evaluate lazily, everything else left to right.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "syn/ast.hpp"
#include "syn/types.hpp"
#include "syn/value.hpp"

namespace syn {

enum class EvalErrorKind { DivisionByZero, RangeViolation, UnboundVariable, MatchFailure, TypeError, Unobservable };

const char* to_string(EvalErrorKind k);

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

// Scoped variable bindings.  Names are views into the model, which outlives
// every evaluation.
class Env {
 public:
  Env() = default;
  Env(std::initializer_list<std::pair<std::string_view, Value>> init) : slots_(init) {}

  void bind(std::string_view name, Value v) { slots_.emplace_back(name, std::move(v)); }
  const Value* lookup(std::string_view name) const {
    for (auto it = slots_.rbegin(); it != slots_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
  std::size_t mark() const { return slots_.size(); }
  void reset(std::size_t mark) { slots_.resize(mark); }

 private:
  std::vector<std::pair<std::string_view, Value>> slots_;
};

// Read access to a running system, used by glossary atoms.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual Message port(std::string_view name) const = 0;
  virtual bool in_state(std::string_view path, std::string_view state) const = 0;
  virtual Value state_var(std::string_view path, std::string_view var) const = 0;
};

struct EvalContext {
  const TypeTable& types;
  const Observer* observer = nullptr;
};

Value eval_expr(const Expr& e, Env& env, const EvalContext& ctx);
inline Value eval_expr(const ExprPtr& e, Env& env, const EvalContext& ctx) { return eval_expr(*e, env, ctx); }

// Evaluates and checks that the result fits `slot`.
Value eval_into(const Expr& e, const Type& slot, Env& env, const EvalContext& ctx);

// Raises RangeViolation (or TypeError) unless `v` fits `slot`.
void check_slot(const Value& v, const Type& slot, const TypeTable& types, std::string_view what);

using Binding = std::vector<std::pair<std::string_view, Value>>;

// Absence matches only Absent; `p?` any Present; a literal an equal Present
// value; `p?v` any Present, binding v.
std::optional<Binding> match_pattern(const Pattern& p, const Message& m, const EvalContext& ctx);

}  // namespace syn
