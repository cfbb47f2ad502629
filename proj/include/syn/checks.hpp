// Static checks run before simulation, verification and code generation.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "syn/ast.hpp"
#include "syn/flat.hpp"
#include "syn/types.hpp"

namespace syn {

enum class Severity { Error, Warning };

struct Finding {
  Severity severity = Severity::Error;
  std::string code;
  std::string path;
  std::string message;
  SourcePos pos;
};

struct CheckReport {
  std::vector<Finding> findings;

  bool passes() const;
  bool has(std::string_view code) const;
  void add(Severity s, std::string code, std::string path, SourcePos pos, std::string message);
  void merge(const CheckReport& other);
  // `<severity> <code> <path>:<line>:<col> <message>` per line.
  std::string render() const;
};

// Types expressions under a scope of named, typed variables.  Findings go to
// the report; a failed subexpression yields nullopt and is not reported twice.
class ExprTyper {
 public:
  using Scope = std::vector<std::pair<std::string, Type>>;
  // Supplies types for glossary-only nodes (port and state observations).
  using ObserverTyping = std::function<std::optional<Type>(const Expr&)>;

  ExprTyper(const TypeTable& types, CheckReport& report, std::string path, ObserverTyping observe = {})
      : types_(types), report_(report), path_(std::move(path)), observe_(std::move(observe)) {}

  std::optional<Type> type_of(const Expr& e, Scope& scope);
  // Types `e` and checks it is assignable to `slot`.
  bool expect(const Expr& e, Scope& scope, const Type& slot, const std::string& what);

 private:
  std::optional<Type> join(const std::optional<Type>& a, const std::optional<Type>& b, const Expr& at);
  void error(const std::string& code, const Expr& at, const std::string& msg);

  const TypeTable& types_;
  CheckReport& report_;
  std::string path_;
  ObserverTyping observe_;
};

CheckReport check_nonrecursive(const Model& m);
// Type definitions themselves: resolvable references, lo <= hi.
CheckReport check_type_defs(const Model& m);
CheckReport check_types(const Model& m);
CheckReport check_connectivity(const Model& m);
CheckReport check_causality(const FlatModel& f);
CheckReport check_composite_causality(const FlatModel& f);
// PossibleNonDeterminism warnings for overlapping transitions or rows.
CheckReport check_determinism(const Model& m);

// All of the above in dependency order; later stages run only when the
// earlier ones found no errors.
CheckReport check_model(const Model& m);

}  // namespace syn
