// Abstract syntax of the modeling language.
//
// Every node is a plain value; sharing of expression trees goes through
// Box<T>, which compares structurally.  Source positions never take part in
// equality so that two parses of equivalent text compare equal.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace syn {

struct SourcePos {
  int line = 0;
  int col = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

template <class T>
class Box {
 public:
  Box() = default;
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

  explicit operator bool() const { return ptr_ != nullptr; }
  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) {
    if (a.ptr_ == b.ptr_) return true;
    if (!a.ptr_ || !b.ptr_) return false;
    return *a.ptr_ == *b.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

inline constexpr std::int64_t kIntMin = -2147483648LL;
inline constexpr std::int64_t kIntMax = 2147483647LL;

// A type as written at a use site: `Bool`, `Int`, `int[lo, hi]` or a name.
struct TypeRef {
  enum class Kind { Bool, Int, Named };
  Kind kind = Kind::Bool;
  std::string name;
  std::int64_t lo = kIntMin;
  std::int64_t hi = kIntMax;
  SourcePos pos;

  static TypeRef boolean() { return {}; }
  static TypeRef integer(std::int64_t lo = kIntMin, std::int64_t hi = kIntMax) {
    return {Kind::Int, {}, lo, hi, {}};
  }
  static TypeRef named(std::string n) { return {Kind::Named, std::move(n), kIntMin, kIntMax, {}}; }

  bool operator==(const TypeRef&) const = default;
};

struct Field {
  std::string name;
  TypeRef type;
  SourcePos pos;
  bool operator==(const Field&) const = default;
};

struct Constructor {
  std::string name;
  std::vector<TypeRef> payload;
  SourcePos pos;
  bool operator==(const Constructor&) const = default;
};

struct TypeDef {
  enum class Kind { Bool, BoundedInt, Enum, Variant, Record };
  std::string name;
  Kind kind = Kind::Bool;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<std::string> literals;  // Enum
  std::vector<Constructor> ctors;     // Variant
  std::vector<Field> fields;          // Record
  SourcePos pos;
  bool operator==(const TypeDef&) const = default;
};

struct Expr;
using ExprPtr = Box<Expr>;

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

struct MatchArm {
  std::string ctor;  // empty for the `_` arm
  std::vector<std::string> binds;
  ExprPtr body;
  SourcePos pos;
  bool operator==(const MatchArm&) const = default;
};

struct FieldInit {
  std::string name;
  ExprPtr value;
  SourcePos pos;
  bool operator==(const FieldInit&) const = default;
};

// `Name` covers both variables and nullary constructors, `Call` both
// function calls and constructor application; constructor names are global
// and may not be reused for variables or functions.  The Port*/State* kinds
// only occur in glossary expressions and observe a running system.
struct Expr {
  enum class Kind {
    IntLit, BoolLit, Name, Call, Record, Field, Match, If, Unary, Binary,
    PortPresent, PortValue, StateIs, StateVar
  };
  Kind kind = Kind::IntLit;
  std::int64_t number = 0;     // IntLit, BoolLit (0/1)
  std::string name;            // Name, Call, Record type, Field, Port*, State* path
  std::string member;          // StateIs state name, StateVar variable name
  std::vector<ExprPtr> args;   // Call args, If (c,a,b), Unary (a), Binary (a,b), Field (a), Match (scrutinee)
  std::vector<FieldInit> inits;
  std::vector<MatchArm> arms;
  UnaryOp unop = UnaryOp::Neg;
  BinaryOp binop = BinaryOp::Add;
  SourcePos pos;

  bool operator==(const Expr&) const = default;
};

struct Param {
  std::string name;
  TypeRef type;
  SourcePos pos;
  bool operator==(const Param&) const = default;
};

struct FuncDef {
  std::string name;
  std::vector<Param> params;
  TypeRef result;
  ExprPtr body;
  SourcePos pos;
  bool operator==(const FuncDef&) const = default;
};

// Input pattern on one port.  Unmentioned ports are unconstrained.
struct Pattern {
  enum class Kind { Present, Absent, Literal, Bind };
  std::string port;
  Kind kind = Kind::Present;
  ExprPtr literal;
  std::string var;
  SourcePos pos;
  bool operator==(const Pattern&) const = default;
};

// `port = expr` or `port = -` (value empty).
struct OutputAction {
  std::string port;
  ExprPtr value;
  SourcePos pos;
  bool operator==(const OutputAction&) const = default;
};

struct Assignment {
  std::string var;
  ExprPtr value;
  SourcePos pos;
  bool operator==(const Assignment&) const = default;
};

struct Transition {
  std::string name;  // optional label
  std::string source;
  std::string target;
  std::vector<Pattern> inputs;
  ExprPtr guard;
  std::vector<OutputAction> outputs;
  std::vector<Assignment> updates;
  SourcePos pos;
  bool operator==(const Transition&) const = default;
};

struct ControlState {
  std::string name;
  SourcePos pos;
  bool operator==(const ControlState&) const = default;
};

struct VarDecl {
  std::string name;
  TypeRef type;
  ExprPtr init;
  SourcePos pos;
  bool operator==(const VarDecl&) const = default;
};

struct Automaton {
  std::vector<ControlState> states;
  std::size_t initial = 0;
  std::vector<VarDecl> vars;
  std::vector<Transition> transitions;
  bool operator==(const Automaton&) const = default;
};

struct TableRow {
  std::vector<Pattern> inputs;
  ExprPtr guard;
  std::vector<OutputAction> outputs;
  SourcePos pos;
  bool operator==(const TableRow&) const = default;
};

struct FunctionTable {
  std::vector<TableRow> rows;
  bool operator==(const FunctionTable&) const = default;
};

enum class Direction { In, Out };
enum class Causality { Weak, Strong };

struct PortSpec {
  std::string name;
  Direction direction = Direction::In;
  TypeRef type;
  ExprPtr initial;
  SourcePos pos;
  bool operator==(const PortSpec&) const = default;
};

// Port of a sibling subcomponent (`component` set) or of the enclosing
// component (`component` empty).
struct PortRef {
  std::string component;
  std::string port;
  bool operator==(const PortRef&) const = default;
};

struct Channel {
  PortRef from;
  PortRef to;
  SourcePos pos;
  bool operator==(const Channel&) const = default;
};

struct Delegation {
  PortRef from;
  PortRef to;
  SourcePos pos;
  bool operator==(const Delegation&) const = default;
};

struct ComponentSpec;

struct Composite {
  std::vector<ComponentSpec> subs;
  std::vector<Channel> channels;
  std::vector<Delegation> delegations;
  bool operator==(const Composite&) const;
};

struct ComponentSpec {
  std::string name;
  std::vector<PortSpec> ports;
  Causality causality = Causality::Weak;
  std::variant<Automaton, FunctionTable, Composite> behavior;
  SourcePos pos;

  bool is_composite() const { return std::holds_alternative<Composite>(behavior); }
  const Composite* composite() const { return std::get_if<Composite>(&behavior); }
  const Automaton* automaton() const { return std::get_if<Automaton>(&behavior); }
  const FunctionTable* table() const { return std::get_if<FunctionTable>(&behavior); }

  const PortSpec* find_port(std::string_view n) const {
    for (const auto& p : ports)
      if (p.name == n) return &p;
    return nullptr;
  }
  const ComponentSpec* find_sub(std::string_view n) const;

  bool operator==(const ComponentSpec&) const = default;
};

inline bool Composite::operator==(const Composite& o) const {
  return subs == o.subs && channels == o.channels && delegations == o.delegations;
}

inline const ComponentSpec* ComponentSpec::find_sub(std::string_view n) const {
  if (auto* c = composite())
    for (const auto& s : c->subs)
      if (s.name == n) return &s;
  return nullptr;
}

struct Model {
  std::string name;
  std::vector<TypeDef> types;
  std::vector<FuncDef> funcs;
  ComponentSpec root;
  bool operator==(const Model&) const = default;
};

// Builders used by the parser, the derived-automaton construction and tests.
namespace ex {
ExprPtr int_lit(std::int64_t v);
ExprPtr bool_lit(bool v);
ExprPtr name(std::string n);
ExprPtr call(std::string f, std::vector<ExprPtr> args);
ExprPtr unary(UnaryOp op, ExprPtr a);
ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b);
ExprPtr if_then_else(ExprPtr c, ExprPtr a, ExprPtr b);
ExprPtr field(ExprPtr a, std::string f);
}  // namespace ex

const char* to_string(BinaryOp op);
const char* to_string(Causality c);

}  // namespace syn
