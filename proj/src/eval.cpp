#include "syn/eval.hpp"

namespace syn {

const char* to_string(EvalErrorKind k) {
  switch (k) {
    case EvalErrorKind::DivisionByZero: return "DivisionByZero";
    case EvalErrorKind::RangeViolation: return "RangeViolation";
    case EvalErrorKind::UnboundVariable: return "UnboundVariable";
    case EvalErrorKind::MatchFailure: return "MatchFailure";
    case EvalErrorKind::TypeError: return "TypeError";
    case EvalErrorKind::Unobservable: return "Unobservable";
  }
  return "EvalError";
}

namespace {

[[noreturn]] void raise(EvalErrorKind k, const std::string& msg) { throw EvalError(k, msg); }

Value checked_int(std::int64_t v, const char* what) {
  if (v < kIntMin || v > kIntMax)
    raise(EvalErrorKind::RangeViolation, std::string(what) + " result " + std::to_string(v) + " leaves the 32-bit range");
  return Value::integer(v);
}

const Value& expect_int(const Value& v) {
  if (v.kind != Value::Kind::Int) raise(EvalErrorKind::TypeError, "integer operand expected");
  return v;
}

bool expect_bool(const Value& v) {
  if (v.kind != Value::Kind::Bool) raise(EvalErrorKind::TypeError, "boolean operand expected");
  return v.as_bool();
}

Value construct(const CtorInfo& ci, const Expr& e, Env& env, const EvalContext& ctx) {
  const TypeDef& def = *ci.type;
  if (def.kind == TypeDef::Kind::Enum) {
    if (!e.args.empty()) raise(EvalErrorKind::TypeError, "enum literal " + e.name + " takes no arguments");
    return Value::enumeration(&def, ci.index);
  }
  const auto& ctor = def.ctors[ci.index];
  if (ctor.payload.size() != e.args.size())
    raise(EvalErrorKind::TypeError, "constructor " + ctor.name + " arity mismatch");
  std::vector<Value> payload;
  payload.reserve(e.args.size());
  for (std::size_t i = 0; i < e.args.size(); ++i)
    payload.push_back(eval_into(*e.args[i], ctx.types.payload_type(def, ci.index, i), env, ctx));
  return Value::variant(&def, ci.index, std::move(payload));
}

Value call(const FuncDef& f, const Expr& e, Env& env, const EvalContext& ctx) {
  if (f.params.size() != e.args.size()) raise(EvalErrorKind::TypeError, "call of " + f.name + " arity mismatch");
  Env local;
  for (std::size_t i = 0; i < e.args.size(); ++i)
    local.bind(f.params[i].name, eval_into(*e.args[i], ctx.types.resolve_or_throw(f.params[i].type), env, ctx));
  return eval_into(*f.body, ctx.types.resolve_or_throw(f.result), local, ctx);
}

Value arith(BinaryOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case BinaryOp::Add: return checked_int(a + b, "+");
    case BinaryOp::Sub: return checked_int(a - b, "-");
    case BinaryOp::Mul: return checked_int(a * b, "*");
    case BinaryOp::Div:
      if (b == 0) raise(EvalErrorKind::DivisionByZero, "division by zero");
      return checked_int(a / b, "div");
    case BinaryOp::Mod:
      if (b == 0) raise(EvalErrorKind::DivisionByZero, "modulo by zero");
      return checked_int(a % b, "mod");
    case BinaryOp::Lt: return Value::boolean(a < b);
    case BinaryOp::Le: return Value::boolean(a <= b);
    case BinaryOp::Gt: return Value::boolean(a > b);
    case BinaryOp::Ge: return Value::boolean(a >= b);
    default: break;
  }
  raise(EvalErrorKind::TypeError, std::string("operator ") + to_string(op) + " on integers");
}

}  // namespace

void check_slot(const Value& v, const Type& slot, const TypeTable& types, std::string_view what) {
  if (conforms(v, slot, types)) return;
  if (slot.is_int() && v.kind == Value::Kind::Int)
    raise(EvalErrorKind::RangeViolation,
          std::to_string(v.num) + " outside " + describe(slot) + " for " + std::string(what));
  raise(EvalErrorKind::RangeViolation, "value does not fit " + describe(slot) + " for " + std::string(what));
}

Value eval_into(const Expr& e, const Type& slot, Env& env, const EvalContext& ctx) {
  Value v = eval_expr(e, env, ctx);
  check_slot(v, slot, ctx.types, "value");
  return v;
}

Value eval_expr(const Expr& e, Env& env, const EvalContext& ctx) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return checked_int(e.number, "literal");
    case Expr::Kind::BoolLit: return Value::boolean(e.number != 0);
    case Expr::Kind::Name: {
      if (const Value* v = env.lookup(e.name)) return *v;
      if (const CtorInfo* ci = ctx.types.find_ctor(e.name)) return construct(*ci, e, env, ctx);
      raise(EvalErrorKind::UnboundVariable, "unbound variable " + e.name);
    }
    case Expr::Kind::Call: {
      if (const FuncDef* f = ctx.types.find_func(e.name)) return call(*f, e, env, ctx);
      if (const CtorInfo* ci = ctx.types.find_ctor(e.name)) return construct(*ci, e, env, ctx);
      raise(EvalErrorKind::UnboundVariable, "unknown function " + e.name);
    }
    case Expr::Kind::Record: {
      const TypeDef* def = ctx.types.find_type(e.name);
      if (!def || def->kind != TypeDef::Kind::Record) raise(EvalErrorKind::TypeError, e.name + " is not a record type");
      std::vector<Value> fields;
      fields.reserve(def->fields.size());
      for (std::size_t i = 0; i < def->fields.size(); ++i) {
        const FieldInit* init = nullptr;
        for (const auto& fi : e.inits)
          if (fi.name == def->fields[i].name) init = &fi;
        if (!init) raise(EvalErrorKind::TypeError, "missing field " + def->fields[i].name);
        fields.push_back(eval_into(*init->value, ctx.types.field_type(*def, i), env, ctx));
      }
      return Value::record(def, std::move(fields));
    }
    case Expr::Kind::Field: {
      Value rec = eval_expr(*e.args[0], env, ctx);
      if (rec.kind != Value::Kind::Record || !rec.type) raise(EvalErrorKind::TypeError, "field access on non-record");
      for (std::size_t i = 0; i < rec.type->fields.size(); ++i)
        if (rec.type->fields[i].name == e.name) return std::move(rec.items[i]);
      raise(EvalErrorKind::TypeError, "no field " + e.name);
    }
    case Expr::Kind::Match: {
      Value scrut = eval_expr(*e.args[0], env, ctx);
      if ((scrut.kind != Value::Kind::Enum && scrut.kind != Value::Kind::Variant) || !scrut.type)
        raise(EvalErrorKind::TypeError, "match on a value without constructors");
      const auto idx = static_cast<std::size_t>(scrut.num);
      const std::string& ctor = scrut.kind == Value::Kind::Enum ? scrut.type->literals[idx] : scrut.type->ctors[idx].name;
      for (const auto& arm : e.arms) {
        if (!arm.ctor.empty() && arm.ctor != ctor) continue;
        const auto m = env.mark();
        if (!arm.ctor.empty())
          for (std::size_t i = 0; i < arm.binds.size() && i < scrut.items.size(); ++i) env.bind(arm.binds[i], scrut.items[i]);
        Value r = eval_expr(*arm.body, env, ctx);
        env.reset(m);
        return r;
      }
      raise(EvalErrorKind::MatchFailure, "no arm matches " + ctor);
    }
    case Expr::Kind::If:
      return expect_bool(eval_expr(*e.args[0], env, ctx)) ? eval_expr(*e.args[1], env, ctx)
                                                          : eval_expr(*e.args[2], env, ctx);
    case Expr::Kind::Unary: {
      Value a = eval_expr(*e.args[0], env, ctx);
      if (e.unop == UnaryOp::Not) return Value::boolean(!expect_bool(a));
      return checked_int(-expect_int(a).num, "negation");
    }
    case Expr::Kind::Binary: {
      if (e.binop == BinaryOp::And)
        return Value::boolean(expect_bool(eval_expr(*e.args[0], env, ctx)) && expect_bool(eval_expr(*e.args[1], env, ctx)));
      if (e.binop == BinaryOp::Or)
        return Value::boolean(expect_bool(eval_expr(*e.args[0], env, ctx)) || expect_bool(eval_expr(*e.args[1], env, ctx)));
      Value a = eval_expr(*e.args[0], env, ctx);
      Value b = eval_expr(*e.args[1], env, ctx);
      if (e.binop == BinaryOp::Eq) return Value::boolean(a == b);
      if (e.binop == BinaryOp::Ne) return Value::boolean(a != b);
      return arith(e.binop, expect_int(a).num, expect_int(b).num);
    }
    case Expr::Kind::PortPresent:
    case Expr::Kind::PortValue: {
      if (!ctx.observer) raise(EvalErrorKind::Unobservable, "port " + e.name + " observed outside a running system");
      Message m = ctx.observer->port(e.name);
      if (e.kind == Expr::Kind::PortPresent) return Value::boolean(m.has_value());
      if (!m) raise(EvalErrorKind::Unobservable, "value of absent port " + e.name);
      return std::move(*m);
    }
    case Expr::Kind::StateIs:
      if (!ctx.observer) raise(EvalErrorKind::Unobservable, "control state observed outside a running system");
      return Value::boolean(ctx.observer->in_state(e.name, e.member));
    case Expr::Kind::StateVar:
      if (!ctx.observer) raise(EvalErrorKind::Unobservable, "state variable observed outside a running system");
      return ctx.observer->state_var(e.name, e.member);
  }
  raise(EvalErrorKind::TypeError, "unknown expression");
}

std::optional<Binding> match_pattern(const Pattern& p, const Message& m, const EvalContext& ctx) {
  switch (p.kind) {
    case Pattern::Kind::Absent:
      if (m) return std::nullopt;
      return Binding{};
    case Pattern::Kind::Present:
      if (!m) return std::nullopt;
      return Binding{};
    case Pattern::Kind::Literal: {
      if (!m) return std::nullopt;
      Env none;
      if (eval_expr(*p.literal, none, ctx) != *m) return std::nullopt;
      return Binding{};
    }
    case Pattern::Kind::Bind:
      if (!m) return std::nullopt;
      return Binding{{p.var, *m}};
  }
  return std::nullopt;
}

}  // namespace syn
