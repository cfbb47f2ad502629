#include "syn/ast.hpp"

namespace syn {
namespace ex {

ExprPtr int_lit(std::int64_t v) {
  Expr e;
  e.kind = Expr::Kind::IntLit;
  e.number = v;
  return e;
}

ExprPtr bool_lit(bool v) {
  Expr e;
  e.kind = Expr::Kind::BoolLit;
  e.number = v ? 1 : 0;
  return e;
}

ExprPtr name(std::string n) {
  Expr e;
  e.kind = Expr::Kind::Name;
  e.name = std::move(n);
  return e;
}

ExprPtr call(std::string f, std::vector<ExprPtr> args) {
  Expr e;
  e.kind = Expr::Kind::Call;
  e.name = std::move(f);
  e.args = std::move(args);
  return e;
}

ExprPtr unary(UnaryOp op, ExprPtr a) {
  Expr e;
  e.kind = Expr::Kind::Unary;
  e.unop = op;
  e.args = {std::move(a)};
  return e;
}

ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = Expr::Kind::Binary;
  e.binop = op;
  e.args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr if_then_else(ExprPtr c, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = Expr::Kind::If;
  e.args = {std::move(c), std::move(a), std::move(b)};
  return e;
}

ExprPtr field(ExprPtr a, std::string f) {
  Expr e;
  e.kind = Expr::Kind::Field;
  e.name = std::move(f);
  e.args = {std::move(a)};
  return e;
}

}  // namespace ex

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "div";
    case BinaryOp::Mod: return "mod";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

const char* to_string(Causality c) { return c == Causality::Weak ? "weak" : "strong"; }

}  // namespace syn
