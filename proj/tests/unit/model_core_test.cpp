#include <doctest.h>

#include "syn/eval.hpp"
#include "syn/parser.hpp"
#include "syn/types.hpp"
#include "util.hpp"

using namespace syn;

namespace {

const char* kFuncs = R"(model F {
  type Mode = enum { Off, On }
  type Opt = variant { Some(Int), None }
  func max2(x: Int, y: Int): Int = if x > y then x else y
  func small(x: Int): int[0, 9] = x
  component R {
    in a: Bool init false
    causality weak
    automaton { states S init }
  }
})";

Value eval_text(const std::string& text, Env env = {}) {
  static Model m = parse_model(kFuncs);
  static TypeTable types(m);
  return eval_expr(parse_expr(text), env, EvalContext{types});
}

EvalErrorKind eval_error(const std::string& text, Env env = {}) {
  try {
    eval_text(text, std::move(env));
  } catch (const EvalError& e) {
    return e.kind();
  }
  FAIL("no error from " << text);
  return EvalErrorKind::TypeError;
}

}  // namespace

TEST_CASE("resolve finds builtins, declared types and reports missing names") {
  Model m = parse_model(kFuncs);
  TypeTable t(m);
  auto b = t.resolve("Bool");
  REQUIRE(std::holds_alternative<const TypeDef*>(b));
  CHECK(std::get<const TypeDef*>(b) == &builtin_bool());
  auto mode = t.resolve("Mode");
  REQUIRE(std::holds_alternative<const TypeDef*>(mode));
  CHECK(std::get<const TypeDef*>(mode)->literals == std::vector<std::string>{"Off", "On"});
  auto f = t.resolve("max2");
  REQUIRE(std::holds_alternative<const FuncDef*>(f));
  auto none = t.resolve("NoSuch");
  REQUIRE(std::holds_alternative<ResolveError>(none));
  CHECK(std::get<ResolveError>(none) == ResolveError::NotFound);
}

TEST_CASE("eval_expr on literals, conditionals and calls") {
  CHECK(eval_text("5") == Value::integer(5));
  CHECK(eval_text("if x > 2 then 1 else 0", {{"x", Value::integer(3)}}) == Value::integer(1));
  CHECK(eval_text("max2(2, 7)") == Value::integer(7));
  CHECK(eval_text("max2(9, 7)") == Value::integer(9));
  CHECK(eval_text("0 - 7 div 2") == Value::integer(-3));
  CHECK(eval_text("(0 - 7) div 2") == Value::integer(-3));
  CHECK(eval_text("(0 - 7) mod 2") == Value::integer(-1));
  CHECK(eval_text("match Some(4) { Some(v) => v + 1, None => 0 }") == Value::integer(5));
  CHECK(eval_text("false and 1 div 0 = 0") == Value::boolean(false));
}

TEST_CASE("eval_expr errors") {
  CHECK(eval_error("x div 0", {{"x", Value::integer(1)}}) == EvalErrorKind::DivisionByZero);
  CHECK(eval_error("x mod 0", {{"x", Value::integer(1)}}) == EvalErrorKind::DivisionByZero);
  CHECK(eval_error("2147483647 + 1") == EvalErrorKind::RangeViolation);
  CHECK(eval_error("small(12)") == EvalErrorKind::RangeViolation);
  CHECK(eval_error("y + 1") == EvalErrorKind::UnboundVariable);
}

TEST_CASE("match_pattern") {
  TypeTable types;
  EvalContext ctx{types};
  Pattern absence{"p", Pattern::Kind::Absent, {}, {}, {}};
  auto b = match_pattern(absence, absent, ctx);
  REQUIRE(b);
  CHECK(b->empty());
  CHECK_FALSE(match_pattern(absence, present(Value::integer(1)), ctx));

  Pattern lit{"p", Pattern::Kind::Literal, ex::int_lit(3), {}, {}};
  auto l = match_pattern(lit, present(Value::integer(3)), ctx);
  REQUIRE(l);
  CHECK(l->empty());
  CHECK_FALSE(match_pattern(lit, present(Value::integer(4)), ctx));
  CHECK_FALSE(match_pattern(lit, absent, ctx));

  Pattern bind{"p", Pattern::Kind::Bind, {}, "v", {}};
  auto v = match_pattern(bind, present(Value::integer(9)), ctx);
  REQUIRE(v);
  REQUIRE(v->size() == 1);
  CHECK((*v)[0].first == "v");
  CHECK((*v)[0].second == Value::integer(9));
  CHECK_FALSE(match_pattern(bind, absent, ctx));

  Pattern any{"p", Pattern::Kind::Present, {}, {}, {}};
  CHECK(match_pattern(any, present(Value::boolean(false)), ctx));
  CHECK_FALSE(match_pattern(any, absent, ctx));
}

TEST_CASE("canonical values render and parse back") {
  Model m = parse_model(kFuncs);
  TypeTable t(m);
  Type opt{Type::Kind::Variant, kIntMin, kIntMax, t.find_type("Opt")};
  Value v = parse_value("Some(-12)", opt, t);
  CHECK(render_value(v, opt, t) == "Some(-12)");
  CHECK(parse_message("-", opt, t) == absent);
  CHECK_THROWS_AS(parse_value("Some(", opt, t), ValueSyntaxError);
  CHECK(value_count(Type::integer(0, 9), t, 100) == 10);
  CHECK_FALSE(enumerate_values(Type::integer(), t, 1000));
}
