#include <doctest.h>

#include "syn/checks.hpp"
#include "syn/flat.hpp"
#include "util.hpp"

using namespace syn;
using syn::test::codes;
using syn::test::corpus;
using syn::test::slurp;

namespace {

// A copying atomic: out o = whatever arrives on i.
std::string copier(const std::string& name, const std::string& causality, const std::string& in_type = "Bool",
                   const std::string& out_type = "Bool") {
  std::string init_in = in_type == "Bool" ? "false" : "0";
  std::string init_out = out_type == "Bool" ? "false" : "0";
  return "    sub " + name + " {\n      in i: " + in_type + " init " + init_in + "\n      out o: " + out_type +
         " init " + init_out + "\n      causality " + causality + "\n      table {\n        when i?v then o = v\n      }\n    }\n";
}

std::string composite(const std::string& causality, const std::string& body) {
  return "model C {\n  component Top {\n    in x: Bool init false\n    out y: Bool init false\n    causality " +
         causality + "\n" + body + "  }\n}\n";
}

CheckReport check_text(const std::string& text) { return check_model(parse_model(text)); }

}  // namespace

TEST_CASE("corpus model passes every check") {
  CheckReport r = check_text(slurp(corpus("cruise.syn")));
  CHECK(r.passes());
  CHECK(r.findings.empty());
}

TEST_CASE("type errors") {
  CheckReport chan = check_text(composite("weak", copier("A", "weak", "Bool", "Int") + copier("B", "weak") +
                                                      "    delegate x -> A.i\n    channel A.o -> B.i\n"
                                                      "    delegate B.o -> y\n"));
  CHECK(chan.has("TypeMismatch"));
  CHECK_FALSE(chan.passes());

  CheckReport pre = check_text(
      "model P { component R { in a: Bool init false causality weak automaton { states S init var count: Int init 0 "
      "transition t: S -> S with count + true then count := 1 } } }");
  CHECK_FALSE(pre.passes());
  CHECK(pre.has("TypeMismatch"));
}

TEST_CASE("recursion") {
  CheckReport ty = check_nonrecursive(parse_model(
      "model R { type T = record { next: T } component R { causality weak automaton { states S init } } }"));
  REQUIRE(ty.has("RecursiveType"));
  CHECK(ty.findings.front().message.find("T") != std::string::npos);

  CheckReport fn = check_nonrecursive(parse_model(
      "model R { func f(x: Int): Int = g(x) func g(x: Int): Int = f(x) "
      "component R { causality weak automaton { states S init } } }"));
  CHECK(fn.has("RecursiveFunction"));

  CheckReport chain = check_model(parse_model(
      "model R { func f(x: Int): Int = g(x) + 1 func g(x: Int): Int = h(x) func h(x: Int): Int = x "
      "component R { causality weak automaton { states S init } } }"));
  CHECK(chain.passes());
}

TEST_CASE("causality") {
  CheckReport cyc = check_text(slurp(corpus("weak_cycle.syn")));
  CHECK(cyc.has("WeaklyCausalCycle"));
  CHECK_FALSE(cyc.passes());

  CheckReport fixed = check_text(slurp(corpus("weak_cycle_fixed.syn")));
  CHECK(fixed.passes());

  std::string loop = "    delegate x -> A.i\n    channel A.o -> B.i\n    channel B.o -> A.i2\n    delegate B.o -> y\n";
  auto two = [](const std::string& cb) {
    return "    sub A {\n      in i: Bool init false\n      in i2: Bool init false\n      out o: Bool init false\n"
           "      causality weak\n      table {\n        when i?v then o = v\n      }\n    }\n" +
           copier("B", cb);
  };
  CHECK(check_text(composite("weak", two("weak") + loop)).has("WeaklyCausalCycle"));
  CHECK(check_text(composite("weak", two("strong") + loop)).passes());

  CheckReport self = check_text(composite(
      "weak", "    sub A {\n      in i: Bool init false\n      out o: Bool init false\n      causality strong\n"
              "      table {\n        when i?v then o = not v\n      }\n    }\n"
              "    channel A.o -> A.i\n    delegate A.o -> y\n"));
  CHECK(self.passes());
}

TEST_CASE("connectivity") {
  CheckReport multi = check_text(composite(
      "weak", copier("A", "weak") + copier("B", "weak") + copier("C", "weak") +
                  "    delegate x -> A.i\n    delegate x -> B.i\n    channel A.o -> C.i\n    channel B.o -> C.i\n"
                  "    delegate C.o -> y\n"));
  CHECK(multi.has("MultipleDrivers"));

  CheckReport open = check_text(composite("weak", copier("A", "weak") + "    delegate A.o -> y\n"));
  CHECK(open.has("UnconnectedInput"));
  CHECK(open.passes());

  CheckReport fan = check_text(composite(
      "weak", copier("A", "weak") + copier("B", "weak") + copier("C", "weak") + copier("D", "weak") +
                  "    delegate x -> A.i\n    channel A.o -> B.i\n    channel A.o -> C.i\n    channel A.o -> D.i\n"
                  "    delegate B.o -> y\n"));
  CHECK(fan.passes());
  CHECK_FALSE(fan.has("MultipleDrivers"));
}

TEST_CASE("composite causality declarations") {
  CheckReport over =
      check_text(composite("strong", copier("A", "weak") + "    delegate x -> A.i\n    delegate A.o -> y\n"));
  CHECK(over.has("CausalityOverclaim"));
  CHECK_FALSE(over.passes());

  CheckReport under =
      check_text(composite("weak", copier("A", "strong") + "    delegate x -> A.i\n    delegate A.o -> y\n"));
  CHECK(under.has("CausalityUnderclaim"));
  CHECK(under.passes());

  CheckReport ok =
      check_text(composite("strong", copier("A", "strong") + "    delegate x -> A.i\n    delegate A.o -> y\n"));
  CHECK(ok.passes());
  CHECK(ok.findings.empty());
}

TEST_CASE("overlapping transitions are flagged as possible non-determinism") {
  CheckReport r = check_determinism(parse_model(
      "model D { component R { in a: Int init 0 out b: Int init 0 causality weak automaton { states S init "
      "transition t1: S -> S when a?v with v > 1 then b = 1 transition t2: S -> S when a?v with v > 2 then b = 2 } } "
      "}"));
  CHECK(r.has("PossibleNonDeterminism"));
  CHECK(r.passes());
}

TEST_CASE("report rendering") {
  CheckReport r;
  r.add(Severity::Error, "TypeMismatch", "Top.A", SourcePos{3, 7}, "boom");
  CHECK(r.render() == "Error TypeMismatch Top.A:3:7 boom\n");
  CHECK(codes(r) == "TypeMismatch ");
}
