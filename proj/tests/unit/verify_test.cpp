#include <doctest.h>

#include "syn/bmc.hpp"
#include "syn/formula.hpp"
#include "syn/glossary.hpp"
#include "syn/requirements.hpp"
#include "syn/smt.hpp"
#include "syn/verify.hpp"
#include "util.hpp"

using namespace syn;
using syn::test::corpus;
using syn::test::slurp;

namespace {

std::vector<TemporalFormula> formulas(const Model& m, const std::string& gloss, const std::string& reqs) {
  BoundRequirements b = bind_glossary(m, parse_glossary_entries(gloss), parse_requirements(reqs));
  std::vector<TemporalFormula> out;
  for (const auto& r : b.reqs) out.push_back(requirement_to_formula(b, r));
  return out;
}

const char* kDelay = R"(model Delay {
  component D {
    in i: Bool init false
    out o: Bool init false
    causality strong
    table {
      when i?v then o = v
    }
  }
})";

const char* kDelayGloss = R"("running" := true
"input high" := i = true
"input low" := i = false
"output high" := o = true
"output low" := o = false
"input both" := i = true and i = false
)";

SmtOptions solver() { return {default_solver(), ""}; }

}  // namespace

TEST_CASE("requirement_to_formula") {
  Model m = parse_model(slurp(corpus("cruise.syn")));
  auto fs = formulas(m, slurp(corpus("cruise.gls")), slurp(corpus("cruise.req")));
  REQUIRE(fs.size() == 3);
  CHECK(fs[0].id == "r1");
  CHECK(render_formula(fs[0]) ==
        "G(([system is on] & ([accelerate button pressed] & [no switch-off constraint])) -> X [vehicle accelerates])");
  CHECK(fs[1].clauses.size() == 1);
  CHECK(fs[2].clauses.size() == 2);

  Model d = parse_model(kDelay);
  auto same = formulas(d, kDelayGloss, "REQ s WHILE running IF input high THEN output high");
  REQUIRE(same[0].clauses.size() == 1);
  CHECK_FALSE(same[0].clauses[0].next);
  CHECK(render_formula(same[0]) == "G(([running] & [input high]) -> [output high])");
}

TEST_CASE("explicit engine") {
  Model m = parse_model(kDelay);
  System sys(m);
  TemporalFormula truth{"t", {}, {SafetyClause{Prop::truth(), Prop::truth(), false}}};
  Verdict v = bmc_explicit(sys, truth, 7);
  CHECK(v.holds());
  CHECK(v.label() == "HOLDS(7)");

  auto fs = formulas(m, kDelayGloss,
                     "REQ d1 WHILE running IF input high THEN NEXT output high\n"
                     "REQ d2 WHILE running IF input low THEN NEXT output low\n"
                     "REQ d3 WHILE running IF input high THEN output high\n");
  CHECK(bmc_explicit(sys, fs[0], 20).holds());
  CHECK(bmc_explicit(sys, fs[1], 20).holds());
  Verdict cex = bmc_explicit(sys, fs[2], 20);
  REQUIRE(cex.kind == Verdict::Kind::Counterexample);
  CHECK(cex.violationTick == 0);
  CHECK(cex.label() == "CEX(0)");
  auto replay = replay_violation(sys, fs[2], cex);
  REQUIRE(replay);
  CHECK(*replay == cex.violationTick);
}

TEST_CASE("SMT encoding and solver") {
  Model m = parse_model(kDelay);
  System sys(m);
  auto fs = formulas(m, kDelayGloss,
                     "REQ d1 WHILE running IF input high THEN NEXT output high\nREQ d3 WHILE running IF input high THEN output high\n");
  std::string k0 = encode_smt(sys, fs[0], 0);
  // Bound 0: initial state only, nothing to violate.
  CHECK(k0.find("(check-sat)") != std::string::npos);
  CHECK(k0.find("declare-const") == std::string::npos);
  CHECK(k0.find("buf.D.o@0") != std::string::npos);
  CHECK(k0.find("(assert false)") != std::string::npos);
  std::string k2 = encode_smt(sys, fs[0], 2);
  CHECK(k2.find("(declare-const in.i@1 ") != std::string::npos);
  CHECK(k2.find("in.i@2") == std::string::npos);

  CHECK(bmc_smt(sys, fs[0], 4, {"", ""}).kind == Verdict::Kind::EngineError);
  if (solver().solver.empty()) return;
  CHECK(bmc_smt(sys, fs[0], 10, solver()).holds());
  Verdict cex = bmc_smt(sys, fs[1], 10, solver());
  REQUIRE(cex.kind == Verdict::Kind::Counterexample);
  auto replay = replay_violation(sys, fs[1], cex);
  REQUIRE(replay);
  CHECK(*replay == cex.violationTick);
}

TEST_CASE("cross check agreement and vacuity") {
  Model m = parse_model(kDelay);
  System sys(m);
  auto fs = formulas(m, kDelayGloss,
                     "REQ d1 WHILE running IF input high THEN NEXT output high\n"
                     "REQ v WHILE running IF input both THEN output high\n"
                     "REQ d3 WHILE running IF input high THEN output high\n");
  CrossReport rep = cross_check(sys, fs, 6, solver());
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.all_agree());
  CHECK(rep.rows[1].explicitVerdict.vacuous);
  REQUIRE(rep.warnings.size() == 1);
  CHECK(rep.warnings[0].find("v") != std::string::npos);
  CHECK(rep.rows[2].explicitVerdict.kind == Verdict::Kind::Counterexample);
  CHECK(rep.rows[2].smtVerdict.kind == Verdict::Kind::Counterexample);
  CHECK(rep.render().find("d1\tHOLDS(6)\tHOLDS(6)\tAGREE\n") == 0);
}

TEST_CASE("theory export") {
  Model m = parse_model(R"(model Th {
  component Top {
    in a: Int init 0
    out b: Int init 0
    causality weak
    sub A {
      in i: Int init 0
      out o: Int init 0
      causality weak
      automaton {
        states S init, T
        transition go: S -> T when i?v with v > 0 then o = v
        transition back: T -> S when i = - then o = 0
      }
    }
    sub B {
      in i: Int init 0
      out o: Int init 0
      causality weak
      table {
        when i?v then o = v
      }
    }
    delegate a -> A.i
    channel A.o -> B.i
    delegate B.o -> b
  }
})");
  System sys(m);
  std::string doc = export_theories(sys);
  CHECK(theory_section_count(doc) == 4);
  auto a = doc.find("section atomic Top.A");
  REQUIRE(a != std::string::npos);
  std::string sec = doc.substr(a, doc.find("end\n", a) - a);
  CHECK(sec.find("case state = S") != std::string::npos);
  CHECK(sec.find("case state = T") != std::string::npos);
  CHECK(sec.find("otherwise -> (state, vars, {})") != std::string::npos);
  CHECK(doc.find("compose(step_Top.A, step_Top.B)") != std::string::npos);

  Model cruise = parse_model(slurp(corpus("cruise.syn")));
  System cs(cruise);
  CHECK(theory_section_count(export_theories(cs)) == cs.flat().instances.size() + 1);
}
