#include <doctest.h>

#include "syn/glossary.hpp"
#include "syn/parser.hpp"
#include "syn/printer.hpp"
#include "syn/requirements.hpp"
#include "syn/stimulus.hpp"
#include "util.hpp"

using namespace syn;
using syn::test::corpus;
using syn::test::slurp;

namespace {

const char* kMinimal =
    "model M { component Root { in a: Bool init false out b: Bool init false causality strong automaton { states S "
    "init } } }";

int depth(const ComponentSpec& c) {
  int d = 0;
  if (auto* comp = c.composite())
    for (const auto& s : comp->subs) d = std::max(d, depth(s));
  return d + (c.is_composite() ? 1 : 0);
}

int count_components(const ComponentSpec& c) {
  int n = 1;
  if (auto* comp = c.composite())
    for (const auto& s : comp->subs) n += count_components(s);
  return n;
}

std::string first_code(std::string_view text) {
  try {
    parse_requirements(text);
  } catch (const ParseError& e) {
    return e.diagnostics().front().code;
  }
  return "";
}

std::string stim_code(std::string_view text, const Model& m) {
  TypeTable t(m);
  try {
    parse_stimulus(text, m, t);
  } catch (const StimulusError& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal model parses") {
  Model m = parse_model(kMinimal);
  CHECK(m.name == "M");
  REQUIRE(m.root.automaton());
  CHECK(m.root.automaton()->transitions.empty());
  CHECK(m.root.causality == Causality::Strong);
  CHECK(m.root.ports.size() == 2);
}

TEST_CASE("misspelled keyword is a syntax error at that token") {
  std::string text = kMinimal;
  auto at = text.find("strong");
  text.replace(at, 6, "strongg");
  try {
    parse_model(text);
    FAIL("parsed");
  } catch (const ParseError& e) {
    const auto& d = e.diagnostics().front();
    CHECK(d.code == "SyntaxError");
    CHECK(d.pos.line == 1);
    CHECK(d.pos.col == static_cast<int>(at) + 1);
  }
}

TEST_CASE("duplicate definitions are reported by the parser") {
  CHECK_THROWS_AS(parse_model("model M { type A = enum { X } type A = enum { Y } component R { causality weak "
                              "automaton { states S init } } }"),
                  ParseError);
}

TEST_CASE("corpus model is a two-level hierarchy and survives pretty-printing") {
  Model m = parse_model(slurp(corpus("cruise.syn")));
  CHECK(depth(m.root) == 2);
  CHECK(count_components(m.root) >= 7);
  std::string printed = pretty_print(m);
  Model again = parse_model(printed);
  CHECK(again == m);
  CHECK(pretty_print(again) == printed);
}

TEST_CASE("requirements") {
  auto reqs = parse_requirements(
      "REQ r1 WHILE system is on IF accelerate button pressed AND no switch-off constraint THEN NEXT vehicle "
      "accelerates");
  REQUIRE(reqs.size() == 1);
  const auto& r = reqs[0];
  CHECK(r.id == "r1");
  CHECK(r.timing == Timing::NextTick);
  CHECK(r.whileCond == std::vector<std::string>{"system is on"});
  CHECK(r.ifCond == std::vector<std::string>{"accelerate button pressed", "no switch-off constraint"});
  CHECK(r.thenResp == std::vector<std::string>{"vehicle accelerates"});
  CHECK_FALSE(r.elseResp);

  CHECK(first_code("REQ r2 WHILE a IF b") == "MissingClause");
  auto corpus_reqs = parse_requirements(slurp(corpus("cruise.req")));
  REQUIRE(corpus_reqs.size() == 3);
  REQUIRE(corpus_reqs[2].elseResp);
  CHECK(corpus_reqs[2].elseTiming == Timing::NextTick);
}

TEST_CASE("glossary binding") {
  Model m = parse_model(slurp(corpus("cruise.syn")));
  auto gloss = parse_glossary_entries(slurp(corpus("cruise.gls")));
  auto reqs = parse_requirements(slurp(corpus("cruise.req")));
  BoundRequirements b = bind_glossary(m, gloss, reqs);
  REQUIRE(b.reqs.size() == 3);
  // r1 and r2 share "system is on"; r1 and r3 share "no switch-off constraint".
  CHECK(b.reqs[0].when == b.reqs[1].when);
  CHECK(b.reqs[0].cond[1] == b.reqs[2].cond[1]);
  CHECK(b.atoms[b.reqs[0].when[0]].phrase == "system is on");

  auto unknown = parse_requirements("REQ q WHILE system is on IF gravity reverses THEN vehicle accelerates");
  try {
    bind_glossary(m, gloss, unknown);
    FAIL("bound");
  } catch (const BindError& e) {
    REQUIRE(e.diagnostics().size() == 1);
    CHECK(e.diagnostics()[0].code == "UnknownPhrase");
    CHECK(e.diagnostics()[0].phrase == "gravity reverses");
  }

  auto bad = parse_glossary_entries("\"system is on\" := @Controller.Nowhere\n\"vehicle accelerates\" := throttle?\n");
  CHECK_THROWS_AS(bind_glossary(m, bad, parse_requirements("REQ q WHILE system is on IF system is on THEN vehicle accelerates")),
                  BindError);
}

TEST_CASE("stimulus parsing") {
  Model m = parse_model(
      "model S { component R { in speed: Int init 0 in btn: Bool init false out o: Bool init false causality weak "
      "automaton { states A init } } }");
  TypeTable t(m);
  Stimulus s = parse_stimulus("0;speed=5;btn=-\n", m, t);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0][0] == present(Value::integer(5)));
  CHECK(s.rows[0][1] == absent);
  CHECK(render_stimulus(s, m, t) == "0;speed=5;btn=-\n");

  CHECK(stim_code("0;spd=5;btn=-\n", m) == "UnknownPort");
  CHECK(stim_code("0;speed=5;btn=-\n2;speed=5;btn=-\n", m) == "NonContiguousTicks");
  CHECK(stim_code("0;speed=5\n", m) == "MissingPort");
  CHECK(stim_code("0;speed=5;speed=6;btn=-\n", m) == "DuplicatePort");
  CHECK(stim_code("0;speed=true;btn=-\n", m) == "TypeMismatch");
  CHECK(stim_code("0 speed\n", m) == "SyntaxError");
  CHECK(parse_stimulus("", m, t).rows.empty());
}
