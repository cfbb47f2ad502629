#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>

#include "syn/codegen.hpp"
#include "util.hpp"

using namespace syn;
using syn::test::corpus;
using syn::test::slurp;
using syn::test::work_dir;

namespace fs = std::filesystem;

namespace {

const char* kStrict = " -std=c99 -pedantic -Wall -Wextra -Werror -Wshadow -Wconversion -O1";

int sh(const std::string& cmd) { return std::system(cmd.c_str()); }

// Writes the units and builds the harness; returns the binary path.
fs::path build(const std::vector<GeneratedUnit>& units, const fs::path& dir) {
  std::string srcs;
  for (const auto& u : units) {
    std::ofstream(dir / u.fileName) << u.contents;
    if (u.fileName.ends_with(".c")) srcs += " " + (dir / u.fileName).string();
  }
  fs::path bin = dir / "harness";
  int rc = sh(std::string(SYN_CC) + kStrict + srcs + " -o " + bin.string() + " 2> " + (dir / "cc.log").string());
  INFO(slurp(dir / "cc.log"));
  REQUIRE(rc == 0);
  return bin;
}

const GeneratedUnit* unit(const std::vector<GeneratedUnit>& us, GeneratedUnit::Kind k, std::string_view name = "") {
  for (const auto& u : us)
    if (u.kind == k && (name.empty() || u.fileName == name)) return &u;
  return nullptr;
}

const char* kDelay = R"(model Delay {
  type Mode = enum { Off, On }
  component D {
    in i: Int init 0
    in m: Mode init Off
    out o: Int init 0
    out n: Mode init On
    causality strong
    table {
      when i?v, m?k then o = v, n = k
      when i?v, m = - then o = v
    }
  }
})";

}  // namespace

TEST_CASE("unit delay and enum emission") {
  Model m = parse_model(kDelay);
  System sys(m);
  auto units = generate_all(sys);
  const GeneratedUnit* types = unit(units, GeneratedUnit::Kind::Types, "types.h");
  REQUIRE(types);
  CHECK(types->contents.find("typedef int32_t T_Mode;") != std::string::npos);
  CHECK(types->contents.find("E_Mode_Off") != std::string::npos);
  CHECK(types->contents.find("E_Mode_On") != std::string::npos);

  const GeneratedUnit* step = unit(units, GeneratedUnit::Kind::ComponentStep, "D.c");
  REQUIRE(step);
  CHECK(step->contents.find("b_o") != std::string::npos);
  CHECK(unit(units, GeneratedUnit::Kind::Harness, "harness.c"));
  CHECK(units.back().kind == GeneratedUnit::Kind::Harness);
  CHECK(lint_subset(units).findings.empty());

  fs::path dir = work_dir("codegen_delay");
  fs::path bin = build(units, dir);
  std::string stim = "0;i=1;m=On\n1;i=2;m=-\n2;i=3;m=Off\n";
  std::ofstream(dir / "s.stim") << stim;
  REQUIRE(sh(bin.string() + " " + (dir / "s.stim").string() + " 3 > " + (dir / "out.txt").string()) == 0);
  CHECK(slurp(dir / "out.txt") == syn::test::trace_of(sys, stim, 3));
  CHECK(slurp(dir / "out.txt") == "0;i=1;m=On;o=0;n=On\n1;i=2;m=-;o=1;n=On\n2;i=3;m=Off;o=2;n=-\n");
}

TEST_CASE("harness: empty stimulus, malformed rows, runtime errors") {
  Model m = parse_model(R"(model Dz {
  component R {
    in a: Int init 0
    out b: Int init 0
    causality weak
    table {
      when a?v then b = 10 div v
    }
  }
})");
  System sys(m);
  fs::path dir = work_dir("codegen_harness");
  fs::path bin = build(generate_all(sys), dir);
  auto run = [&](const std::string& stim, int ticks) {
    std::ofstream(dir / "s.stim") << stim;
    int rc = sh(bin.string() + " " + (dir / "s.stim").string() + " " + std::to_string(ticks) + " > " +
                (dir / "out.txt").string() + " 2> " + (dir / "err.txt").string());
    return WEXITSTATUS(rc);
  };
  CHECK(run("", 5) == 0);
  CHECK(slurp(dir / "out.txt").empty());

  CHECK(run("0;a=1\n1;a=oops\n", 2) != 0);
  CHECK(slurp(dir / "out.txt").empty());
  CHECK(slurp(dir / "err.txt").find("TypeMismatch") != std::string::npos);
  CHECK(run("0;b=1\n", 1) != 0);
  CHECK(run("0;a=1\n2;a=1\n", 2) != 0);

  std::string stim = "0;a=5\n1;a=0\n2;a=1\n";
  CHECK(run(stim, 3) == 1);
  CHECK(slurp(dir / "out.txt") == syn::test::trace_of(sys, stim, 3));
}

TEST_CASE("corpus units lint clean and injected constructs are caught") {
  Model m = parse_model(slurp(corpus("cruise.syn")));
  System sys(m);
  auto units = generate_all(sys);
  CHECK(lint_subset(units).findings.empty());

  struct Fixture {
    const char* code;
    const char* text;
  };
  const Fixture fixtures[] = {
      {"ForbiddenConstruct", "void f(void)\n{\n  int32_t *p = malloc(4);\n  (void)p;\n}\n"},
      {"RecursionDetected",
       "static int32_t g(int32_t n)\n{\n  if (n == 0) {\n    return 0;\n  }\n  return g(n - 1);\n}\n"},
      {"ForbiddenConstruct", "void f(void)\n{\n  int32_t i = 0;\n  while (i < 3) {\n    i++;\n  }\n}\n"},
      {"ForbiddenConstruct", "void f(int32_t *p)\n{\n  p = p + 1;\n  (void)p;\n}\n"},
      {"ForbiddenConstruct", "void f(void)\n{\n  printf(\"%d\", 1);\n}\n"},
      {"ForbiddenConstruct", "void f(void)\n{\n  int32_t i;\n  for (i = 0; i < 3; i++) {\n    i = 7;\n  }\n}\n"},
  };
  for (const auto& f : fixtures) {
    auto injected = units;
    injected.back().contents += f.text;
    CheckReport r = lint_subset(injected);
    INFO(f.text);
    REQUIRE(r.findings.size() == 1);
    CHECK(r.findings[0].severity == Severity::Error);
    CHECK(r.findings[0].code == f.code);
  }
}

TEST_CASE("hierarchical feedback through a composite is rejected") {
  Model m = parse_model(R"(model Fb {
  component Top {
    in x: Bool init false
    out y: Bool init false
    causality weak
    sub Box {
      in a: Bool init false
      in b: Bool init false
      out p: Bool init false
      out q: Bool init false
      causality weak
      sub L {
        in i: Bool init false
        out o: Bool init false
        causality weak
        table {
          when i?v then o = v
        }
      }
      sub R {
        in i: Bool init false
        out o: Bool init false
        causality weak
        table {
          when i?v then o = v
        }
      }
      delegate a -> L.i
      delegate b -> R.i
      delegate L.o -> p
      delegate R.o -> q
    }
    sub N {
      in i: Bool init false
      out o: Bool init false
      causality weak
      table {
        when i?v then o = not v
      }
    }
    delegate x -> Box.a
    channel Box.p -> N.i
    channel N.o -> Box.b
    delegate Box.q -> y
  }
})");
  REQUIRE(check_model(m).passes());
  System sys(m);
  CHECK_THROWS_AS(generate_all(sys), CodegenError);
}
