#include <doctest.h>

#include "syn/cli.hpp"
#include "util.hpp"

using namespace syn;
using syn::test::corpus;
using syn::test::slurp;
using syn::test::work_dir;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "syn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string path(const char* name) { return corpus(name).string(); }

}  // namespace

TEST_CASE("check") {
  Result ok = cli({"check", path("cruise.syn")});
  CHECK(ok.code == 0);
  Result cyc = cli({"check", path("weak_cycle.syn")});
  CHECK(cyc.code == 1);
  CHECK(cyc.err.find("WeaklyCausalCycle") != std::string::npos);
  CHECK(cli({"check", path("weak_cycle_fixed.syn")}).code == 0);
}

TEST_CASE("usage and IO errors exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"simulate", path("cruise.syn")}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"simulate", path("cruise.syn"), "--stimulus", path("cruise.stim"), "--ticks", "3", "--policy", "best"})
            .code == 2);
  Result missing = cli({"check", "/nonexistent/model.syn"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot read") != std::string::npos);
}

TEST_CASE("simulate prints the trace") {
  Result r = cli({"simulate", path("cruise.syn"), "--stimulus", path("cruise.stim"), "--ticks", "10"});
  CHECK(r.code == 0);
  Model m = parse_model(slurp(corpus("cruise.syn")));
  System sys(m);
  CHECK(r.out == syn::test::trace_of(sys, slurp(corpus("cruise.stim")), 10));
  Result rnd = cli({"simulate", path("cruise.syn"), "--stimulus", path("cruise.stim"), "--ticks", "10", "--policy",
                    "random", "--seed", "9"});
  CHECK(rnd.code == 0);
}

TEST_CASE("generate and export write below DIR/<model>") {
  auto dir = work_dir("cli_out");
  Result g = cli({"generate", path("cruise.syn"), "-o", dir.string()});
  REQUIRE(g.code == 0);
  CHECK(std::filesystem::exists(dir / "Cruise" / "harness.c"));
  CHECK(std::filesystem::exists(dir / "Cruise" / "types.h"));
  CHECK(g.out.find("harness.c") != std::string::npos);

  Result e = cli({"export-theories", path("cruise.syn"), "-o", dir.string()});
  REQUIRE(e.code == 0);
  CHECK(slurp(dir / "Cruise" / "theories.txt").starts_with("theory Cruise"));
}

TEST_CASE("verify") {
  auto obl = work_dir("cli_obl");
  Result x = cli({"verify", path("cruise.syn"), "--reqs", path("cruise.req"), "--glossary", path("cruise.gls"),
                  "--bound", "6", "--engine", "explicit", "--obl", obl.string()});
  CHECK(x.code == 0);
  CHECK(x.out == "r1\tHOLDS(6)\nr2\tHOLDS(6)\nr3\tHOLDS(6)\n");

  Result c = cli({"verify", path("cruise.syn"), "--reqs", path("cruise.req"), "--glossary", path("cruise.gls"),
                  "--bound", "6", "--obl", obl.string()});
  CHECK(c.code == 0);
  CHECK(c.out.find("r1\tHOLDS(6)\tHOLDS(6)\tAGREE") != std::string::npos);

  auto gls = obl / "bad.gls";
  std::ofstream(gls) << "\"system is on\" := @Controller.On\n";
  Result b = cli({"verify", path("cruise.syn"), "--reqs", path("cruise.req"), "--glossary", gls.string(), "--bound",
                  "2", "--obl", obl.string()});
  CHECK(b.code == 1);
  CHECK(b.err.find("UnknownPhrase") != std::string::npos);
}
