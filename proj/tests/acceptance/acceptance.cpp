// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

#include "random_model.hpp"
#include "syn/bmc.hpp"
#include "syn/checks.hpp"
#include "syn/cli.hpp"
#include "syn/codegen.hpp"
#include "syn/flat.hpp"
#include "syn/formula.hpp"
#include "syn/glossary.hpp"
#include "syn/parser.hpp"
#include "syn/printer.hpp"
#include "syn/requirements.hpp"
#include "syn/smt.hpp"
#include "syn/stimulus.hpp"
#include "syn/verify.hpp"

using namespace syn;
using namespace syn::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path corpus(const char* name) { return fs::path(SYN_SOURCE_DIR) / "corpus" / name; }

fs::path work(const std::string& name) {
  fs::path d = fs::path(SYN_WORK_DIR) / "acceptance" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s) {
  std::ostringstream o;
  o.precision(2);
  o << std::fixed << s << "s";
  return o.str();
}

struct Cli {
  int code;
  std::string out, err;
};

Cli cli(std::vector<std::string> args) {
  args.insert(args.begin(), "syn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int sh(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kStrict = " -std=c99 -pedantic -Wall -Wextra -Werror -Wshadow -Wconversion -O2";

// Writes the units and compiles them; returns the compiler status.
int compile(const std::vector<GeneratedUnit>& units, const fs::path& dir, const fs::path& bin) {
  std::string srcs;
  for (const auto& u : units) {
    std::ofstream(dir / u.fileName) << u.contents;
    if (u.fileName.ends_with(".c")) srcs += " " + (dir / u.fileName).string();
  }
  return sh(std::string(SYN_CC) + kStrict + srcs + " -o " + bin.string() + " 2> " + (dir / "cc.log").string());
}

int depth(const ComponentSpec& c) {
  int d = 0;
  if (auto* comp = c.composite())
    for (const auto& s : comp->subs) d = std::max(d, depth(s) + 1);
  return d;
}

// Requirement file holding only r1, so the bound-20 run covers exactly
// the sample property.
fs::path r1_only(const fs::path& dir) {
  auto reqs = slurp(corpus("cruise.req"));
  fs::path p = dir / "r1.req";
  std::ofstream(p) << reqs.substr(0, reqs.find("REQ r2"));
  return p;
}

std::string mutant_text() {
  std::string text = slurp(corpus("cruise.syn"));
  const std::string conj = "not lb and not pf";
  auto at = text.find(conj);
  if (at == std::string::npos) return {};
  return text.replace(at, conj.size(), "not pf");
}

// --- corpus ---------------------------------------------------------------

Outcome corpus_model() {
  auto t0 = Clock::now();
  Cli c = cli({"check", corpus("cruise.syn").string()});
  double took = since(t0);
  Model m = parse_model(slurp(corpus("cruise.syn")));
  System sys(m);
  std::size_t components = sys.flat().instances.size() - 1;
  bool parts = m.root.find_sub("Buttons") && m.root.find_sub("Plausibility") &&
               m.root.find_sub("Plausibility")->find_sub("BatteryMonitor") &&
               m.root.find_sub("Plausibility")->find_sub("PedalMonitor") && m.root.find_sub("Controller") &&
               m.root.find_sub("Controller")->automaton();
  return {c.code == 0 && depth(m.root) == 2 && components >= 6 && parts && took < 1.0,
          "exit " + std::to_string(c.code) + ", levels " + std::to_string(depth(m.root)) + ", components " +
              std::to_string(components) + ", " + secs(took)};
}

Outcome sample_property() {
  fs::path dir = work("sample");
  auto t0 = Clock::now();
  Cli c = cli({"verify", corpus("cruise.syn").string(), "--reqs", r1_only(dir).string(), "--glossary",
               corpus("cruise.gls").string(), "--bound", "20", "--engine", "cross", "--obl", (dir / "obl").string()});
  double took = since(t0);
  bool row = c.out == "r1\tHOLDS(20)\tHOLDS(20)\tAGREE\n";
  std::string shown = c.out;
  while (!shown.empty() && shown.back() == '\n') shown.pop_back();
  for (auto& ch : shown)
    if (ch == '\t') ch = ' ';
  return {c.code == 0 && row && took < 60.0, "[" + shown + "] exit " + std::to_string(c.code) + ", " + secs(took)};
}

Outcome mutation() {
  fs::path dir = work("mutation");
  std::string text = mutant_text();
  if (text.empty()) return {false, "switch-off conjunct not found in the corpus model"};
  fs::path model = dir / "mutant.syn";
  std::ofstream(model) << text;
  fs::path obl = dir / "obl";
  Cli c = cli({"verify", model.string(), "--reqs", r1_only(dir).string(), "--glossary", corpus("cruise.gls").string(),
               "--bound", "20", "--engine", "cross", "--obl", obl.string()});
  std::smatch mt;
  std::regex row(R"(r1\tCEX\((\d+)\)\tCEX\((\d+)\)\tAGREE)");
  if (!std::regex_search(c.out, mt, row)) return {false, "verify output: " + c.out + c.err};
  std::size_t ticks[2] = {std::stoul(mt[1]), std::stoul(mt[2])};
  const char* engines[2] = {"explicit", "smt"};

  Model m = parse_model(text);
  System sys(m);
  auto reqs = parse_requirements(slurp(r1_only(dir)));
  BoundRequirements b = bind_glossary(m, parse_glossary_entries(slurp(corpus("cruise.gls"))), reqs);
  TemporalFormula f = requirement_to_formula(b, b.reqs[0]);

  std::string detail = "CEX explicit@" + std::to_string(ticks[0]) + " smt@" + std::to_string(ticks[1]) + ", AGREE";
  bool ok = c.code == 0 && ticks[0] <= 20 && ticks[1] <= 20;
  for (int e = 0; e < 2; ++e) {
    fs::path stim = obl / m.name / (std::string("r1_") + engines[e] + ".stim");
    if (!fs::exists(stim)) return {false, "missing " + stim.string()};
    std::size_t n = ticks[e] + 1;
    Cli sim = cli({"simulate", model.string(), "--stimulus", stim.string(), "--ticks", std::to_string(n)});
    Stimulus s = parse_stimulus(slurp(stim), m, sys.types());
    FirstChooser first;
    auto v = first_violation(f, sys, s, first, n);
    // The violating row of the replayed trace shows no throttle command.
    std::string last = sim.out.substr(sim.out.rfind('\n', sim.out.size() - 2) + 1);
    bool shown = last.starts_with(std::to_string(ticks[e]) + ";") && last.find(";throttle=-;") != std::string::npos;
    bool replay = sim.code == 0 && v && *v == ticks[e] && shown;
    ok = ok && replay;
    detail += std::string(", ") + engines[e] + " replay " + (replay ? "violates at " + std::to_string(*v) : "no");
  }
  return {ok, detail};
}

// --- code equivalence -----------------------------------------------------

Outcome differential() {
  auto t0 = Clock::now();
  fs::path dir = work("differential");
  Model m = parse_model(slurp(corpus("cruise.syn")));
  System sys(m);
  fs::path bin = dir / "harness";
  if (compile(generate_all(sys), dir, bin) != 0) return {false, "compile failed: " + slurp(dir / "cc.log")};
  const int cases = 1000;
  const std::size_t ticks = 100;
  int same = 0;
  std::string first_diff;
  for (int i = 0; i < cases; ++i) {
    std::mt19937_64 rng(0xC0FFEE + i);
    Stimulus s = random_stimulus(sys, rng, ticks);
    fs::path stim = dir / "s.stim", got = dir / "got.txt";
    std::ofstream(stim) << render_stimulus(s, m, sys.types());
    sh(bin.string() + " " + stim.string() + " " + std::to_string(ticks) + " > " + got.string());
    FirstChooser first;
    if (slurp(got) == render_trace(run(sys, s, first, ticks), sys))
      ++same;
    else if (first_diff.empty())
      first_diff = " (first mismatch: case " + std::to_string(i) + ")";
  }
  double took = since(t0);
  return {same == cases && took < 300.0,
          std::to_string(same) + "/" + std::to_string(cases) + " identical" + first_diff + ", " + secs(took)};
}

Outcome subset_lint() {
  fs::path dir = work("lint");
  Model m = parse_model(slurp(corpus("cruise.syn")));
  System sys(m);
  auto units = generate_all(sys);
  CheckReport clean = lint_subset(units);
  bool compiled = compile(units, dir, dir / "harness") == 0;

  const char* fixtures[] = {
      "void f(void)\n{\n  int32_t *p = malloc(4);\n  (void)p;\n}\n",
      "static int32_t g(int32_t n)\n{\n  if (n == 0) {\n    return 0;\n  }\n  return g(n - 1);\n}\n",
      "void f(void)\n{\n  int32_t i = 0;\n  while (i < 3) {\n    i++;\n  }\n}\n",
      "void f(int32_t *p)\n{\n  p = p + 1;\n  (void)p;\n}\n",
      "void f(void)\n{\n  printf(\"%d\", 1);\n}\n",
      "void f(void)\n{\n  int32_t i;\n  for (i = 0; i < 3; i++) {\n    i = 7;\n  }\n}\n",
      "void f(void)\n{\n  int32_t x;\n  int32_t y = (int32_t)(&x + 1 != 0);\n  (void)y;\n}\n",
  };
  int exact = 0, total = 0;
  for (const char* fx : fixtures) {
    ++total;
    auto injected = units;
    injected[1].contents += fx;
    CheckReport r = lint_subset(injected);
    if (r.findings.size() == 1 && r.findings[0].severity == Severity::Error) ++exact;
  }
  return {clean.findings.empty() && compiled && exact == total,
          std::to_string(clean.findings.size()) + " findings on generated units, strict compile " +
              (compiled ? "ok" : "failed") + ", fixtures with exactly one Error " + std::to_string(exact) + "/" +
              std::to_string(total)};
}

Outcome causality_gate() {
  Cli bad = cli({"check", corpus("weak_cycle.syn").string()});
  Cli good = cli({"check", corpus("weak_cycle_fixed.syn").string()});
  Model a = parse_model(slurp(corpus("weak_cycle.syn")));
  Model b = parse_model(slurp(corpus("weak_cycle_fixed.syn")));
  FlatModel fa = flatten(a), fb = flatten(b);
  auto strong = [](const FlatModel& f) {
    int n = 0;
    for (int i : f.atomics) n += f.instances[i].spec->causality == Causality::Strong;
    return n;
  };
  bool one_more = fb.atomics.size() == fa.atomics.size() + 1 && strong(fb) == strong(fa) + 1;
  bool rejected = bad.code == 1 && bad.err.find("WeaklyCausalCycle") != std::string::npos;
  return {rejected && good.code == 0 && one_more,
          std::string("weak cycle ") + (rejected ? "rejected with WeaklyCausalCycle" : "not rejected") +
              ", with one strong component inserted exit " + std::to_string(good.code)};
}

// --- semantic properties --------------------------------------------------

struct Suite {
  int cases = 0;
  int failures = 0;
  std::string note;
};

// Outputs of one atomic fed a stream; stops at the first runtime error.
std::vector<std::vector<Message>> drive(const System& sys, std::size_t a,
                                        const std::vector<std::vector<Message>>& inputs) {
  std::vector<std::vector<Message>> outs;
  FirstChooser first;
  AtomicState st = sys.init_atomic(a);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    try {
      AtomicStep s = sys.step_atomic(a, st, inputs[t], first, t);
      outs.push_back(s.outputs);
      st = s.next;
    } catch (const StepError&) {
      break;
    }
  }
  return outs;
}

std::vector<Message> random_inputs(const System& sys, std::size_t a, std::mt19937_64& rng) {
  const Instance& inst = sys.atom_instance(a);
  int ii = sys.flat().atomics[a];
  std::vector<Message> in(inst.spec->ports.size());
  for (std::size_t p = 0; p < in.size(); ++p)
    if (inst.spec->ports[p].direction == Direction::In)
      in[p] = random_message(sys.port_type(ii, p), sys.types(), rng, 0.3);
  return in;
}

Suite strong_prefix() {
  Suite s;
  for (std::uint64_t seed = 0; s.cases < 200 && seed < 5000; ++seed) {
    Model m = parse_model(random_model_text(seed));
    System sys(m);
    std::mt19937_64 rng(seed);
    for (std::size_t a = 0; a < sys.atom_count(); ++a) {
      if (sys.atom_instance(a).spec->causality != Causality::Strong) continue;
      const std::size_t len = 12;
      std::size_t cut = rng() % len;
      std::vector<std::vector<Message>> x, y;
      for (std::size_t t = 0; t < len; ++t) {
        x.push_back(random_inputs(sys, a, rng));
        y.push_back(t < cut ? x.back() : random_inputs(sys, a, rng));
      }
      auto ox = drive(sys, a, x), oy = drive(sys, a, y);
      if (ox.size() <= cut || oy.size() <= cut) continue;
      ++s.cases;
      for (std::size_t t = 0; t <= cut; ++t)
        if (ox[t] != oy[t]) {
          ++s.failures;
          break;
        }
    }
  }
  return s;
}

Suite seeded_determinism() {
  Suite s;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ModelShape shape;
    shape.rich = seed % 2;
    shape.nested = seed % 4 == 1;
    Model m = parse_model(random_model_text(seed, shape));
    System sys(m);
    std::mt19937_64 rng(seed);
    Stimulus st = random_stimulus(sys, rng, 40);
    std::uint64_t policy_seed = rng();
    RandomChooser a(policy_seed), b(policy_seed);
    ++s.cases;
    if (render_trace(run(sys, st, a, 40), sys) != render_trace(run(sys, st, b, 40), sys)) ++s.failures;
  }
  return s;
}

Suite stutter() {
  Suite s;
  for (std::uint64_t seed = 0; s.cases < 200 && seed < 20000; ++seed) {
    Model m = parse_model(random_model_text(seed));
    System sys(m);
    std::mt19937_64 rng(seed);
    Stimulus st = random_stimulus(sys, rng, rng() % 8);
    FirstChooser first;
    SystemState state = sys.init_state();
    bool failed = false;
    for (std::size_t t = 0; t < st.rows.size() && !failed; ++t) {
      try {
        state = sys.step_system(state, st.rows[t], first, t).next;
      } catch (const StepError&) {
        failed = true;
      }
    }
    if (failed) continue;
    std::vector<Message> idle(sys.input_count());
    TickResult r1, r2;
    try {
      r1 = sys.step_system(state, idle, first, st.rows.size());
      r2 = sys.step_system(r1.next, idle, first, st.rows.size() + 1);
    } catch (const StepError&) {
      continue;
    }
    bool none = std::all_of(r1.fired.begin(), r1.fired.end(), [](int f) { return f < 0; }) &&
                std::all_of(r2.fired.begin(), r2.fired.end(), [](int f) { return f < 0; });
    if (!none) continue;
    ++s.cases;
    bool kept = r2.next == r1.next;
    for (std::size_t a = 0; a < sys.atom_count(); ++a) {
      const AtomicState &before = state.atoms[a], &after = r1.next.atoms[a];
      kept = kept && before.control == after.control && before.vars == after.vars;
      if (sys.atom_instance(a).spec->causality == Causality::Weak) kept = kept && before == after;
    }
    if (!kept) ++s.failures;
  }
  return s;
}

Suite table_equivalence() {
  Suite s;
  for (std::uint64_t seed = 0; s.cases < 200; ++seed) {
    Model m = parse_model(random_table_model_text(seed));
    System sys(m);
    const ComponentSpec& c = m.root;
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 5; ++k) {
      std::vector<Message> in = random_inputs(sys, 0, rng);
      std::optional<std::vector<Message>> direct, derived;
      try {
        direct = eval_table(c, *c.table(), in, sys.types());
      } catch (const EvalError&) {
      }
      FirstChooser first;
      AtomicState init = sys.init_atomic(0);
      try {
        AtomicStep st = sys.step_atomic(0, init, in, first, 0);
        derived = st.outputs;
        if (!(st.next == init)) derived.reset();
      } catch (const StepError&) {
      }
      ++s.cases;
      if (direct != derived) ++s.failures;
    }
  }
  return s;
}

Suite print_fixpoint() {
  Suite s;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ModelShape shape;
    shape.rich = seed % 2;
    shape.nested = seed % 3 == 0;
    Model m = parse_model(random_model_text(seed + 77, shape));
    std::string p1 = pretty_print(m);
    ++s.cases;
    try {
      Model again = parse_model(p1);
      if (!(again == m) || pretty_print(again) != p1) ++s.failures;
    } catch (const ParseError&) {
      ++s.failures;
    }
  }
  return s;
}

Outcome properties() {
  auto t0 = Clock::now();
  std::pair<const char*, std::function<Suite()>> suites[] = {
      {"strong-causality prefix", strong_prefix},
      {"seeded determinism", seeded_determinism},
      {"stutter preservation", stutter},
      {"table/automaton equivalence", table_equivalence},
      {"parse/print fixpoint", print_fixpoint},
  };
  bool ok = true;
  std::string detail;
  for (auto& [name, fn] : suites) {
    auto t1 = Clock::now();
    Suite r = fn();
    bool pass = r.cases >= 200 && r.failures == 0;
    ok = ok && pass;
    std::cout << "  " << (pass ? "pass" : "FAIL") << " " << name << ": " << r.cases - r.failures << "/" << r.cases
              << " cases, " << secs(since(t1)) << "\n";
  }
  double took = since(t0);
  detail = "five suites, " + secs(took);
  return {ok && took < 120.0, detail};
}

// --- engine fuzz ----------------------------------------------------------

Outcome engine_fuzz() {
  auto t0 = Clock::now();
  SmtOptions smt{default_solver(), ""};
  if (smt.solver.empty()) return {false, "no SMT solver found"};
  int agree = 0, total = 0, cex = 0;
  std::string first_bad;
  for (int i = 0; i < 100; ++i) {
    Model m = parse_model(random_model_text(1000 + i));
    System sys(m);
    std::mt19937_64 rng(i);
    std::vector<TemporalFormula> fs;
    for (int k = 0; k < 3; ++k) fs.push_back(random_formula(sys, rng, "f" + std::to_string(k)));
    CrossReport rep = cross_check(sys, fs, 8, smt);
    for (const auto& row : rep.rows) {
      ++total;
      if (row.agree)
        ++agree;
      else if (first_bad.empty())
        first_bad = ", first disagreement: model " + std::to_string(i) + " " + row.reqId + " " +
                    row.explicitVerdict.label() + " vs " + row.smtVerdict.label();
      cex += row.explicitVerdict.kind == Verdict::Kind::Counterexample;
    }
  }
  return {agree == 300 && total == 300,
          std::to_string(agree) + "/" + std::to_string(total) + " agree (" + std::to_string(cex) +
              " counterexamples)" + first_bad + ", " + secs(since(t0))};
}

}  // namespace

int main() {
  std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"corpus model checks (2 levels, >= 6 components, < 1 s)", corpus_model},
      {"sample property r1 cross-checked at bound 20", sample_property},
      {"mutation sensitivity (switch-off conjunct removed)", mutation},
      {"differential code equivalence (1000 stimuli x 100 ticks)", differential},
      {"subset lint", subset_lint},
      {"causality gate", causality_gate},
      {"semantics property suites", properties},
      {"engine agreement fuzz (100 models x 3 formulas, bound 8)", engine_fuzz},
  };
  int failed = 0;
  for (auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
