#include "syn/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "syn/bmc.hpp"
#include "syn/checks.hpp"
#include "syn/codegen.hpp"
#include "syn/glossary.hpp"
#include "syn/parser.hpp"
#include "syn/requirements.hpp"
#include "syn/simulator.hpp"
#include "syn/smt.hpp"
#include "syn/stimulus.hpp"
#include "syn/verify.hpp"

namespace syn {

namespace {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

struct Config {
  std::string model;
  std::string stimulus, reqs, glossary, outdir, solver, obl = "obl";
  std::size_t ticks = 0, bound = 0;
  std::uint64_t seed = 0;
  std::string policy = "first", engine = "cross";
};

// A loaded model that passed the static checks, or the exit code to return.
struct Loaded {
  Model model;
  int status = 0;
};

Loaded load_checked(const std::string& path, std::ostream& err) {
  Loaded l;
  try {
    l.model = parse_model(read_file(path));
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) err << path << ": " << d.format() << "\n";
    l.status = 1;
    return l;
  }
  CheckReport r = check_model(l.model);
  err << r.render();
  if (!r.passes()) l.status = 1;
  return l;
}

int cmd_check(const Config& c, std::ostream&, std::ostream& err) { return load_checked(c.model, err).status; }

int cmd_simulate(const Config& c, std::ostream& out, std::ostream& err) {
  Loaded l = load_checked(c.model, err);
  if (l.status) return l.status;
  System sys(l.model);
  Stimulus stim;
  try {
    stim = parse_stimulus(read_file(c.stimulus), l.model, sys.types());
  } catch (const StimulusError& e) {
    err << c.stimulus << ":" << e.what() << "\n";
    return 1;
  }
  FirstChooser first;
  RandomChooser random(c.seed);
  Chooser& chooser = c.policy == "random" ? static_cast<Chooser&>(random) : first;
  Trace t = run(sys, stim, chooser, c.ticks);
  out << render_trace(t, sys);
  if (t.error) {
    err << "runtime error at tick " << t.error->tick << " in " << t.error->path << ": " << t.error->message << "\n";
    return 1;
  }
  return 0;
}

int cmd_generate(const Config& c, std::ostream& out, std::ostream& err) {
  Loaded l = load_checked(c.model, err);
  if (l.status) return l.status;
  System sys(l.model);
  CheckReport notes;
  std::vector<GeneratedUnit> units;
  try {
    units = generate_all(sys, &notes);
  } catch (const CodegenError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << notes.render();
  CheckReport lint = lint_subset(units);
  err << lint.render();
  if (!lint.passes()) return 1;
  const fs::path dir = fs::path(c.outdir) / l.model.name;
  for (const auto& u : units) {
    write_file(dir / u.fileName, u.contents);
    out << (dir / u.fileName).string() << "\n";
  }
  return 0;
}

void write_cex(const fs::path& path, const Verdict& v, const System& sys, std::ostream& err) {
  if (v.kind != Verdict::Kind::Counterexample) return;
  write_file(path, render_stimulus(v.stimulus, sys.model(), sys.types()));
  err << "counterexample stimulus: " << path.string() << " (violation at tick " << v.violationTick << ")\n";
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream& err) {
  Loaded l = load_checked(c.model, err);
  if (l.status) return l.status;
  System sys(l.model);
  std::vector<TemporalFormula> formulas;
  try {
    auto reqs = parse_requirements(read_file(c.reqs));
    auto gloss = parse_glossary_entries(read_file(c.glossary));
    BoundRequirements bound = bind_glossary(l.model, gloss, reqs);
    for (const auto& r : bound.reqs) formulas.push_back(requirement_to_formula(bound, r));
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) err << d.format() << "\n";
    return 1;
  } catch (const BindError& e) {
    for (const auto& d : e.diagnostics())
      err << "Error " << d.code << " " << d.reqId << " \"" << d.phrase << "\": " << d.message << "\n";
    return 1;
  }

  const fs::path obl = fs::path(c.obl) / l.model.name;
  SmtOptions smt{c.solver.empty() ? default_solver() : c.solver, {}};
  auto script = [&](const TemporalFormula& f) {
    return (obl / (f.id + "_k" + std::to_string(c.bound) + ".smt2")).string();
  };

  if (c.engine == "cross") {
    smt.script_path = obl.string();
    CrossReport rep = cross_check(sys, formulas, c.bound, smt);
    out << rep.render();
    for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
    for (const auto& row : rep.rows) {
      write_cex(obl / (row.reqId + "_explicit.stim"), row.explicitVerdict, sys, err);
      write_cex(obl / (row.reqId + "_smt.stim"), row.smtVerdict, sys, err);
      for (const Verdict* v : {&row.explicitVerdict, &row.smtVerdict})
        if (v->kind == Verdict::Kind::EngineError) err << row.reqId << ": " << v->diagnostic << "\n";
    }
    return rep.all_agree() ? 0 : 1;
  }

  bool all_hold = true;
  for (const auto& f : formulas) {
    Verdict v;
    if (c.engine == "smt") {
      smt.script_path = script(f);
      v = bmc_smt(sys, f, c.bound, smt);
    } else {
      v = bmc_explicit(sys, f, c.bound);
    }
    out << f.id << "\t" << v.label() << "\n";
    if (!v.diagnostic.empty()) err << f.id << ": " << v.diagnostic << "\n";
    write_cex(obl / (f.id + "_" + c.engine + ".stim"), v, sys, err);
    all_hold = all_hold && v.holds();
  }
  return all_hold ? 0 : 1;
}

int cmd_export(const Config& c, std::ostream& out, std::ostream& err) {
  Loaded l = load_checked(c.model, err);
  if (l.status) return l.status;
  System sys(l.model);
  const fs::path path = fs::path(c.outdir) / l.model.name / "theories.txt";
  write_file(path, export_theories(sys));
  out << path.string() << "\n";
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synchronous component models: checks, simulation, C generation and bounded verification", "syn"};
  app.require_subcommand(1);
  Config c;

  auto model_arg = [&](CLI::App* s) { s->add_option("model", c.model, "Model file (.syn)")->required(); };

  auto* check = app.add_subcommand("check", "Run the static checks");
  model_arg(check);

  auto* simulate = app.add_subcommand("simulate", "Simulate a stimulus and print the trace");
  model_arg(simulate);
  simulate->add_option("--stimulus", c.stimulus, "Stimulus file")->required();
  simulate->add_option("--ticks", c.ticks, "Number of ticks")->required();
  simulate->add_option("--policy", c.policy, "Choice between enabled transitions")
      ->check(CLI::IsMember({"first", "random"}));
  simulate->add_option("--seed", c.seed, "Seed for the random policy");

  auto* generate = app.add_subcommand("generate", "Emit C units and a harness into DIR/<model>");
  model_arg(generate);
  generate->add_option("-o", c.outdir, "Output directory")->required();

  auto* verify = app.add_subcommand("verify", "Bounded verification of requirements");
  model_arg(verify);
  verify->add_option("--reqs", c.reqs, "Requirements file")->required();
  verify->add_option("--glossary", c.glossary, "Glossary file")->required();
  verify->add_option("--bound", c.bound, "Unrolling bound")->required();
  verify->add_option("--engine", c.engine, "explicit, smt or cross")
      ->check(CLI::IsMember({"explicit", "smt", "cross"}));
  verify->add_option("--solver", c.solver, "SMT solver command (default: $SYN_SOLVER, else z3)");
  verify->add_option("--obl", c.obl, "Directory for solver scripts and counterexamples");

  auto* exp = app.add_subcommand("export-theories", "Write the theory document to DIR/<model>/theories.txt");
  model_arg(exp);
  exp->add_option("-o", c.outdir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  }

  try {
    if (check->parsed()) return cmd_check(c, out, err);
    if (simulate->parsed()) return cmd_simulate(c, out, err);
    if (generate->parsed()) return cmd_generate(c, out, err);
    if (verify->parsed()) return cmd_verify(c, out, err);
    return cmd_export(c, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace syn
