#include "syn/verify.hpp"

#include <functional>

#include "syn/printer.hpp"

namespace syn {

bool CrossReport::all_agree() const {
  for (const auto& r : rows)
    if (!r.agree) return false;
  return true;
}

std::string CrossReport::render() const {
  std::string s;
  for (const auto& r : rows)
    s += r.reqId + "\t" + r.explicitVerdict.label() + "\t" + r.smtVerdict.label() + "\t" +
         (r.agree ? "AGREE" : "DISAGREE") + "\n";
  return s;
}

CrossReport cross_check(const System& sys, const std::vector<TemporalFormula>& formulas, std::size_t bound,
                        const SmtOptions& smt, const ExplicitOptions& opt) {
  CrossReport rep;
  for (const auto& f : formulas) {
    CrossRow row;
    row.reqId = f.id;
    row.explicitVerdict = bmc_explicit(sys, f, bound, opt);
    SmtOptions o = smt;
    if (!o.script_path.empty()) o.script_path += "/" + f.id + "_k" + std::to_string(bound) + ".smt2";
    row.smtVerdict = bmc_smt(sys, f, bound, o);
    const auto& e = row.explicitVerdict;
    const auto& s = row.smtVerdict;
    row.agree = e.kind != Verdict::Kind::EngineError && s.kind != Verdict::Kind::EngineError && e.holds() == s.holds();
    if (e.holds() && e.vacuous)
      rep.warnings.push_back("Vacuity " + f.id + ": no antecedent holds within " + std::to_string(bound) + " ticks");
    for (const auto* v : {&e, &s})
      if (v->kind == Verdict::Kind::EngineError) rep.warnings.push_back("EngineError " + f.id + ": " + v->diagnostic);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

namespace {

std::string type_def_text(const TypeDef& d) {
  std::string s = "  type " + d.name + " = ";
  switch (d.kind) {
    case TypeDef::Kind::Bool: return s + "Bool\n";
    case TypeDef::Kind::BoundedInt: return s + "int[" + std::to_string(d.lo) + ", " + std::to_string(d.hi) + "]\n";
    case TypeDef::Kind::Enum:
      for (std::size_t i = 0; i < d.literals.size(); ++i) s += (i ? " | " : "") + d.literals[i];
      return s + "\n";
    case TypeDef::Kind::Variant:
      for (std::size_t i = 0; i < d.ctors.size(); ++i) {
        s += (i ? " | " : "") + d.ctors[i].name;
        if (!d.ctors[i].payload.empty()) {
          s += "(";
          for (std::size_t k = 0; k < d.ctors[i].payload.size(); ++k)
            s += (k ? ", " : "") + print_type_ref(d.ctors[i].payload[k]);
          s += ")";
        }
      }
      return s + "\n";
    case TypeDef::Kind::Record:
      s += "{";
      for (std::size_t i = 0; i < d.fields.size(); ++i)
        s += (i ? ", " : "") + d.fields[i].name + ": " + print_type_ref(d.fields[i].type);
      return s + "}\n";
  }
  return s + "\n";
}

std::string pattern_text(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Present: return "present(in." + p.port + ")";
    case Pattern::Kind::Absent: return "absent(in." + p.port + ")";
    case Pattern::Kind::Literal: return "in." + p.port + " = " + print_expr(*p.literal);
    case Pattern::Kind::Bind: return "present(in." + p.port + ") with " + p.var + " = in." + p.port;
  }
  return {};
}

std::string fn_name(const Instance& inst) { return "step_" + inst.path; }

std::string port_ref(const PortRef& r) { return r.component.empty() ? r.port : r.component + "." + r.port; }

void atomic_section(std::string& o, const System& sys, std::size_t a) {
  const Instance& inst = sys.atom_instance(a);
  const Automaton& au = sys.behavior(a);
  o += "section atomic " + inst.path + "\n";
  o += std::string("  causality ") + to_string(inst.spec->causality) + "\n";
  o += "  states";
  for (const auto& s : au.states) o += " " + s.name;
  o += "\n  initial " + au.states[au.initial].name + "\n";
  for (const auto& v : au.vars) o += "  var " + v.name + ": " + print_type_ref(v.type) + " = " + print_expr(*v.init) + "\n";
  for (const auto& p : inst.spec->ports) {
    o += (p.direction == Direction::In ? "  in " : "  out ") + p.name + ": " + print_type_ref(p.type);
    if (p.initial) o += " initially " + print_expr(*p.initial);
    o += "\n";
  }
  o += "  fun " + fn_name(inst) + "(state, vars, in) =\n";
  for (const auto& t : au.transitions) {
    o += "    case state = " + t.source;
    for (const auto& p : t.inputs) o += " and " + pattern_text(p);
    if (t.guard) o += " and " + print_expr(*t.guard);
    o += "\n      -> (" + t.target + ", {";
    for (std::size_t i = 0; i < t.updates.size(); ++i)
      o += (i ? ", " : "") + t.updates[i].var + " := " + print_expr(*t.updates[i].value);
    o += "}, {";
    bool first = true;
    for (const auto& out : t.outputs) {
      if (!out.value) continue;
      o += (first ? "" : ", ") + out.port + " = " + print_expr(*out.value);
      first = false;
    }
    o += "})\n";
  }
  o += "    otherwise -> (state, vars, {})\n";
  o += "end\n\n";
}

void composite_section(std::string& o, const FlatModel& flat, int ii) {
  const Instance& inst = flat.instances[ii];
  const Composite& c = *inst.spec->composite();
  o += "section composite " + inst.path + "\n";
  o += std::string("  causality ") + to_string(inst.spec->causality) + "\n";
  for (const auto& p : inst.spec->ports)
    o += (p.direction == Direction::In ? "  in " : "  out ") + p.name + ": " + print_type_ref(p.type) + "\n";
  o += "  fun " + fn_name(inst) + " = compose(";
  for (std::size_t i = 0; i < inst.children.size(); ++i)
    o += (i ? ", " : "") + fn_name(flat.instances[inst.children[i]]);
  o += ")\n";
  for (const auto& ch : c.channels) o += "  channel " + port_ref(ch.from) + " -> " + port_ref(ch.to) + "\n";
  for (const auto& d : c.delegations) o += "  delegate " + port_ref(d.from) + " -> " + port_ref(d.to) + "\n";
  o += "end\n\n";
}

}  // namespace

std::string export_theories(const System& sys) {
  const Model& m = sys.model();
  const FlatModel& flat = sys.flat();
  std::string o = "theory " + m.name + "\n\n";
  o += "section data\n";
  for (const auto& d : m.types) o += type_def_text(d);
  for (const auto& f : m.funcs) {
    o += "  fun " + f.name + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i)
      o += (i ? ", " : "") + f.params[i].name + ": " + print_type_ref(f.params[i].type);
    o += "): " + print_type_ref(f.result) + " =\n    " + print_expr(*f.body) + "\n";
  }
  o += "end\n\n";
  std::vector<int> post;
  std::function<void(int)> visit = [&](int i) {
    for (int c : flat.instances[i].children) visit(c);
    post.push_back(i);
  };
  visit(0);
  for (int i : post) {
    if (flat.instances[i].atomic())
      atomic_section(o, sys, sys.atom_of_instance(i));
    else
      composite_section(o, flat, i);
  }
  return o;
}

std::size_t theory_section_count(const std::string& doc) {
  std::size_t n = 0;
  for (std::size_t p = 0; (p = doc.find("section ", p)) != std::string::npos; ++p)
    if (p == 0 || doc[p - 1] == '\n') ++n;
  return n;
}

}  // namespace syn
