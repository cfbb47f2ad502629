#include "syn/formula.hpp"

#include <map>

#include "syn/printer.hpp"

namespace syn {

Prop Prop::conj(std::vector<Prop> ps) {
  if (ps.empty()) return truth();
  if (ps.size() == 1) return std::move(ps.front());
  return {Kind::And, -1, std::move(ps)};
}

Prop Prop::disj(std::vector<Prop> ps) {
  if (ps.size() == 1) return std::move(ps.front());
  return {Kind::Or, -1, std::move(ps)};
}

namespace {

Prop conj_of(const std::vector<int>& atoms, std::vector<Prop> extra = {}) {
  std::vector<Prop> ps;
  for (int a : atoms) ps.push_back(Prop::atom_of(a));
  for (auto& e : extra) ps.push_back(std::move(e));
  return Prop::conj(std::move(ps));
}

void render(std::string& o, const Prop& p, const TemporalFormula& f) {
  switch (p.kind) {
    case Prop::Kind::True: o += "true"; break;
    case Prop::Kind::Atom: o += "[" + f.atoms[static_cast<std::size_t>(p.atom)].phrase + "]"; break;
    case Prop::Kind::Not:
      o += "!";
      render(o, p.kids[0], f);
      break;
    case Prop::Kind::And:
    case Prop::Kind::Or:
      o += "(";
      for (std::size_t i = 0; i < p.kids.size(); ++i) {
        if (i) o += p.kind == Prop::Kind::And ? " & " : " | ";
        render(o, p.kids[i], f);
      }
      o += ")";
      break;
  }
}

}  // namespace

TemporalFormula requirement_to_formula(const BoundRequirements& b, const BoundRequirement& r) {
  TemporalFormula f;
  f.id = r.req.id;
  // Only the atoms this requirement uses, renumbered densely.
  std::map<int, int> local;
  auto use = [&](const std::vector<int>& in) {
    std::vector<int> out;
    for (int a : in) {
      auto [it, fresh] = local.emplace(a, static_cast<int>(f.atoms.size()));
      if (fresh) f.atoms.push_back(b.atoms[static_cast<std::size_t>(a)]);
      out.push_back(it->second);
    }
    return out;
  };
  auto w = use(r.when);
  auto i = use(r.cond);
  auto t = use(r.then);
  auto e = use(r.otherwise);
  f.clauses.push_back({conj_of(w, {conj_of(i)}), conj_of(t), r.req.timing == Timing::NextTick});
  if (r.req.elseResp)
    f.clauses.push_back({conj_of(w, {Prop::negate(conj_of(i))}), conj_of(e), r.req.elseTiming == Timing::NextTick});
  return f;
}

std::string render_formula(const TemporalFormula& f) {
  std::string o;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    if (i) o += " & ";
    o += "G(";
    render(o, f.clauses[i].antecedent, f);
    o += f.clauses[i].next ? " -> X " : " -> ";
    render(o, f.clauses[i].consequent, f);
    o += ")";
  }
  return o;
}

Message TickObserver::port(std::string_view name) const {
  const auto& root = sys_.model().root;
  for (std::size_t p = 0; p < root.ports.size(); ++p)
    if (root.ports[p].name == name) return ports_[p];
  throw EvalError(EvalErrorKind::UnboundVariable, "no root port " + std::string(name));
}

std::size_t TickObserver::atom_at(std::string_view path) const {
  int inst = sys_.flat().find(path);
  if (inst < 0 || !sys_.flat().instances[inst].atomic())
    throw EvalError(EvalErrorKind::UnboundVariable, "no atomic component " + std::string(path));
  return sys_.atom_of_instance(inst);
}

bool TickObserver::in_state(std::string_view path, std::string_view state) const {
  std::size_t a = atom_at(path);
  return sys_.behavior(a).states[pre_.atoms[a].control].name == state;
}

Value TickObserver::state_var(std::string_view path, std::string_view var) const {
  std::size_t a = atom_at(path);
  const auto& vars = sys_.behavior(a).vars;
  for (std::size_t v = 0; v < vars.size(); ++v)
    if (vars[v].name == var) return pre_.atoms[a].vars[v];
  throw EvalError(EvalErrorKind::UnboundVariable, "no state variable " + std::string(var));
}

std::vector<bool> eval_atoms(const TemporalFormula& f, const System& sys, const SystemState& pre,
                             const std::vector<Message>& root_ports) {
  TickObserver obs(sys, pre, root_ports);
  EvalContext ctx{sys.types(), &obs};
  std::vector<bool> out;
  out.reserve(f.atoms.size());
  for (const auto& a : f.atoms) {
    Env env;
    out.push_back(eval_expr(*a.expr, env, ctx).as_bool());
  }
  return out;
}

bool eval_prop(const Prop& p, const std::vector<bool>& atoms) {
  switch (p.kind) {
    case Prop::Kind::True: return true;
    case Prop::Kind::Atom: return atoms[static_cast<std::size_t>(p.atom)];
    case Prop::Kind::Not: return !eval_prop(p.kids[0], atoms);
    case Prop::Kind::And:
      for (const auto& k : p.kids)
        if (!eval_prop(k, atoms)) return false;
      return true;
    case Prop::Kind::Or:
      for (const auto& k : p.kids)
        if (eval_prop(k, atoms)) return true;
      return false;
  }
  return false;
}

std::optional<std::size_t> first_violation(const TemporalFormula& f, const System& sys, const Stimulus& stim,
                                           Chooser& chooser, std::size_t ticks) {
  SystemState st = sys.init_state();
  std::vector<bool> prev_ante(f.clauses.size(), false);
  for (std::size_t t = 0; t < ticks && t < stim.rows.size(); ++t) {
    std::vector<bool> atoms;
    TickResult r;
    try {
      r = sys.step_system(st, stim.rows[t], chooser, t);
      atoms = eval_atoms(f, sys, st, r.ports[0]);
    } catch (const StepError&) {
      return t;
    } catch (const EvalError&) {
      return t;
    }
    for (std::size_t c = 0; c < f.clauses.size(); ++c) {
      const auto& cl = f.clauses[c];
      bool ante = eval_prop(cl.antecedent, atoms);
      bool cons = eval_prop(cl.consequent, atoms);
      if (cl.next ? (prev_ante[c] && !cons) : (ante && !cons)) return t;
      prev_ante[c] = ante;
    }
    st = std::move(r.next);
  }
  return std::nullopt;
}

}  // namespace syn
