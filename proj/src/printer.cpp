#include "syn/printer.hpp"

namespace syn {

namespace {

bool compound(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
    case Expr::Kind::Unary:
    case Expr::Kind::If:
    case Expr::Kind::Match:
      return true;
    case Expr::Kind::IntLit:
      return e.number < 0;
    default:
      return false;
  }
}

void expr(std::string& o, const Expr& e);

void child(std::string& o, const Expr& e) {
  if (compound(e)) {
    o += '(';
    expr(o, e);
    o += ')';
  } else {
    expr(o, e);
  }
}

void expr(std::string& o, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: o += std::to_string(e.number); break;
    case Expr::Kind::BoolLit: o += e.number ? "true" : "false"; break;
    case Expr::Kind::Name: o += e.name; break;
    case Expr::Kind::Call:
      o += e.name;
      o += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) o += ", ";
        expr(o, *e.args[i]);
      }
      o += ')';
      break;
    case Expr::Kind::Record:
      o += e.name;
      o += " { ";
      for (std::size_t i = 0; i < e.inits.size(); ++i) {
        if (i) o += ", ";
        o += e.inits[i].name + " = ";
        expr(o, *e.inits[i].value);
      }
      o += " }";
      break;
    case Expr::Kind::Field:
      child(o, *e.args[0]);
      o += '.';
      o += e.name;
      break;
    case Expr::Kind::Match:
      o += "match (";
      expr(o, *e.args[0]);
      o += ") { ";
      for (std::size_t i = 0; i < e.arms.size(); ++i) {
        const auto& a = e.arms[i];
        if (i) o += ", ";
        if (a.ctor.empty()) {
          o += '_';
        } else {
          o += a.ctor;
          if (!a.binds.empty()) {
            o += '(';
            for (std::size_t j = 0; j < a.binds.size(); ++j) o += (j ? ", " : "") + a.binds[j];
            o += ')';
          }
        }
        o += " => ";
        expr(o, *a.body);
      }
      o += " }";
      break;
    case Expr::Kind::If:
      o += "if ";
      expr(o, *e.args[0]);
      o += " then ";
      expr(o, *e.args[1]);
      o += " else ";
      expr(o, *e.args[2]);
      break;
    case Expr::Kind::Unary:
      if (e.unop == UnaryOp::Not) {
        o += "not ";
        child(o, *e.args[0]);
      } else {
        // Always parenthesized: `-5` would read back as a literal.
        o += "-(";
        expr(o, *e.args[0]);
        o += ')';
      }
      break;
    case Expr::Kind::Binary:
      child(o, *e.args[0]);
      o += ' ';
      o += to_string(e.binop);
      o += ' ';
      child(o, *e.args[1]);
      break;
    case Expr::Kind::PortPresent:
      o += e.name;
      o += '?';
      break;
    case Expr::Kind::PortValue: o += e.name; break;
    case Expr::Kind::StateIs:
    case Expr::Kind::StateVar:
      o += '@';
      o += e.name;
      o += '.';
      o += e.member;
      break;
  }
}

void patterns(std::string& o, const std::vector<Pattern>& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    if (i) o += ", ";
    o += p.port;
    switch (p.kind) {
      case Pattern::Kind::Present: o += '?'; break;
      case Pattern::Kind::Absent: o += " = -"; break;
      case Pattern::Kind::Literal:
        o += " = ";
        expr(o, *p.literal);
        break;
      case Pattern::Kind::Bind: o += "?" + p.var; break;
    }
  }
}

void actions(std::string& o, const std::vector<OutputAction>& outs, const std::vector<Assignment>& ups) {
  bool first = true;
  for (const auto& a : outs) {
    o += first ? "" : ", ";
    first = false;
    o += a.port + " = ";
    if (a.value)
      expr(o, *a.value);
    else
      o += '-';
  }
  for (const auto& u : ups) {
    o += first ? "" : ", ";
    first = false;
    o += u.var + " := ";
    expr(o, *u.value);
  }
}

std::string port_ref(const PortRef& r) { return r.component.empty() ? r.port : r.component + "." + r.port; }

void component(std::string& o, const ComponentSpec& c, const std::string& ind) {
  const std::string in = ind + "  ";
  o += c.name + " {\n";
  for (const auto& p : c.ports) {
    o += in + (p.direction == Direction::In ? "in " : "out ") + p.name + ": " + print_type_ref(p.type) + " init ";
    expr(o, *p.initial);
    o += '\n';
  }
  o += in + "causality " + to_string(c.causality) + "\n";
  if (const auto* a = c.automaton()) {
    o += in + "automaton {\n";
    o += in + "  states ";
    for (std::size_t i = 0; i < a->states.size(); ++i) {
      if (i) o += ", ";
      o += a->states[i].name;
      if (i == a->initial) o += " init";
    }
    o += '\n';
    for (const auto& v : a->vars) {
      o += in + "  var " + v.name + ": " + print_type_ref(v.type) + " init ";
      expr(o, *v.init);
      o += '\n';
    }
    for (const auto& t : a->transitions) {
      o += in + "  transition ";
      if (!t.name.empty()) o += t.name + ": ";
      o += t.source + " -> " + t.target;
      if (!t.inputs.empty()) {
        o += " when ";
        patterns(o, t.inputs);
      }
      if (t.guard) {
        o += " with ";
        expr(o, *t.guard);
      }
      if (!t.outputs.empty() || !t.updates.empty()) {
        o += " then ";
        actions(o, t.outputs, t.updates);
      }
      o += '\n';
    }
    o += in + "}\n";
  } else if (const auto* tab = c.table()) {
    o += in + "table {\n";
    for (const auto& r : tab->rows) {
      o += in + "  when";
      if (!r.inputs.empty()) {
        o += ' ';
        patterns(o, r.inputs);
      }
      if (r.guard) {
        o += " with ";
        expr(o, *r.guard);
      }
      o += " then";
      if (!r.outputs.empty()) {
        o += ' ';
        actions(o, r.outputs, {});
      }
      o += '\n';
    }
    o += in + "}\n";
  } else if (const auto* comp = c.composite()) {
    for (const auto& s : comp->subs) {
      o += in + "sub ";
      component(o, s, in);
    }
    for (const auto& ch : comp->channels) o += in + "channel " + port_ref(ch.from) + " -> " + port_ref(ch.to) + "\n";
    for (const auto& d : comp->delegations) o += in + "delegate " + port_ref(d.from) + " -> " + port_ref(d.to) + "\n";
  }
  o += ind + "}\n";
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::string o;
  expr(o, e);
  return o;
}

std::string print_type_ref(const TypeRef& t) {
  switch (t.kind) {
    case TypeRef::Kind::Bool: return "Bool";
    case TypeRef::Kind::Named: return t.name;
    case TypeRef::Kind::Int:
      if (t.lo == kIntMin && t.hi == kIntMax) return "Int";
      return "int[" + std::to_string(t.lo) + ", " + std::to_string(t.hi) + "]";
  }
  return "?";
}

std::string pretty_print(const Model& m) {
  std::string o = "model " + m.name + " {\n";
  for (const auto& t : m.types) {
    o += "  type " + t.name + " = ";
    switch (t.kind) {
      case TypeDef::Kind::Bool: o += "Bool"; break;
      case TypeDef::Kind::BoundedInt: o += "int[" + std::to_string(t.lo) + ", " + std::to_string(t.hi) + "]"; break;
      case TypeDef::Kind::Enum:
        o += "enum { ";
        for (std::size_t i = 0; i < t.literals.size(); ++i) o += (i ? ", " : "") + t.literals[i];
        o += " }";
        break;
      case TypeDef::Kind::Variant:
        o += "variant { ";
        for (std::size_t i = 0; i < t.ctors.size(); ++i) {
          const auto& c = t.ctors[i];
          o += (i ? ", " : "") + c.name;
          if (!c.payload.empty()) {
            o += '(';
            for (std::size_t j = 0; j < c.payload.size(); ++j) o += (j ? ", " : "") + print_type_ref(c.payload[j]);
            o += ')';
          }
        }
        o += " }";
        break;
      case TypeDef::Kind::Record:
        o += "record { ";
        for (std::size_t i = 0; i < t.fields.size(); ++i)
          o += (i ? ", " : "") + t.fields[i].name + ": " + print_type_ref(t.fields[i].type);
        o += " }";
        break;
    }
    o += '\n';
  }
  for (const auto& f : m.funcs) {
    o += "  func " + f.name + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i)
      o += (i ? ", " : "") + f.params[i].name + ": " + print_type_ref(f.params[i].type);
    o += "): " + print_type_ref(f.result) + " = ";
    expr(o, *f.body);
    o += '\n';
  }
  o += "  component ";
  component(o, m.root, "  ");
  o += "}\n";
  return o;
}

}  // namespace syn
