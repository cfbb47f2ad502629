#include "syn/checks.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "syn/eval.hpp"

namespace syn {

bool CheckReport::passes() const {
  return std::none_of(findings.begin(), findings.end(), [](const Finding& f) { return f.severity == Severity::Error; });
}

bool CheckReport::has(std::string_view code) const {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.code == code; });
}

void CheckReport::add(Severity s, std::string code, std::string path, SourcePos pos, std::string message) {
  findings.push_back({s, std::move(code), std::move(path), std::move(message), pos});
}

void CheckReport::merge(const CheckReport& other) {
  findings.insert(findings.end(), other.findings.begin(), other.findings.end());
}

std::string CheckReport::render() const {
  std::string out;
  for (const auto& f : findings) {
    out += f.severity == Severity::Error ? "Error " : "Warning ";
    out += f.code + " " + f.path + ":" + std::to_string(f.pos.line) + ":" + std::to_string(f.pos.col) + " " +
           f.message + "\n";
  }
  return out;
}

// --- expression typing ---------------------------------------------------

void ExprTyper::error(const std::string& code, const Expr& at, const std::string& msg) {
  report_.add(Severity::Error, code, path_, at.pos, msg);
}

std::optional<Type> ExprTyper::join(const std::optional<Type>& a, const std::optional<Type>& b, const Expr& at) {
  if (!a || !b) return std::nullopt;
  if (a->is_int() && b->is_int()) return Type::integer();
  if (same_type(*a, *b)) return a;
  error("TypeMismatch", at, "branches have types " + describe(*a) + " and " + describe(*b));
  return std::nullopt;
}

bool ExprTyper::expect(const Expr& e, Scope& scope, const Type& slot, const std::string& what) {
  auto t = type_of(e, scope);
  if (!t) return false;
  if (assignable(*t, slot)) return true;
  error("TypeMismatch", e, what + " expects " + describe(slot) + " but got " + describe(*t));
  return false;
}

std::optional<Type> ExprTyper::type_of(const Expr& e, Scope& scope) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return Type::integer();
    case Expr::Kind::BoolLit: return Type::boolean();
    case Expr::Kind::Name: {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == e.name) return it->second;
      if (const CtorInfo* ci = types_.find_ctor(e.name)) {
        if (ci->type->kind == TypeDef::Kind::Variant && !ci->type->ctors[ci->index].payload.empty()) {
          error("TypeMismatch", e, "constructor " + e.name + " needs arguments");
          return std::nullopt;
        }
        return types_.resolve(TypeRef::named(ci->type->name));
      }
      if (types_.find_func(e.name)) {
        error("TypeMismatch", e, "function " + e.name + " used as a value");
        return std::nullopt;
      }
      error("UnknownName", e, "unknown name " + e.name);
      return std::nullopt;
    }
    case Expr::Kind::Call: {
      if (const FuncDef* f = types_.find_func(e.name)) {
        bool ok = true;
        if (f->params.size() != e.args.size()) {
          error("TypeMismatch", e, e.name + " takes " + std::to_string(f->params.size()) + " arguments");
          ok = false;
        }
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          auto pt = i < f->params.size() ? types_.resolve(f->params[i].type) : std::nullopt;
          if (pt)
            ok = expect(*e.args[i], scope, *pt, "argument " + std::to_string(i + 1) + " of " + e.name) && ok;
          else
            ok = type_of(*e.args[i], scope).has_value() && ok;
        }
        auto rt = types_.resolve(f->result);
        return ok ? rt : std::nullopt;
      }
      if (const CtorInfo* ci = types_.find_ctor(e.name)) {
        const TypeDef& d = *ci->type;
        std::size_t arity = d.kind == TypeDef::Kind::Variant ? d.ctors[ci->index].payload.size() : 0;
        if (arity != e.args.size()) {
          error("TypeMismatch", e, "constructor " + e.name + " takes " + std::to_string(arity) + " arguments");
          return std::nullopt;
        }
        bool ok = true;
        for (std::size_t i = 0; i < arity; ++i)
          ok = expect(*e.args[i], scope, types_.payload_type(d, ci->index, i), "payload of " + e.name) && ok;
        if (!ok) return std::nullopt;
        return types_.resolve(TypeRef::named(d.name));
      }
      error("UnknownName", e, "unknown function " + e.name);
      return std::nullopt;
    }
    case Expr::Kind::Record: {
      const TypeDef* d = types_.find_type(e.name);
      if (!d) {
        error("UnknownName", e, "unknown type " + e.name);
        return std::nullopt;
      }
      if (d->kind != TypeDef::Kind::Record) {
        error("TypeMismatch", e, e.name + " is not a record type");
        return std::nullopt;
      }
      bool ok = true;
      std::set<std::string> seen;
      for (const auto& fi : e.inits) {
        std::size_t idx = d->fields.size();
        for (std::size_t i = 0; i < d->fields.size(); ++i)
          if (d->fields[i].name == fi.name) idx = i;
        if (idx == d->fields.size()) {
          error("UnknownName", *fi.value, e.name + " has no field " + fi.name);
          ok = false;
          continue;
        }
        if (!seen.insert(fi.name).second) {
          error("DuplicateDefinition", *fi.value, "field " + fi.name + " given twice");
          ok = false;
        }
        ok = expect(*fi.value, scope, types_.field_type(*d, idx), "field " + fi.name) && ok;
      }
      for (const auto& f : d->fields)
        if (!seen.count(f.name) && ok) {
          error("TypeMismatch", e, "missing field " + f.name + " of " + e.name);
          ok = false;
        }
      if (!ok) return std::nullopt;
      return types_.resolve(TypeRef::named(d->name));
    }
    case Expr::Kind::Field: {
      auto bt = type_of(*e.args[0], scope);
      if (!bt) return std::nullopt;
      if (bt->kind != Type::Kind::Record) {
        error("TypeMismatch", e, "field access ." + e.name + " on " + describe(*bt));
        return std::nullopt;
      }
      for (std::size_t i = 0; i < bt->def->fields.size(); ++i)
        if (bt->def->fields[i].name == e.name) return types_.field_type(*bt->def, i);
      error("UnknownName", e, bt->def->name + " has no field " + e.name);
      return std::nullopt;
    }
    case Expr::Kind::Match: {
      auto st = type_of(*e.args[0], scope);
      if (!st) return std::nullopt;
      if (st->kind != Type::Kind::Enum && st->kind != Type::Kind::Variant) {
        error("TypeMismatch", e, "match on " + describe(*st));
        return std::nullopt;
      }
      const TypeDef& d = *st->def;
      const std::size_t n = d.kind == TypeDef::Kind::Enum ? d.literals.size() : d.ctors.size();
      std::vector<bool> covered(n, false);
      bool wildcard = false;
      std::optional<Type> result;
      bool ok = true;
      for (const auto& arm : e.arms) {
        const auto mark = scope.size();
        if (arm.ctor.empty()) {
          wildcard = true;
        } else {
          const CtorInfo* ci = types_.find_ctor(arm.ctor);
          if (!ci || ci->type != &d) {
            error("TypeMismatch", *arm.body, arm.ctor + " is not a constructor of " + d.name);
            ok = false;
            continue;
          }
          std::size_t arity = d.kind == TypeDef::Kind::Variant ? d.ctors[ci->index].payload.size() : 0;
          if (arm.binds.size() != arity) {
            error("TypeMismatch", *arm.body, "arm " + arm.ctor + " binds " + std::to_string(arm.binds.size()) +
                                                 " of " + std::to_string(arity) + " payload values");
            ok = false;
            continue;
          }
          covered[ci->index] = true;
          for (std::size_t i = 0; i < arity; ++i) scope.emplace_back(arm.binds[i], types_.payload_type(d, ci->index, i));
        }
        auto bt = type_of(*arm.body, scope);
        scope.resize(mark);
        if (!bt) {
          ok = false;
          continue;
        }
        result = result ? join(result, bt, *arm.body) : bt;
        if (!result) ok = false;
      }
      if (!wildcard) {
        std::string missing;
        for (std::size_t i = 0; i < n; ++i)
          if (!covered[i]) missing += (missing.empty() ? "" : ", ") + (d.kind == TypeDef::Kind::Enum ? d.literals[i] : d.ctors[i].name);
        if (!missing.empty()) {
          report_.add(Severity::Error, "NonExhaustiveMatch", path_, e.pos, "match on " + d.name + " misses " + missing);
          ok = false;
        }
      }
      return ok ? result : std::nullopt;
    }
    case Expr::Kind::If: {
      auto c = type_of(*e.args[0], scope);
      if (c && !c->is_bool()) error("TypeMismatch", *e.args[0], "condition must be Bool, got " + describe(*c));
      auto a = type_of(*e.args[1], scope);
      auto b = type_of(*e.args[2], scope);
      if (!c || !c->is_bool()) return std::nullopt;
      return join(a, b, e);
    }
    case Expr::Kind::Unary: {
      auto a = type_of(*e.args[0], scope);
      if (!a) return std::nullopt;
      if (e.unop == UnaryOp::Not) {
        if (a->is_bool()) return Type::boolean();
        error("TypeMismatch", e, "not applied to " + describe(*a));
        return std::nullopt;
      }
      if (a->is_int()) return Type::integer();
      error("TypeMismatch", e, "negation of " + describe(*a));
      return std::nullopt;
    }
    case Expr::Kind::Binary: {
      auto a = type_of(*e.args[0], scope);
      auto b = type_of(*e.args[1], scope);
      if (!a || !b) return std::nullopt;
      const std::string op = to_string(e.binop);
      switch (e.binop) {
        case BinaryOp::And:
        case BinaryOp::Or:
          if (a->is_bool() && b->is_bool()) return Type::boolean();
          break;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
          if ((a->is_int() && b->is_int()) || same_type(*a, *b)) return Type::boolean();
          break;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
          if (a->is_int() && b->is_int()) return Type::boolean();
          break;
        default:
          if (a->is_int() && b->is_int()) return Type::integer();
          break;
      }
      error("TypeMismatch", e, "operator " + op + " applied to " + describe(*a) + " and " + describe(*b));
      return std::nullopt;
    }
    case Expr::Kind::PortPresent:
    case Expr::Kind::PortValue:
    case Expr::Kind::StateIs:
    case Expr::Kind::StateVar:
      if (observe_) return observe_(e);
      error("TypeMismatch", e, "observation of ports or states is only allowed in glossary entries");
      return std::nullopt;
  }
  return std::nullopt;
}

// --- type definitions and recursion --------------------------------------

namespace {

std::vector<std::string> type_refs(const TypeDef& d) {
  std::vector<std::string> out;
  auto add = [&](const TypeRef& r) {
    if (r.kind == TypeRef::Kind::Named) out.push_back(r.name);
  };
  for (const auto& c : d.ctors)
    for (const auto& p : c.payload) add(p);
  for (const auto& f : d.fields) add(f.type);
  return out;
}

void collect_calls(const Expr& e, const TypeTable& types, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::Call && types.find_func(e.name)) out.push_back(e.name);
  for (const auto& a : e.args) collect_calls(*a, types, out);
  for (const auto& fi : e.inits) collect_calls(*fi.value, types, out);
  for (const auto& arm : e.arms) collect_calls(*arm.body, types, out);
}

// Reports every elementary cycle reachable through `edges`, once per cycle.
void report_cycles(const std::vector<std::string>& nodes, const std::map<std::string, std::vector<std::string>>& edges,
                   const std::string& code, const std::string& what, const std::string& path,
                   const std::map<std::string, SourcePos>& pos, CheckReport& out) {
  std::map<std::string, int> color;
  std::vector<std::string> stack;
  std::set<std::set<std::string>> seen;
  std::function<void(const std::string&)> dfs = [&](const std::string& n) {
    color[n] = 1;
    stack.push_back(n);
    auto it = edges.find(n);
    if (it != edges.end()) {
      for (const auto& m : it->second) {
        if (!edges.count(m)) continue;
        if (color[m] == 1) {
          auto from = std::find(stack.begin(), stack.end(), m);
          std::vector<std::string> cyc(from, stack.end());
          std::set<std::string> key(cyc.begin(), cyc.end());
          if (!seen.insert(key).second) continue;
          std::string text;
          for (const auto& c : cyc) text += c + " -> ";
          text += m;
          out.add(Severity::Error, code, path, pos.at(m), what + " cycle " + text);
        } else if (color[m] == 0) {
          dfs(m);
        }
      }
    }
    stack.pop_back();
    color[n] = 2;
  };
  for (const auto& n : nodes)
    if (color[n] == 0) dfs(n);
}

}  // namespace

CheckReport check_nonrecursive(const Model& m) {
  CheckReport r;
  TypeTable types(m);
  std::vector<std::string> tn, fn;
  std::map<std::string, std::vector<std::string>> tedges, fedges;
  std::map<std::string, SourcePos> tpos, fpos;
  for (const auto& t : m.types) {
    tn.push_back(t.name);
    tedges[t.name] = type_refs(t);
    tpos[t.name] = t.pos;
  }
  for (const auto& f : m.funcs) {
    fn.push_back(f.name);
    auto& calls = fedges[f.name];
    if (f.body) collect_calls(*f.body, types, calls);
    fpos[f.name] = f.pos;
  }
  report_cycles(tn, tedges, "RecursiveType", "type", m.name, tpos, r);
  report_cycles(fn, fedges, "RecursiveFunction", "call", m.name, fpos, r);
  return r;
}

CheckReport check_type_defs(const Model& m) {
  CheckReport r;
  TypeTable types(m);
  auto check_ref = [&](const TypeRef& ref, const std::string& where) {
    if (ref.kind == TypeRef::Kind::Named && !types.find_type(ref.name))
      r.add(Severity::Error, "UnknownName", m.name, ref.pos, "unknown type " + ref.name + " in " + where);
    if (ref.kind == TypeRef::Kind::Int && ref.lo > ref.hi)
      r.add(Severity::Error, "TypeMismatch", m.name, ref.pos, "empty range in " + where);
  };
  for (const auto& t : m.types) {
    if (t.kind == TypeDef::Kind::BoundedInt && t.lo > t.hi)
      r.add(Severity::Error, "TypeMismatch", m.name, t.pos, "empty range in " + t.name);
    for (const auto& c : t.ctors)
      for (const auto& p : c.payload) check_ref(p, t.name);
    for (const auto& f : t.fields) check_ref(f.type, t.name);
  }
  for (const auto& f : m.funcs) {
    for (const auto& p : f.params) check_ref(p.type, f.name);
    check_ref(f.result, f.name);
  }
  return r;
}

// --- per-component typing -------------------------------------------------

namespace {

class ModelTyper {
 public:
  ModelTyper(const Model& m, CheckReport& r) : m_(m), types_(m), r_(r) {}

  void run() {
    for (const auto& f : m_.funcs) {
      ExprTyper typer(types_, r_, m_.name);
      ExprTyper::Scope scope;
      bool ok = true;
      for (const auto& p : f.params) {
        auto t = types_.resolve(p.type);
        if (!t) ok = false;
        else scope.emplace_back(p.name, *t);
      }
      auto rt = types_.resolve(f.result);
      if (ok && rt) typer.expect(*f.body, scope, *rt, "result of " + f.name);
    }
    component(m_.root, m_.root.name);
  }

 private:
  std::optional<Type> resolve(const TypeRef& ref, const std::string& path) {
    auto t = types_.resolve(ref);
    if (!t) r_.add(Severity::Error, "UnknownName", path, ref.pos, "unknown type " + ref.name);
    else if (ref.kind == TypeRef::Kind::Int && ref.lo > ref.hi) {
      r_.add(Severity::Error, "TypeMismatch", path, ref.pos, "empty range");
      return std::nullopt;
    }
    return t;
  }

  // Closed expression that must evaluate to a value of `slot`.
  void constant(const Expr& e, const Type& slot, const std::string& path, const std::string& what) {
    ExprTyper typer(types_, r_, path);
    ExprTyper::Scope none;
    if (!typer.expect(e, none, slot, what)) return;
    try {
      Env env;
      EvalContext ctx{types_, nullptr};
      eval_into(e, slot, env, ctx);
    } catch (const EvalError& err) {
      r_.add(Severity::Error, "RangeViolation", path, e.pos, what + ": " + err.what());
    }
  }

  void component(const ComponentSpec& c, const std::string& path) {
    std::map<std::string, Type> in, out;
    for (const auto& p : c.ports) {
      auto t = resolve(p.type, path);
      if (!t) continue;
      (p.direction == Direction::In ? in : out).emplace(p.name, *t);
      constant(*p.initial, *t, path, "initial value of " + p.name);
    }
    if (const auto* a = c.automaton()) {
      ExprTyper::Scope vars;
      for (const auto& v : a->vars) {
        auto t = resolve(v.type, path);
        if (!t) continue;
        constant(*v.init, *t, path, "initial value of " + v.name);
        vars.emplace_back(v.name, *t);
      }
      std::set<std::string> states;
      for (const auto& s : a->states) states.insert(s.name);
      for (const auto& t : a->transitions) {
        for (const auto* s : {&t.source, &t.target})
          if (!states.count(*s)) r_.add(Severity::Error, "UnknownName", path, t.pos, "unknown control state " + *s);
        ExprTyper::Scope scope = vars;
        behavior_case(t.inputs, t.guard, t.outputs, &t.updates, in, out, scope, path);
      }
    } else if (const auto* tab = c.table()) {
      for (const auto& row : tab->rows) {
        ExprTyper::Scope scope;
        behavior_case(row.inputs, row.guard, row.outputs, nullptr, in, out, scope, path);
      }
    } else if (const auto* comp = c.composite()) {
      for (const auto& s : comp->subs) component(s, path + "." + s.name);
      auto type_at = [&](const PortRef& r) -> std::optional<Type> {
        const ComponentSpec* owner = r.component.empty() ? &c : c.find_sub(r.component);
        if (!owner) return std::nullopt;
        const PortSpec* p = owner->find_port(r.port);
        if (!p) return std::nullopt;
        return types_.resolve(p->type);
      };
      auto check_pair = [&](const PortRef& from, const PortRef& to, SourcePos pos, const char* what) {
        auto a = type_at(from);
        auto b = type_at(to);
        if (a && b && !same_type(*a, *b))
          r_.add(Severity::Error, "TypeMismatch", path, pos,
                 std::string(what) + " connects " + describe(*a) + " to " + describe(*b));
      };
      for (const auto& ch : comp->channels) check_pair(ch.from, ch.to, ch.pos, "channel");
      for (const auto& d : comp->delegations) check_pair(d.from, d.to, d.pos, "delegation");
    }
  }

  void behavior_case(const std::vector<Pattern>& pats, const ExprPtr& guard, const std::vector<OutputAction>& outs,
                     const std::vector<Assignment>* updates, const std::map<std::string, Type>& in,
                     const std::map<std::string, Type>& out, ExprTyper::Scope& scope, const std::string& path) {
    ExprTyper typer(types_, r_, path);
    std::set<std::string> ports, binders;
    for (const auto& p : pats) {
      auto it = in.find(p.port);
      if (it == in.end()) {
        r_.add(Severity::Error, "UnknownName", path, p.pos, "no input port " + p.port);
        continue;
      }
      if (!ports.insert(p.port).second)
        r_.add(Severity::Error, "DuplicateDefinition", path, p.pos, "port " + p.port + " matched twice");
      if (p.kind == Pattern::Kind::Literal) constant(*p.literal, it->second, path, "pattern on " + p.port);
      if (p.kind == Pattern::Kind::Bind) {
        bool clash = !binders.insert(p.var).second;
        for (const auto& [n, t] : scope) clash = clash || n == p.var;
        if (clash) r_.add(Severity::Error, "DuplicateDefinition", path, p.pos, "name " + p.var + " bound twice");
        scope.emplace_back(p.var, it->second);
      }
    }
    if (guard) typer.expect(*guard, scope, Type::boolean(), "precondition");
    std::set<std::string> written;
    for (const auto& o : outs) {
      auto it = out.find(o.port);
      if (it == out.end()) {
        r_.add(Severity::Error, "UnknownName", path, o.pos, "no output port " + o.port);
        continue;
      }
      if (!written.insert(o.port).second)
        r_.add(Severity::Error, "DuplicateDefinition", path, o.pos, "output " + o.port + " written twice");
      if (o.value) typer.expect(*o.value, scope, it->second, "output " + o.port);
    }
    if (!updates) return;
    std::set<std::string> assigned;
    for (const auto& u : *updates) {
      const Type* vt = nullptr;
      for (const auto& [n, t] : scope)
        if (n == u.var && !binders.count(n)) vt = &t;
      if (!vt) {
        r_.add(Severity::Error, "UnknownName", path, u.pos, "no state variable " + u.var);
        continue;
      }
      if (!assigned.insert(u.var).second)
        r_.add(Severity::Error, "DuplicateDefinition", path, u.pos, "variable " + u.var + " assigned twice");
      typer.expect(*u.value, scope, *vt, "update of " + u.var);
    }
  }

  const Model& m_;
  TypeTable types_;
  CheckReport& r_;
};

}  // namespace

CheckReport check_types(const Model& m) {
  CheckReport r;
  ModelTyper(m, r).run();
  return r;
}

// --- structure --------------------------------------------------------------

namespace {

void connectivity(const ComponentSpec& c, const std::string& path, CheckReport& r) {
  const auto* comp = c.composite();
  if (!comp) return;
  std::map<std::pair<std::string, std::string>, int> drivers;
  auto sub_port = [&](const PortRef& ref, Direction want, SourcePos pos, const char* what) -> bool {
    const ComponentSpec* s = c.find_sub(ref.component);
    if (!s) {
      r.add(Severity::Error, "UnknownName", path, pos, std::string(what) + " names unknown subcomponent " + ref.component);
      return false;
    }
    const PortSpec* p = s->find_port(ref.port);
    if (!p) {
      r.add(Severity::Error, "UnknownName", path, pos, ref.component + " has no port " + ref.port);
      return false;
    }
    if (p->direction != want) {
      r.add(Severity::Error, std::string(what) == "channel" ? "InvalidChannel" : "InvalidDelegation", path, pos,
            ref.component + "." + ref.port + " has the wrong direction for this " + what);
      return false;
    }
    return true;
  };
  auto own_port = [&](const PortRef& ref, Direction want, SourcePos pos) -> bool {
    const PortSpec* p = c.find_port(ref.port);
    if (!p) {
      r.add(Severity::Error, "UnknownName", path, pos, c.name + " has no port " + ref.port);
      return false;
    }
    if (p->direction != want) {
      r.add(Severity::Error, "InvalidDelegation", path, pos, ref.port + " has the wrong direction for this delegation");
      return false;
    }
    return true;
  };
  auto drive = [&](const PortRef& to, SourcePos pos) {
    if (++drivers[{to.component, to.port}] == 2) {
      std::string name = to.component.empty() ? to.port : to.component + "." + to.port;
      r.add(Severity::Error, "MultipleDrivers", path, pos, name + " has more than one driver");
    }
  };
  for (const auto& ch : comp->channels) {
    bool ok = sub_port(ch.from, Direction::Out, ch.pos, "channel");
    ok = sub_port(ch.to, Direction::In, ch.pos, "channel") && ok;
    if (ok) drive(ch.to, ch.pos);
  }
  for (const auto& d : comp->delegations) {
    if (d.from.component.empty() && !d.to.component.empty()) {
      bool ok = own_port(d.from, Direction::In, d.pos);
      ok = sub_port(d.to, Direction::In, d.pos, "delegation") && ok;
      if (ok) drive(d.to, d.pos);
    } else if (!d.from.component.empty() && d.to.component.empty()) {
      bool ok = sub_port(d.from, Direction::Out, d.pos, "delegation");
      ok = own_port(d.to, Direction::Out, d.pos) && ok;
      if (ok) drive(d.to, d.pos);
    } else {
      r.add(Severity::Error, "InvalidDelegation", path, d.pos,
            "a delegation links a parent input to a child input or a child output to a parent output");
    }
  }
  for (const auto& s : comp->subs) {
    for (const auto& p : s.ports)
      if (p.direction == Direction::In && !drivers.count({s.name, p.name}))
        r.add(Severity::Warning, "UnconnectedInput", path + "." + s.name, p.pos, "input " + p.name + " is never driven and reads absent");
    connectivity(s, path + "." + s.name, r);
  }
  for (const auto& p : c.ports)
    if (p.direction == Direction::Out && !drivers.count({"", p.name}))
      r.add(Severity::Warning, "UnconnectedOutput", path, p.pos, "output " + p.name + " is never driven and stays absent");
}

}  // namespace

CheckReport check_connectivity(const Model& m) {
  CheckReport r;
  connectivity(m.root, m.root.name, r);
  return r;
}

CheckReport check_causality(const FlatModel& f) {
  CheckReport r;
  for (const auto& cyc : f.cycles) {
    std::string text;
    for (int i : cyc) text += f.instances[i].path + " -> ";
    text += f.instances[cyc.front()].path;
    const Instance& first = f.instances[cyc.front()];
    r.add(Severity::Error, "WeaklyCausalCycle", first.path, first.spec->pos, "instantaneous feedback " + text);
  }
  return r;
}

CheckReport check_composite_causality(const FlatModel& f) {
  CheckReport r;
  const int n = static_cast<int>(f.instances.size());
  auto inside = [&](int node, int anc) {
    for (int x = node; x >= 0; x = f.instances[x].parent)
      if (x == anc) return true;
    return false;
  };
  for (int c = 0; c < n; ++c) {
    const Instance& comp = f.instances[c];
    if (comp.atomic()) continue;
    // Atomics of this composite whose outputs react instantly to its inputs.
    std::vector<int> state(n, 0);
    std::function<bool(int)> reaches = [&](int a) -> bool {
      if (state[a]) return state[a] == 2;
      state[a] = 1;
      bool res = false;
      const Instance& inst = f.instances[a];
      if (inst.spec->causality == Causality::Weak) {
        for (std::size_t p = 0; p < inst.input_src.size() && !res; ++p) {
          if (inst.spec->ports[p].direction != Direction::In) continue;
          const auto& via = inst.input_via[p];
          if (std::find(via.begin(), via.end(), c) != via.end()) res = true;
          const Source& s = inst.input_src[p];
          if (!res && s.kind == Source::Kind::AtomicOutput && inside(s.inst, c)) res = reaches(s.inst);
        }
      }
      state[a] = res ? 2 : 3;
      return res;
    };
    bool instant = false;
    std::vector<Source> outs;
    for (std::size_t p = 0; p < comp.spec->ports.size(); ++p) {
      if (comp.spec->ports[p].direction != Direction::Out) continue;
      // Resolve through delegations down to the producing atomic.
      const ComponentSpec* spec = comp.spec;
      int at = c;
      std::string port = comp.spec->ports[p].name;
      while (at >= 0 && !f.instances[at].atomic()) {
        int next = -1;
        for (const auto& d : spec->composite()->delegations)
          if (d.to.component.empty() && d.to.port == port && !d.from.component.empty())
            for (int ch : f.instances[at].children)
              if (f.instances[ch].spec->name == d.from.component) {
                next = ch;
                port = d.from.port;
              }
        at = next;
        if (at >= 0) spec = f.instances[at].spec;
      }
      if (at >= 0 && reaches(at)) instant = true;
    }
    const bool declared_strong = comp.spec->causality == Causality::Strong;
    if (declared_strong && instant)
      r.add(Severity::Error, "CausalityOverclaim", comp.path, comp.spec->pos,
            "declared strong but an input reaches an output within the same tick");
    if (!declared_strong && !instant)
      r.add(Severity::Warning, "CausalityUnderclaim", comp.path, comp.spec->pos,
            "declared weak but every output is delayed");
  }
  return r;
}

// --- non-determinism ---------------------------------------------------------

namespace {

struct Case {
  const std::vector<Pattern>* pats;
  const ExprPtr* guard;
  std::string label;
};

void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Name) out.insert(e.name);
  for (const auto& a : e.args) collect_names(*a, out);
  for (const auto& fi : e.inits) collect_names(*fi.value, out);
  for (const auto& arm : e.arms) collect_names(*arm.body, out);
}

const Pattern* pattern_on(const Case& c, const std::string& port) {
  for (const auto& p : *c.pats)
    if (p.port == port) return &p;
  return nullptr;
}

// Structural disjointness from patterns alone.
bool patterns_disjoint(const Case& a, const Case& b, const TypeTable& types) {
  EvalContext ctx{types, nullptr};
  for (const auto& pa : *a.pats) {
    const Pattern* pb = pattern_on(b, pa.port);
    if (!pb) continue;
    bool absent_a = pa.kind == Pattern::Kind::Absent;
    bool absent_b = pb->kind == Pattern::Kind::Absent;
    if (absent_a != absent_b) return true;
    if (pa.kind == Pattern::Kind::Literal && pb->kind == Pattern::Kind::Literal) {
      try {
        Env env;
        if (eval_expr(*pa.literal, env, ctx) != eval_expr(*pb->literal, env, ctx)) return true;
      } catch (const EvalError&) {
      }
    }
  }
  return false;
}

// True if some input/variable valuation enables both cases, or if the space
// is too large to decide.
bool may_overlap(const Case& a, const Case& b, const ComponentSpec& c, const TypeTable& types) {
  if (patterns_disjoint(a, b, types)) return false;
  if (!*a.guard && !*b.guard) return true;
  constexpr std::uint64_t kCap = 20000;
  EvalContext ctx{types, nullptr};
  struct Axis {
    std::string name;
    bool port;
    std::vector<Message> values;
  };
  std::vector<Axis> axes;
  std::set<std::string> ports;
  for (const auto* cs : {&a, &b})
    for (const auto& p : *cs->pats) ports.insert(p.port);
  std::uint64_t total = 1;
  for (const auto& pn : ports) {
    const PortSpec* ps = c.find_port(pn);
    auto t = types.resolve(ps->type);
    auto vals = enumerate_values(*t, types, kCap);
    if (!vals) return true;
    Axis ax{pn, true, {absent}};
    for (auto& v : *vals) ax.values.push_back(v);
    total *= ax.values.size();
    if (total > kCap) return true;
    axes.push_back(std::move(ax));
  }
  if (const auto* au = c.automaton()) {
    std::set<std::string> used;
    for (const auto* cs : {&a, &b})
      if (*cs->guard) collect_names(**cs->guard, used);
    for (const auto& v : au->vars) {
      if (!used.count(v.name)) continue;
      auto vals = enumerate_values(types.resolve_or_throw(v.type), types, kCap);
      if (!vals) return true;
      Axis ax{v.name, false, {}};
      for (auto& x : *vals) ax.values.push_back(x);
      total *= ax.values.size();
      if (total > kCap) return true;
      axes.push_back(std::move(ax));
    }
  }
  std::vector<std::size_t> idx(axes.size(), 0);
  auto enabled = [&](const Case& cs) {
    Env env;
    for (std::size_t i = 0; i < axes.size(); ++i)
      if (!axes[i].port) env.bind(axes[i].name, *axes[i].values[idx[i]]);
    for (const auto& p : *cs.pats) {
      std::size_t i = 0;
      while (!(axes[i].port && axes[i].name == p.port)) ++i;
      auto bind = match_pattern(p, axes[i].values[idx[i]], ctx);
      if (!bind) return false;
      for (auto& [n, v] : *bind) env.bind(n, v);
    }
    if (!*cs.guard) return true;
    try {
      return eval_expr(**cs.guard, env, ctx).as_bool();
    } catch (const EvalError&) {
      return false;
    }
  };
  for (;;) {
    if (enabled(a) && enabled(b)) return true;
    std::size_t k = 0;
    while (k < axes.size() && ++idx[k] == axes[k].values.size()) idx[k++] = 0;
    if (k == axes.size()) return false;
  }
}

void determinism(const ComponentSpec& c, const std::string& path, const TypeTable& types, CheckReport& r) {
  std::vector<std::pair<std::string, Case>> cases;  // (source state, case)
  if (const auto* a = c.automaton()) {
    for (std::size_t i = 0; i < a->transitions.size(); ++i) {
      const auto& t = a->transitions[i];
      cases.push_back({t.source, {&t.inputs, &t.guard, t.name.empty() ? "#" + std::to_string(i + 1) : t.name}});
    }
  } else if (const auto* tab = c.table()) {
    for (std::size_t i = 0; i < tab->rows.size(); ++i)
      cases.push_back({"", {&tab->rows[i].inputs, &tab->rows[i].guard, "row " + std::to_string(i + 1)}});
  } else if (const auto* comp = c.composite()) {
    for (const auto& s : comp->subs) determinism(s, path + "." + s.name, types, r);
    return;
  }
  for (std::size_t i = 0; i < cases.size(); ++i)
    for (std::size_t j = i + 1; j < cases.size(); ++j) {
      if (cases[i].first != cases[j].first) continue;
      if (may_overlap(cases[i].second, cases[j].second, c, types))
        r.add(Severity::Warning, "PossibleNonDeterminism", path, c.pos,
              cases[i].second.label + " and " + cases[j].second.label + " may be enabled together");
    }
}

}  // namespace

CheckReport check_determinism(const Model& m) {
  CheckReport r;
  TypeTable types(m);
  determinism(m.root, m.root.name, types, r);
  return r;
}

CheckReport check_model(const Model& m) {
  CheckReport r;
  r.merge(check_type_defs(m));
  r.merge(check_nonrecursive(m));
  if (!r.passes()) return r;
  r.merge(check_types(m));
  r.merge(check_connectivity(m));
  if (!r.passes()) return r;
  FlatModel f = flatten(m);
  r.merge(check_causality(f));
  if (!r.passes()) return r;
  r.merge(check_composite_causality(f));
  r.merge(check_determinism(m));
  return r;
}

}  // namespace syn
