#include "syn/smt.hpp"

#include <unistd.h>

#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace syn {

namespace {

namespace fs = std::filesystem;

std::string sort_of(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Bool: return "Bool";
    case Type::Kind::Int: return "Int";
    default: return "T_" + t.def->name;
  }
}

std::string opt_sort(const Type& t) { return "Opt_" + sort_of(t); }
std::string none_of(const Type& t) { return "None_" + sort_of(t); }
std::string some_of(const Type& t, const std::string& v) { return "(Some_" + sort_of(t) + " " + v + ")"; }
std::string val_of(const Type& t, const std::string& m) { return "(val_" + sort_of(t) + " " + m + ")"; }
std::string is_some(const Type& t, const std::string& m) { return "((_ is Some_" + sort_of(t) + ") " + m + ")"; }
std::string is_none(const Type& t, const std::string& m) { return "((_ is None_" + sort_of(t) + ") " + m + ")"; }

std::string ctor_sym(const TypeDef& d, const std::string& c) { return "C_" + d.name + "_" + c; }
std::string field_sym(const TypeDef& d, const std::string& f) { return "F_" + d.name + "_" + f; }
std::string payload_sym(const TypeDef& d, const std::string& c, std::size_t i) {
  return "P_" + d.name + "_" + c + "_" + std::to_string(i);
}
std::string record_ctor(const TypeDef& d) { return "mk_" + d.name; }

std::string lit(std::int64_t v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); }

std::string app(const std::string& f, const std::vector<std::string>& args) {
  if (args.empty()) return f;
  std::string s = "(" + f;
  for (const auto& a : args) s += " " + a;
  return s + ")";
}

std::string conj(const std::vector<std::string>& xs) {
  std::vector<std::string> keep;
  for (const auto& x : xs) {
    if (x == "false") return "false";
    if (x != "true") keep.push_back(x);
  }
  if (keep.empty()) return "true";
  if (keep.size() == 1) return keep.front();
  return app("and", keep);
}

std::string disj(const std::vector<std::string>& xs) {
  std::vector<std::string> keep;
  for (const auto& x : xs) {
    if (x == "true") return "true";
    if (x != "false") keep.push_back(x);
  }
  if (keep.empty()) return "false";
  if (keep.size() == 1) return keep.front();
  return app("or", keep);
}

std::string negate(const std::string& x) {
  if (x == "true") return "false";
  if (x == "false") return "true";
  return "(not " + x + ")";
}

std::string ite(const std::string& c, const std::string& a, const std::string& b) {
  if (c == "true" || a == b) return a;
  if (c == "false") return b;
  return "(ite " + c + " " + a + " " + b + ")";
}

std::string in_range(const std::string& x, std::int64_t lo, std::int64_t hi) {
  return "(and (<= " + lit(lo) + " " + x + ") (<= " + x + " " + lit(hi) + "))";
}

// Range check for a store into `slot`; the 32-bit carrier is checked where
// arithmetic produces a value.
std::string slot_ok(const std::string& x, const Type& slot) {
  if (!slot.is_int() || (slot.lo == kIntMin && slot.hi == kIntMax)) return "true";
  return in_range(x, slot.lo, slot.hi);
}

struct Term {
  std::string v;
  std::string d = "true";  // no runtime error while evaluating
  Type type;
};

struct Local {
  std::string name;
  std::string term;
  Type type;
};
using Scope = std::vector<Local>;

class Encoder {
 public:
  Encoder(const System& sys, const TemporalFormula& f) : sys_(sys), types_(sys.types()), f_(f) {}

  std::string run(std::size_t bound);

 private:
  Type type_of_def(const TypeDef& d) const { return types_.resolve_or_throw(TypeRef::named(d.name)); }

  void line(const std::string& s) { out_ += s + "\n"; }
  void define(const std::string& name, const std::string& sort, const std::string& body) {
    line("(define-fun " + name + " () " + sort + " " + body + ")");
  }

  void declare_datatypes();
  void declare_functions();
  std::string valid(const std::string& x, const Type& t) const;
  std::string value_term(const Value& v, const Type& t) const;
  std::string message_term(const Message& m, const Type& t) const {
    return m ? some_of(t, value_term(*m, t)) : none_of(t);
  }

  Term expr(const Expr& e, Scope& sc);
  Term binary(const Expr& e, Scope& sc);
  Term match(const Expr& e, Scope& sc);

  // Per-tick symbols.
  std::string at(const std::string& base, std::size_t t) const { return base + "@" + std::to_string(t); }
  const std::string& path(std::size_t a) const { return sys_.atom_instance(a).path; }
  std::string cs(std::size_t a, std::size_t t) const { return at("cs." + path(a), t); }
  std::string var(std::size_t a, std::size_t v, std::size_t t) const {
    return at("var." + path(a) + "." + sys_.behavior(a).vars[v].name, t);
  }
  std::string port_sym(const char* kind, std::size_t a, std::size_t p, std::size_t t) const {
    return at(std::string(kind) + "." + path(a) + "." + sys_.atom_instance(a).spec->ports[p].name, t);
  }
  std::string state_ctor(std::size_t a, const std::string& s) const { return "S_" + std::to_string(a) + "_" + s; }
  bool strong(std::size_t a) const { return sys_.atom_instance(a).spec->causality == Causality::Strong; }
  std::string emitted(std::size_t a, std::size_t p, std::size_t t) const {
    return port_sym(strong(a) ? "buf" : "out", a, p, t);
  }
  std::string source_term(const Source& s, const Type& t, std::size_t tick) const;
  std::string root_port(std::size_t p, std::size_t tick) const;

  void initial_state();
  void tick(std::size_t t);
  void atomic(std::size_t a, std::size_t t);
  std::string prop(const Prop& p, std::size_t t) const;

  const System& sys_;
  const TypeTable& types_;
  const TemporalFormula& f_;
  std::string out_;
  std::size_t tick_ = 0;  // tick observed by glossary expressions
  int fresh_ = 0;
  std::vector<std::string> errs_;  // per atomic, this tick
};

std::string Encoder::valid(const std::string& x, const Type& t) const {
  switch (t.kind) {
    case Type::Kind::Bool:
    case Type::Kind::Enum: return "true";
    case Type::Kind::Int: return slot_ok(x, t);
    case Type::Kind::Record: {
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < t.def->fields.size(); ++i)
        parts.push_back(valid("(" + field_sym(*t.def, t.def->fields[i].name) + " " + x + ")", types_.field_type(*t.def, i)));
      return conj(parts);
    }
    case Type::Kind::Variant: {
      std::vector<std::string> parts;
      for (std::size_t c = 0; c < t.def->ctors.size(); ++c) {
        const auto& ctor = t.def->ctors[c];
        std::vector<std::string> ps;
        for (std::size_t i = 0; i < ctor.payload.size(); ++i)
          ps.push_back(valid("(" + payload_sym(*t.def, ctor.name, i) + " " + x + ")", types_.payload_type(*t.def, c, i)));
        std::string body = conj(ps);
        if (body != "true") parts.push_back("(=> ((_ is " + ctor_sym(*t.def, ctor.name) + ") " + x + ") " + body + ")");
      }
      return conj(parts);
    }
  }
  return "true";
}

std::string Encoder::value_term(const Value& v, const Type& t) const {
  switch (v.kind) {
    case Value::Kind::Bool: return v.as_bool() ? "true" : "false";
    case Value::Kind::Int: return lit(v.num);
    case Value::Kind::Enum: return ctor_sym(*v.type, v.type->literals[static_cast<std::size_t>(v.num)]);
    case Value::Kind::Variant: {
      const auto c = static_cast<std::size_t>(v.num);
      std::vector<std::string> args;
      for (std::size_t i = 0; i < v.items.size(); ++i)
        args.push_back(value_term(v.items[i], types_.payload_type(*v.type, c, i)));
      return app(ctor_sym(*v.type, v.type->ctors[c].name), args);
    }
    case Value::Kind::Record: {
      std::vector<std::string> args;
      for (std::size_t i = 0; i < v.items.size(); ++i) args.push_back(value_term(v.items[i], types_.field_type(*v.type, i)));
      return app(record_ctor(*v.type), args);
    }
  }
  (void)t;
  return "false";
}

void Encoder::declare_datatypes() {
  const Model& m = sys_.model();
  std::set<std::string> done;
  std::vector<const TypeDef*> order;
  std::function<void(const TypeDef&)> visit = [&](const TypeDef& d) {
    if (!done.insert(d.name).second) return;
    auto dep = [&](const TypeRef& r) {
      if (r.kind != TypeRef::Kind::Named) return;
      if (const TypeDef* x = types_.find_type(r.name)) visit(*x);
    };
    for (const auto& c : d.ctors)
      for (const auto& p : c.payload) dep(p);
    for (const auto& fl : d.fields) dep(fl.type);
    if (d.kind == TypeDef::Kind::Enum || d.kind == TypeDef::Kind::Variant || d.kind == TypeDef::Kind::Record)
      order.push_back(&d);
  };
  for (const auto& d : m.types) visit(d);

  std::vector<std::string> sorts = {"Bool", "Int"};
  for (const TypeDef* d : order) {
    std::string s = "(declare-datatype T_" + d->name + " (";
    if (d->kind == TypeDef::Kind::Enum) {
      for (const auto& l : d->literals) s += "(" + ctor_sym(*d, l) + ")";
    } else if (d->kind == TypeDef::Kind::Variant) {
      for (std::size_t c = 0; c < d->ctors.size(); ++c) {
        s += "(" + ctor_sym(*d, d->ctors[c].name);
        for (std::size_t i = 0; i < d->ctors[c].payload.size(); ++i)
          s += " (" + payload_sym(*d, d->ctors[c].name, i) + " " + sort_of(types_.payload_type(*d, c, i)) + ")";
        s += ")";
      }
    } else {
      s += "(" + record_ctor(*d);
      for (std::size_t i = 0; i < d->fields.size(); ++i)
        s += " (" + field_sym(*d, d->fields[i].name) + " " + sort_of(types_.field_type(*d, i)) + ")";
      s += ")";
    }
    line(s + "))");
    sorts.push_back("T_" + d->name);
  }
  for (const auto& s : sorts)
    line("(declare-datatype Opt_" + s + " ((None_" + s + ") (Some_" + s + " (val_" + s + " " + s + "))))");

  for (std::size_t a = 0; a < sys_.atom_count(); ++a) {
    std::string s = "(declare-datatype CS_" + std::to_string(a) + " (";
    for (const auto& st : sys_.behavior(a).states) s += "(" + state_ctor(a, st.name) + ")";
    line(s + "))");
  }
}

void Encoder::declare_functions() {
  line("(define-fun tdiv ((a Int) (b Int)) Int (ite (>= a 0) (ite (>= b 0) (div a b) (- (div a (- b)))) "
       "(ite (>= b 0) (- (div (- a) b)) (div (- a) (- b)))))");
  line("(define-fun tmod ((a Int) (b Int)) Int (- a (* b (tdiv a b))))");

  const Model& m = sys_.model();
  std::set<std::string> done;
  std::function<void(const FuncDef&)> emit;
  std::function<void(const Expr&)> deps = [&](const Expr& e) {
    if (e.kind == Expr::Kind::Call)
      if (const FuncDef* g = types_.find_func(e.name)) emit(*g);
    for (const auto& a : e.args) deps(*a);
    for (const auto& i : e.inits) deps(*i.value);
    for (const auto& arm : e.arms) deps(*arm.body);
  };
  emit = [&](const FuncDef& f) {
    if (!done.insert(f.name).second) return;
    deps(*f.body);
    Scope sc;
    std::string params;
    for (const auto& p : f.params) {
      Type t = types_.resolve_or_throw(p.type);
      sc.push_back({p.name, "p." + p.name, t});
      params += (params.empty() ? "(p." : " (p.") + p.name + " " + sort_of(t) + ")";
    }
    Term body = expr(*f.body, sc);
    Type rt = types_.resolve_or_throw(f.result);
    line("(define-fun fn." + f.name + " (" + params + ") " + sort_of(rt) + " " + body.v + ")");
    line("(define-fun fnd." + f.name + " (" + params + ") Bool " + body.d + ")");
  };
  for (const auto& f : m.funcs) emit(f);
}

Term Encoder::expr(const Expr& e, Scope& sc) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return {lit(e.number), "true", Type::integer()};
    case Expr::Kind::BoolLit: return {e.number ? "true" : "false", "true", Type::boolean()};
    case Expr::Kind::Name: {
      for (auto it = sc.rbegin(); it != sc.rend(); ++it)
        if (it->name == e.name) return {it->term, "true", it->type};
      if (const CtorInfo* ci = types_.find_ctor(e.name)) {
        const TypeDef& d = *ci->type;
        return {ctor_sym(d, e.name), "true", type_of_def(d)};
      }
      throw std::logic_error("unbound name " + e.name);
    }
    case Expr::Kind::Call: {
      std::vector<Term> args;
      for (const auto& a : e.args) args.push_back(expr(*a, sc));
      std::vector<std::string> vs, ds;
      if (const FuncDef* f = types_.find_func(e.name)) {
        for (std::size_t i = 0; i < args.size(); ++i) {
          vs.push_back(args[i].v);
          ds.push_back(args[i].d);
          ds.push_back(slot_ok(args[i].v, types_.resolve_or_throw(f->params[i].type)));
        }
        Type rt = types_.resolve_or_throw(f->result);
        std::string v = app("fn." + f->name, vs);
        ds.push_back(app("fnd." + f->name, vs));
        ds.push_back(slot_ok(v, rt));
        return {v, conj(ds), rt.is_int() ? Type::integer() : rt};
      }
      const CtorInfo* ci = types_.find_ctor(e.name);
      if (!ci) throw std::logic_error("unknown function " + e.name);
      const TypeDef& d = *ci->type;
      for (std::size_t i = 0; i < args.size(); ++i) {
        vs.push_back(args[i].v);
        ds.push_back(args[i].d);
        ds.push_back(slot_ok(args[i].v, types_.payload_type(d, ci->index, i)));
      }
      const std::string& cname = d.kind == TypeDef::Kind::Enum ? d.literals[ci->index] : d.ctors[ci->index].name;
      return {app(ctor_sym(d, cname), vs), conj(ds), type_of_def(d)};
    }
    case Expr::Kind::Record: {
      const TypeDef& d = *types_.find_type(e.name);
      std::vector<std::string> vs, ds;
      for (std::size_t i = 0; i < d.fields.size(); ++i) {
        for (const auto& fi : e.inits) {
          if (fi.name != d.fields[i].name) continue;
          Term t = expr(*fi.value, sc);
          vs.push_back(t.v);
          ds.push_back(t.d);
          ds.push_back(slot_ok(t.v, types_.field_type(d, i)));
        }
      }
      return {app(record_ctor(d), vs), conj(ds), type_of_def(d)};
    }
    case Expr::Kind::Field: {
      Term base = expr(*e.args[0], sc);
      const TypeDef& d = *base.type.def;
      for (std::size_t i = 0; i < d.fields.size(); ++i)
        if (d.fields[i].name == e.name) {
          Type ft = types_.field_type(d, i);
          return {"(" + field_sym(d, e.name) + " " + base.v + ")", base.d, ft};
        }
      throw std::logic_error("no field " + e.name);
    }
    case Expr::Kind::Match: return match(e, sc);
    case Expr::Kind::If: {
      Term c = expr(*e.args[0], sc);
      Term a = expr(*e.args[1], sc);
      Term b = expr(*e.args[2], sc);
      Type t = a.type.is_int() ? Type::integer() : a.type;
      return {ite(c.v, a.v, b.v), conj({c.d, ite(c.v, a.d, b.d)}), t};
    }
    case Expr::Kind::Unary: {
      Term a = expr(*e.args[0], sc);
      if (e.unop == UnaryOp::Not) return {negate(a.v), a.d, Type::boolean()};
      std::string v = "(- " + a.v + ")";
      return {v, conj({a.d, in_range(v, kIntMin, kIntMax)}), Type::integer()};
    }
    case Expr::Kind::Binary: return binary(e, sc);
    case Expr::Kind::PortPresent:
    case Expr::Kind::PortValue: {
      const auto& root = sys_.model().root;
      for (std::size_t p = 0; p < root.ports.size(); ++p) {
        if (root.ports[p].name != e.name) continue;
        const Type& t = sys_.port_type(0, p);
        std::string m = root_port(p, tick_);
        if (e.kind == Expr::Kind::PortPresent) return {is_some(t, m), "true", Type::boolean()};
        return {val_of(t, m), is_some(t, m), t};
      }
      throw std::logic_error("no root port " + e.name);
    }
    case Expr::Kind::StateIs:
    case Expr::Kind::StateVar: {
      int inst = sys_.flat().find(e.name);
      std::size_t a = sys_.atom_of_instance(inst);
      const Automaton& au = sys_.behavior(a);
      if (e.kind == Expr::Kind::StateIs) {
        for (const auto& s : au.states)
          if (s.name == e.member) return {"(= " + cs(a, tick_) + " " + state_ctor(a, s.name) + ")", "true", Type::boolean()};
        return {"false", "true", Type::boolean()};
      }
      for (std::size_t v = 0; v < au.vars.size(); ++v)
        if (au.vars[v].name == e.member) return {var(a, v, tick_), "true", sys_.var_type(a, v)};
      throw std::logic_error("no state variable " + e.member);
    }
  }
  throw std::logic_error("unknown expression");
}

Term Encoder::binary(const Expr& e, Scope& sc) {
  Term a = expr(*e.args[0], sc);
  Term b = expr(*e.args[1], sc);
  auto op2 = [&](const char* op) { return std::string("(") + op + " " + a.v + " " + b.v + ")"; };
  switch (e.binop) {
    case BinaryOp::And: return {conj({a.v, b.v}), conj({a.d, disj({negate(a.v), b.d})}), Type::boolean()};
    case BinaryOp::Or: return {disj({a.v, b.v}), conj({a.d, disj({a.v, b.d})}), Type::boolean()};
    case BinaryOp::Eq: return {op2("="), conj({a.d, b.d}), Type::boolean()};
    case BinaryOp::Ne: return {negate(op2("=")), conj({a.d, b.d}), Type::boolean()};
    case BinaryOp::Lt: return {op2("<"), conj({a.d, b.d}), Type::boolean()};
    case BinaryOp::Le: return {op2("<="), conj({a.d, b.d}), Type::boolean()};
    case BinaryOp::Gt: return {op2(">"), conj({a.d, b.d}), Type::boolean()};
    case BinaryOp::Ge: return {op2(">="), conj({a.d, b.d}), Type::boolean()};
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul: {
      std::string v = op2(e.binop == BinaryOp::Add ? "+" : e.binop == BinaryOp::Sub ? "-" : "*");
      return {v, conj({a.d, b.d, in_range(v, kIntMin, kIntMax)}), Type::integer()};
    }
    case BinaryOp::Div:
    case BinaryOp::Mod: {
      std::string v = op2(e.binop == BinaryOp::Div ? "tdiv" : "tmod");
      return {v, conj({a.d, b.d, "(not (= " + b.v + " 0))", in_range(v, kIntMin, kIntMax)}), Type::integer()};
    }
  }
  throw std::logic_error("unknown operator");
}

Term Encoder::match(const Expr& e, Scope& sc) {
  Term s = expr(*e.args[0], sc);
  const TypeDef& d = *s.type.def;
  const std::string m = "m." + std::to_string(fresh_++);
  std::vector<std::string> conds, vs, ds;
  Type rt;
  for (std::size_t k = 0; k < e.arms.size(); ++k) {
    const auto& arm = e.arms[k];
    const auto mark = sc.size();
    if (arm.ctor.empty()) {
      conds.push_back("true");
    } else {
      conds.push_back("((_ is " + ctor_sym(d, arm.ctor) + ") " + m + ")");
      if (d.kind == TypeDef::Kind::Variant) {
        std::size_t c = types_.find_ctor(arm.ctor)->index;
        for (std::size_t i = 0; i < arm.binds.size(); ++i)
          sc.push_back({arm.binds[i], "(" + payload_sym(d, arm.ctor, i) + " " + m + ")", types_.payload_type(d, c, i)});
      }
    }
    Term body = expr(*arm.body, sc);
    sc.resize(mark);
    if (k == 0) rt = body.type.is_int() ? Type::integer() : body.type;
    vs.push_back(body.v);
    ds.push_back(body.d);
  }
  std::string v = vs.back(), dd = ite(conds.back(), ds.back(), "false");
  for (std::size_t k = vs.size() - 1; k-- > 0;) {
    v = ite(conds[k], vs[k], v);
    dd = ite(conds[k], ds[k], dd);
  }
  auto wrap = [&](const std::string& body) {
    if (body == "true" || body == "false") return body;
    return "(let ((" + m + " " + s.v + ")) " + body + ")";
  };
  return {wrap(v), conj({s.d, wrap(dd)}), rt};
}

std::string Encoder::source_term(const Source& s, const Type& t, std::size_t tick) const {
  switch (s.kind) {
    case Source::Kind::None: return none_of(t);
    case Source::Kind::RootInput:
      return at("in." + sys_.model().root.ports[static_cast<std::size_t>(s.port)].name, tick);
    case Source::Kind::AtomicOutput:
      return emitted(sys_.atom_of_instance(s.inst), static_cast<std::size_t>(s.port), tick);
  }
  return none_of(t);
}

std::string Encoder::root_port(std::size_t p, std::size_t tick) const {
  const auto& root = sys_.model().root;
  if (root.ports[p].direction == Direction::In) return at("in." + root.ports[p].name, tick);
  if (sys_.flat().root().atomic()) return emitted(0, p, tick);
  return source_term(sys_.flat().root_outputs[p], sys_.port_type(0, p), tick);
}

void Encoder::initial_state() {
  SystemState init = sys_.init_state();
  for (std::size_t a = 0; a < sys_.atom_count(); ++a) {
    const Automaton& au = sys_.behavior(a);
    const AtomicState& st = init.atoms[a];
    define(cs(a, 0), "CS_" + std::to_string(a), state_ctor(a, au.states[st.control].name));
    for (std::size_t v = 0; v < au.vars.size(); ++v)
      define(var(a, v, 0), sort_of(sys_.var_type(a, v)), value_term(st.vars[v], sys_.var_type(a, v)));
    if (!strong(a)) continue;
    const int ii = sys_.flat().atomics[a];
    const auto& ports = sys_.atom_instance(a).spec->ports;
    for (std::size_t p = 0; p < ports.size(); ++p)
      if (ports[p].direction == Direction::Out)
        define(port_sym("buf", a, p, 0), opt_sort(sys_.port_type(ii, p)), message_term(st.buffer[p], sys_.port_type(ii, p)));
  }
}

void Encoder::atomic(std::size_t a, std::size_t t) {
  const Instance& inst = sys_.atom_instance(a);
  const int ii = sys_.flat().atomics[a];
  const auto& ports = inst.spec->ports;
  const Automaton& au = sys_.behavior(a);
  const std::string tag = path(a) + "@" + std::to_string(t);

  for (std::size_t p = 0; p < ports.size(); ++p)
    if (ports[p].direction == Direction::In)
      define(port_sym("inp", a, p, t), opt_sort(sys_.port_type(ii, p)),
             source_term(inst.input_src[p], sys_.port_type(ii, p), t));

  Scope base;
  for (std::size_t v = 0; v < au.vars.size(); ++v) base.push_back({au.vars[v].name, var(a, v, t), sys_.var_type(a, v)});

  const std::size_t n = au.transitions.size();
  const bool choice = n > 1;
  if (choice) line("(declare-const " + at("ch." + path(a), t) + " Int)");

  std::vector<std::string> en(n), sel(n), pre_err, fire_err;
  std::vector<Scope> scopes(n, base);
  for (std::size_t k = 0; k < n; ++k) {
    const Transition& tr = au.transitions[k];
    std::vector<std::string> cand = {"(= " + cs(a, t) + " " + state_ctor(a, tr.source) + ")"};
    for (const auto& pat : tr.inputs) {
      const auto p = static_cast<std::size_t>(port_index(*inst.spec, pat.port));
      const Type& pt = sys_.port_type(ii, p);
      const std::string m = port_sym("inp", a, p, t);
      switch (pat.kind) {
        case Pattern::Kind::Absent: cand.push_back(is_none(pt, m)); break;
        case Pattern::Kind::Present: cand.push_back(is_some(pt, m)); break;
        case Pattern::Kind::Bind:
          cand.push_back(is_some(pt, m));
          scopes[k].push_back({pat.var, val_of(pt, m), pt});
          break;
        case Pattern::Kind::Literal: {
          Env none;
          EvalContext ctx{types_, nullptr};
          Value lv = eval_expr(*pat.literal, none, ctx);
          cand.push_back(is_some(pt, m));
          cand.push_back("(= " + val_of(pt, m) + " " + value_term(lv, pt) + ")");
          break;
        }
      }
    }
    const std::string c = at("cand." + path(a) + "." + std::to_string(k), t);
    define(c, "Bool", conj(cand));
    Term g{"true", "true", Type::boolean()};
    if (tr.guard) g = expr(*tr.guard, scopes[k]);
    en[k] = at("en." + path(a) + "." + std::to_string(k), t);
    define(en[k], "Bool", conj({c, g.v, g.d}));
    if (g.d != "true") pre_err.push_back(conj({c, negate(g.d)}));
    sel[k] = choice ? "(and " + en[k] + " (= " + at("ch." + path(a), t) + " " + std::to_string(k) + "))" : en[k];
  }
  if (choice) line("(assert (=> " + disj(en) + " " + disj(sel) + "))");

  // Outputs and updates of each transition.
  std::vector<std::vector<std::pair<std::string, std::string>>> writes(ports.size());  // (sel, value)
  std::vector<std::vector<std::pair<std::string, std::string>>> updates(au.vars.size());
  for (std::size_t k = 0; k < n; ++k) {
    const Transition& tr = au.transitions[k];
    std::vector<std::string> ds;
    std::map<std::size_t, std::string> last;
    for (const auto& o : tr.outputs) {
      const auto p = static_cast<std::size_t>(port_index(*inst.spec, o.port));
      const Type& pt = sys_.port_type(ii, p);
      if (!o.value) continue;
      Term v = expr(*o.value, scopes[k]);
      ds.push_back(v.d);
      ds.push_back(slot_ok(v.v, pt));
      last[p] = some_of(pt, v.v);
    }
    for (auto& [p, v] : last) writes[p].push_back({sel[k], v});
    for (const auto& u : tr.updates)
      for (std::size_t v = 0; v < au.vars.size(); ++v) {
        if (au.vars[v].name != u.var) continue;
        Term x = expr(*u.value, scopes[k]);
        ds.push_back(x.d);
        ds.push_back(slot_ok(x.v, sys_.var_type(a, v)));
        updates[v].push_back({sel[k], x.v});
      }
    std::string d = conj(ds);
    if (d != "true") fire_err.push_back(conj({sel[k], negate(d)}));
  }

  for (std::size_t p = 0; p < ports.size(); ++p) {
    if (ports[p].direction != Direction::Out) continue;
    const Type& pt = sys_.port_type(ii, p);
    std::string v = none_of(pt);
    for (auto it = writes[p].rbegin(); it != writes[p].rend(); ++it) v = ite(it->first, it->second, v);
    define(strong(a) ? port_sym("buf", a, p, t + 1) : port_sym("out", a, p, t), opt_sort(pt), v);
  }
  std::string next_cs = cs(a, t);
  for (std::size_t k = n; k-- > 0;) {
    const Transition& tr = au.transitions[k];
    if (tr.target != tr.source) next_cs = ite(sel[k], state_ctor(a, tr.target), next_cs);
  }
  define(cs(a, t + 1), "CS_" + std::to_string(a), next_cs);
  for (std::size_t v = 0; v < au.vars.size(); ++v) {
    std::string x = var(a, v, t);
    for (auto it = updates[v].rbegin(); it != updates[v].rend(); ++it) x = ite(it->first, it->second, x);
    define(var(a, v, t + 1), sort_of(sys_.var_type(a, v)), x);
  }
  const std::string err = "err." + tag;
  define(err, "Bool", disj({disj(pre_err), disj(fire_err)}));
  errs_.push_back(err);
}

std::string Encoder::prop(const Prop& p, std::size_t t) const {
  switch (p.kind) {
    case Prop::Kind::True: return "true";
    case Prop::Kind::Atom: return at("atom." + std::to_string(p.atom), t);
    case Prop::Kind::Not: return negate(prop(p.kids[0], t));
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      std::vector<std::string> xs;
      for (const auto& k : p.kids) xs.push_back(prop(k, t));
      return p.kind == Prop::Kind::And ? conj(xs) : disj(xs);
    }
  }
  return "false";
}

void Encoder::tick(std::size_t t) {
  line("; tick " + std::to_string(t));
  const auto& root = sys_.model().root;
  for (std::size_t p : sys_.root_inputs()) {
    const Type& pt = sys_.port_type(0, p);
    const std::string x = at("in." + root.ports[p].name, t);
    line("(declare-const " + x + " " + opt_sort(pt) + ")");
    std::string ok = valid(val_of(pt, x), pt);
    if (ok != "true") line("(assert (or " + is_none(pt, x) + " " + ok + "))");
  }
  errs_.clear();
  for (int ii : *sys_.flat().schedule) atomic(sys_.atom_of_instance(ii), t);

  tick_ = t;
  std::vector<std::string> viol = errs_;
  for (std::size_t i = 0; i < f_.atoms.size(); ++i) {
    Scope sc;
    Term x = expr(*f_.atoms[i].expr, sc);
    define(at("atom." + std::to_string(i), t), "Bool", x.v);
    if (x.d != "true") viol.push_back(negate(x.d));
  }
  for (const auto& c : f_.clauses) {
    if (c.next) {
      if (t > 0) viol.push_back(conj({prop(c.antecedent, t - 1), negate(prop(c.consequent, t))}));
    } else {
      viol.push_back(conj({prop(c.antecedent, t), negate(prop(c.consequent, t))}));
    }
  }
  define(at("viol", t), "Bool", disj(viol));
}

std::string Encoder::run(std::size_t bound) {
  line("; bounded check of " + f_.id + ", " + std::to_string(bound) + " ticks");
  line("(set-option :produce-models true)");
  declare_datatypes();
  declare_functions();
  initial_state();
  std::size_t unroll = bound;
#ifdef SYN_FAULT_UNROLL
  if (unroll > 0) --unroll;
#endif
  for (std::size_t t = 0; t < unroll; ++t) tick(t);
  if (unroll == 0) {
    line("(assert false)");
    line("(check-sat)");
    return out_;
  }
  std::string all = "(or";
  std::string flags = "(";
  for (std::size_t t = 0; t < unroll; ++t) {
    all += " " + at("viol", t);
    flags += (t ? " " : "") + at("viol", t);
  }
  line("(assert " + all + "))");
  line("(check-sat)");
  line("(get-model)");
  line("(get-value " + flags + "))");
  return out_;
}

// Model values back to runtime values.
Value read_value(const SExpr& s, const Type& t, const TypeTable& types) {
  if (!s.is_atom() && s.list.size() == 3 && s.list[0].atom == "as") return read_value(s.list[1], t, types);
  switch (t.kind) {
    case Type::Kind::Bool:
      if (s.atom == "true" || s.atom == "false") return Value::boolean(s.atom == "true");
      break;
    case Type::Kind::Int:
      if (s.is_atom()) return Value::integer(std::stoll(s.atom));
      if (s.list.size() == 2 && s.list[0].atom == "-") return Value::integer(-read_value(s.list[1], t, types).num);
      break;
    case Type::Kind::Enum:
      for (std::size_t i = 0; i < t.def->literals.size(); ++i)
        if (s.atom == ctor_sym(*t.def, t.def->literals[i])) return Value::enumeration(t.def, i);
      break;
    case Type::Kind::Variant: {
      const std::string& head = s.is_atom() ? s.atom : s.list.at(0).atom;
      for (std::size_t c = 0; c < t.def->ctors.size(); ++c) {
        if (head != ctor_sym(*t.def, t.def->ctors[c].name)) continue;
        std::vector<Value> items;
        for (std::size_t i = 0; i < t.def->ctors[c].payload.size(); ++i)
          items.push_back(read_value(s.list.at(i + 1), types.payload_type(*t.def, c, i), types));
        return Value::variant(t.def, c, std::move(items));
      }
      break;
    }
    case Type::Kind::Record: {
      std::vector<Value> items;
      for (std::size_t i = 0; i < t.def->fields.size(); ++i)
        items.push_back(read_value(s.list.at(i + 1), types.field_type(*t.def, i), types));
      return Value::record(t.def, std::move(items));
    }
  }
  throw std::runtime_error("unexpected model value for " + describe(t));
}

Message read_message(const SExpr& s, const Type& t, const TypeTable& types) {
  if (!s.is_atom() && s.list.size() == 3 && s.list[0].atom == "as") return read_message(s.list[1], t, types);
  if (s.is_atom() && s.atom == none_of(t)) return absent;
  if (!s.is_atom() && s.list.size() == 2 && s.list[0].atom == "Some_" + sort_of(t))
    return read_value(s.list[1], t, types);
  throw std::runtime_error("unexpected model message for " + describe(t));
}

Verdict engine_error(std::size_t bound, std::string diag) {
  Verdict v;
  v.kind = Verdict::Kind::EngineError;
  v.bound = bound;
  v.diagnostic = std::move(diag);
  return v;
}

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) {
  std::vector<SExpr> stack(1);
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      stack.emplace_back();
      ++i;
    } else if (c == ')') {
      if (stack.size() < 2) throw std::runtime_error("unbalanced ')'");
      SExpr done = std::move(stack.back());
      stack.pop_back();
      stack.back().list.push_back(std::move(done));
      ++i;
    } else if (c == '"' || c == '|') {
      std::size_t j = text.find(c, i + 1);
      if (j == std::string_view::npos) throw std::runtime_error("unterminated literal");
      std::string a(text.substr(i, j - i + 1));
      if (c == '|') a = a.substr(1, a.size() - 2);
      stack.back().list.push_back({a, {}});
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' && text[j] != ')')
        ++j;
      stack.back().list.push_back({std::string(text.substr(i, j - i)), {}});
      i = j;
    }
  }
  if (stack.size() != 1) throw std::runtime_error("unbalanced '('");
  return std::move(stack.front().list);
}

std::string encode_smt(const System& sys, const TemporalFormula& f, std::size_t bound) {
  return Encoder(sys, f).run(bound);
}

std::string default_solver() {
  if (const char* s = std::getenv("SYN_SOLVER"); s && *s) return s;
  const char* path = std::getenv("PATH");
  if (!path) return {};
  std::string_view rest(path);
  while (!rest.empty()) {
    auto colon = rest.find(':');
    fs::path dir(std::string(rest.substr(0, colon)));
    std::error_code ec;
    if (!dir.empty() && fs::exists(dir / "z3", ec)) return (dir / "z3").string();
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return {};
}

Verdict read_solver_output(const System& sys, std::string_view output, std::size_t bound) {
  std::vector<SExpr> items;
  try {
    items = parse_sexprs(output);
  } catch (const std::exception& e) {
    return engine_error(bound, std::string("SolverParseError: ") + e.what());
  }
  if (items.empty() || !items[0].is_atom()) return engine_error(bound, "SolverParseError: empty solver output");
  if (items[0].atom == "unsat") {
    Verdict v;
    v.bound = bound;
    return v;
  }
  if (items[0].atom != "sat")
    return engine_error(bound, "SolverParseError: solver answered " + items[0].atom);
  if (items.size() < 3) return engine_error(bound, "SolverParseError: missing model");
  try {
    std::map<std::string, const SExpr*> model;
    for (const auto& d : items[1].list) {
      if (d.is_atom()) continue;  // a leading `model` keyword
      if (d.list.size() == 5 && d.list[0].atom == "define-fun") model[d.list[1].atom] = &d.list[4];
    }
    std::optional<std::size_t> first;
    for (const auto& pair : items[2].list) {
      if (pair.list.size() != 2 || pair.list[1].atom != "true") continue;
      const std::string& name = pair.list[0].atom;
      std::size_t t = std::stoul(name.substr(name.find('@') + 1));
      if (!first || t < *first) first = t;
    }
    if (!first) return engine_error(bound, "SolverParseError: no violating tick in the model");
    Verdict v;
    v.kind = Verdict::Kind::Counterexample;
    v.bound = bound;
    v.violationTick = *first;
    const auto& root = sys.model().root;
    for (std::size_t t = 0; t <= *first; ++t) {
      std::vector<Message> row;
      for (std::size_t p : sys.root_inputs()) {
        auto it = model.find("in." + root.ports[p].name + "@" + std::to_string(t));
        row.push_back(it == model.end() ? absent : read_message(*it->second, sys.port_type(0, p), sys.types()));
      }
      v.stimulus.rows.push_back(std::move(row));
      std::vector<int> fired(sys.atom_count(), -1);
      for (std::size_t a = 0; a < sys.atom_count(); ++a) {
        auto it = model.find("ch." + sys.atom_instance(a).path + "@" + std::to_string(t));
        if (it != model.end()) fired[a] = static_cast<int>(read_value(*it->second, Type::integer(), sys.types()).num);
      }
      v.fired.push_back(std::move(fired));
    }
    return v;
  } catch (const std::exception& e) {
    return engine_error(bound, std::string("SolverParseError: ") + e.what());
  }
}

Verdict bmc_smt(const System& sys, const TemporalFormula& f, std::size_t bound, const SmtOptions& opt) {
  static std::atomic<int> counter{0};
  fs::path script = opt.script_path;
  const bool temp = script.empty();
  if (temp)
    script = fs::temp_directory_path() /
             ("syn-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".smt2");
  {
    std::error_code ec;
    if (script.has_parent_path()) fs::create_directories(script.parent_path(), ec);
    std::ofstream out(script);
    out << encode_smt(sys, f, bound);
    if (!out) return engine_error(bound, "cannot write " + script.string());
  }
  if (opt.solver.empty()) return engine_error(bound, "SolverUnavailable: no solver configured");
  std::string cmd = opt.solver + " '" + script.string() + "' 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return engine_error(bound, "SolverUnavailable: cannot run " + opt.solver);
  std::string output;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  int status = ::pclose(pipe);
  if (temp) {
    std::error_code ec;
    fs::remove(script, ec);
  }
  if (output.empty()) return engine_error(bound, "SolverUnavailable: " + opt.solver + " exited with status " + std::to_string(status));
  if (output.rfind("sat", 0) != 0 && output.rfind("unsat", 0) != 0 && output.rfind("unknown", 0) != 0)
    return engine_error(bound, "SolverUnavailable: " + output.substr(0, output.find('\n')));
  return read_solver_output(sys, output, bound);
}

}  // namespace syn
