#include "syn/codegen.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace syn {

namespace {

std::string cid(const std::string& path) {
  std::string s = path;
  std::replace(s.begin(), s.end(), '.', '_');
  return s;
}

std::string c_int(std::int64_t v) {
  if (v == kIntMin) return "(-2147483647 - 1)";
  if (v < 0) return "(" + std::to_string(v) + ")";
  return std::to_string(v);
}

std::string c_str(const std::string& s) { return "\"" + s + "\""; }

bool is_struct(const Type& t) { return t.kind == Type::Kind::Variant || t.kind == Type::Kind::Record; }

std::string ctype(const Type& t) {
  if (t.kind == Type::Kind::Bool || t.kind == Type::Kind::Int) return "int32_t";
  return "T_" + t.def->name;
}

std::string sort(const Type& t) {
  if (t.kind == Type::Kind::Bool) return "Bool";
  if (t.kind == Type::Kind::Int) return "Int";
  return t.def->name;
}

std::string mtype(const Type& t) { return "M_" + sort(t); }
std::string zero(const Type& t) { return is_struct(t) ? "zero_" + t.def->name + "()" : "0"; }
std::string eq(const std::string& a, const std::string& b, const Type& t) {
  return is_struct(t) ? "eq_" + t.def->name + "(" + a + ", " + b + ")" : "(" + a + " == " + b + ")";
}
std::string enum_const(const TypeDef& d, const std::string& lit) { return "E_" + d.name + "_" + lit; }
std::string tag_const(const TypeDef& d, const std::string& c) { return "K_" + d.name + "_" + c; }

bool narrow(const Type& t) { return t.is_int() && (t.lo != kIntMin || t.hi != kIntMax); }

// Statement list with block nesting and a temporary counter shared by every
// block of one function.
struct Body {
  std::string text;
  int depth = 1;
  int* counter = nullptr;

  Body child() const { return {{}, depth + 1, counter}; }
  void line(const std::string& s) {
    text.append(static_cast<std::size_t>(depth) * 2, ' ');
    text += s;
    text += '\n';
  }
  void raw_line(int d, const std::string& s) {
    text.append(static_cast<std::size_t>(d) * 2, ' ');
    text += s;
    text += '\n';
  }
  std::string temp() { return "t" + std::to_string((*counter)++); }
};

struct CVal {
  std::string c;
  Type t;
};

struct Local {
  std::string name;
  std::string c;
  Type t;
};
using CScope = std::vector<Local>;

class Gen {
 public:
  explicit Gen(const System& sys) : sys_(sys), types_(sys.types()), flat_(sys.flat()) {
    if (!flat_.nested)
      throw CodegenError("an instantaneous path leaves a composite and re-enters it; it cannot be stepped as one unit");
    order_types();
    name_units();
  }

  std::vector<GeneratedUnit> units(CheckReport* notes);
  GeneratedUnit harness();

 private:
  // Types unit.
  void order_types();
  std::size_t slots(const Type& t) const;
  std::size_t msg_slots(const Type& t) const { return 1 + slots(t); }
  std::size_t io_slots(int inst, Direction d) const;
  std::size_t state_slots(int inst) const;
  GeneratedUnit types_header(const std::vector<std::string>& first_policy);
  GeneratedUnit types_source();
  std::string value(const Value& v, const Type& t) const;

  // Expressions.
  CVal lower(const Expr& e, CScope& sc, Body& b);
  CVal binary(const Expr& e, CScope& sc, Body& b);
  CVal match(const Expr& e, CScope& sc, Body& b);
  std::string checked(const CVal& v, const Type& slot, Body& b);

  // Step units.
  void name_units();
  const std::string& prefix(int inst) const { return prefix_[static_cast<std::size_t>(inst)]; }
  Type port_type(int inst, std::size_t p) const { return sys_.port_type(static_cast<std::size_t>(inst), p); }
  GeneratedUnit unit_header(int inst);
  GeneratedUnit unit_source(int inst);
  void atomic_step(int inst, std::string& o);
  void composite_step(int inst, std::string& o);
  void set_absent(Body& b, const std::string& lhs, const Type& t) {
    b.line(lhs + ".present = 0;");
    b.line(lhs + ".value = " + zero(t) + ";");
  }

  const System& sys_;
  const TypeTable& types_;
  const FlatModel& flat_;
  std::vector<const TypeDef*> user_types_;  // dependencies first
  std::vector<std::string> prefix_;         // per instance
  std::vector<std::string> file_;           // per instance, without extension
};

void Gen::order_types() {
  std::set<std::string> done;
  std::function<void(const TypeDef&)> visit = [&](const TypeDef& d) {
    if (!done.insert(d.name).second) return;
    auto dep = [&](const TypeRef& r) {
      if (r.kind != TypeRef::Kind::Named) return;
      if (const TypeDef* x = types_.find_type(r.name)) visit(*x);
    };
    for (const auto& c : d.ctors)
      for (const auto& p : c.payload) dep(p);
    for (const auto& f : d.fields) dep(f.type);
    user_types_.push_back(&d);
  };
  for (const auto& d : sys_.model().types) visit(d);
}

std::size_t Gen::slots(const Type& t) const {
  switch (t.kind) {
    case Type::Kind::Bool:
    case Type::Kind::Int:
    case Type::Kind::Enum: return 1;
    case Type::Kind::Record: {
      std::size_t n = 0;
      for (std::size_t i = 0; i < t.def->fields.size(); ++i) n += slots(types_.field_type(*t.def, i));
      return std::max<std::size_t>(n, 1);
    }
    case Type::Kind::Variant: {
      std::size_t n = 1;
      for (std::size_t c = 0; c < t.def->ctors.size(); ++c)
        for (std::size_t i = 0; i < t.def->ctors[c].payload.size(); ++i) n += slots(types_.payload_type(*t.def, c, i));
      return n;
    }
  }
  return 1;
}

std::size_t Gen::io_slots(int inst, Direction d) const {
  const auto& ports = flat_.instances[inst].spec->ports;
  std::size_t n = 0;
  for (std::size_t p = 0; p < ports.size(); ++p)
    if (ports[p].direction == d) n += msg_slots(port_type(inst, p));
  return std::max<std::size_t>(n, 1);
}

std::size_t Gen::state_slots(int inst) const {
  const Instance& me = flat_.instances[inst];
  std::size_t n = 0;
  if (!me.atomic()) {
    for (int c : me.children) n += state_slots(c);
    return std::max<std::size_t>(n, 1);
  }
  const std::size_t a = sys_.atom_of_instance(inst);
  n = 1;
  for (std::size_t v = 0; v < sys_.behavior(a).vars.size(); ++v) n += slots(sys_.var_type(a, v));
  if (me.spec->causality == Causality::Strong)
    for (std::size_t p = 0; p < me.spec->ports.size(); ++p)
      if (me.spec->ports[p].direction == Direction::Out) n += msg_slots(port_type(inst, p));
  return n;
}

std::string Gen::value(const Value& v, const Type& t) const {
  switch (v.kind) {
    case Value::Kind::Bool: return v.as_bool() ? "1" : "0";
    case Value::Kind::Int: return c_int(v.num);
    case Value::Kind::Enum: return enum_const(*v.type, v.type->literals[static_cast<std::size_t>(v.num)]);
    case Value::Kind::Variant: {
      const auto c = static_cast<std::size_t>(v.num);
      std::string s = "mk_" + v.type->name + "_" + v.type->ctors[c].name + "(";
      for (std::size_t i = 0; i < v.items.size(); ++i)
        s += (i ? ", " : "") + value(v.items[i], types_.payload_type(*v.type, c, i));
      return s + ")";
    }
    case Value::Kind::Record: {
      std::string s = "mk_" + v.type->name + "(";
      for (std::size_t i = 0; i < v.items.size(); ++i) s += (i ? ", " : "") + value(v.items[i], types_.field_type(*v.type, i));
      return s + ")";
    }
  }
  (void)t;
  return "0";
}

GeneratedUnit Gen::types_header(const std::vector<std::string>& first_policy) {
  const Model& m = sys_.model();
  std::string o = "/* Data dictionary of model " + m.name + ". */\n";
  if (!first_policy.empty()) {
    o += "/* Transitions may overlap in:";
    for (const auto& p : first_policy) o += " " + p;
    o += ".\n   Their step functions fire the lowest-declared enabled transition. */\n";
  }
  const std::size_t state = 4 * state_slots(0);
  std::size_t io = 4 * (io_slots(0, Direction::In) + io_slots(0, Direction::Out));
  for (std::size_t i = 0; i < flat_.instances.size(); ++i)
    if (!flat_.instances[i].atomic())
      for (int c : flat_.instances[i].children) io += 4 * (io_slots(c, Direction::In) + io_slots(c, Direction::Out));
  o += "#ifndef SYN_TYPES_H\n#define SYN_TYPES_H\n\n#include <stdint.h>\n\n";
  o += "/* Static storage in bytes: root state, port aggregates of every level,\n   harness line buffer. */\n";
  o += "#define SYN_STATE_BYTES " + std::to_string(state) + "\n";
  o += "#define SYN_IO_BYTES " + std::to_string(io) + "\n";
  o += "#define SYN_LINE_MAX " + std::to_string(kHarnessLineMax) + "\n";
  o += "#define SYN_MEMORY_BOUND " + std::to_string(state + io + kHarnessLineMax) + "\n\n";
  o += "enum { SYN_OK = 0, SYN_DivisionByZero = 1, SYN_RangeViolation = 2, SYN_MatchFailure = 3 };\n\n";
  o += "typedef struct {\n  int32_t kind;\n  int32_t component;\n} syn_error_t;\n\n";
  o += "extern syn_error_t syn_error;\nextern int32_t syn_component;\n\n";
  o += "void syn_fail(int32_t kind);\n";
  o += "int32_t syn_narrow(int64_t v);\n";
  o += "int32_t syn_range(int32_t v, int32_t lo, int32_t hi);\n";
  o += "int32_t syn_div(int32_t a, int32_t b);\n";
  o += "int32_t syn_mod(int32_t a, int32_t b);\n\n";

  for (const TypeDef* d : user_types_) {
    switch (d->kind) {
      case TypeDef::Kind::Bool: break;
      case TypeDef::Kind::BoundedInt:
        o += "typedef int32_t T_" + d->name + "; /* " + std::to_string(d->lo) + " .. " + std::to_string(d->hi) + " */\n\n";
        break;
      case TypeDef::Kind::Enum:
        o += "typedef int32_t T_" + d->name + ";\nenum {";
        for (std::size_t i = 0; i < d->literals.size(); ++i)
          o += (i ? ", " : " ") + enum_const(*d, d->literals[i]) + " = " + std::to_string(i);
        o += " };\n\n";
        break;
      case TypeDef::Kind::Variant: {
        o += "enum {";
        for (std::size_t c = 0; c < d->ctors.size(); ++c)
          o += (c ? ", " : " ") + tag_const(*d, d->ctors[c].name) + " = " + std::to_string(c);
        o += " };\ntypedef struct {\n  int32_t tag;\n";
        for (std::size_t c = 0; c < d->ctors.size(); ++c) {
          if (d->ctors[c].payload.empty()) continue;
          o += "  struct {\n";
          for (std::size_t i = 0; i < d->ctors[c].payload.size(); ++i)
            o += "    " + ctype(types_.payload_type(*d, c, i)) + " p" + std::to_string(i) + ";\n";
          o += "  } c_" + d->ctors[c].name + ";\n";
        }
        o += "} T_" + d->name + ";\n\n";
        break;
      }
      case TypeDef::Kind::Record:
        o += "typedef struct {\n";
        for (std::size_t i = 0; i < d->fields.size(); ++i)
          o += "  " + ctype(types_.field_type(*d, i)) + " f_" + d->fields[i].name + ";\n";
        if (d->fields.empty()) o += "  int32_t unused_;\n";
        o += "} T_" + d->name + ";\n\n";
        break;
    }
  }

  std::vector<std::pair<std::string, std::string>> msgs = {{"Bool", "int32_t"}, {"Int", "int32_t"}};
  for (const TypeDef* d : user_types_)
    if (d->kind == TypeDef::Kind::Enum || d->kind == TypeDef::Kind::Variant || d->kind == TypeDef::Kind::Record)
      msgs.push_back({d->name, "T_" + d->name});
  for (const auto& [s, c] : msgs) o += "typedef struct {\n  int32_t present;\n  " + c + " value;\n} M_" + s + ";\n\n";

  for (const TypeDef* d : user_types_) {
    if (d->kind != TypeDef::Kind::Variant && d->kind != TypeDef::Kind::Record) continue;
    const std::string t = "T_" + d->name;
    o += t + " zero_" + d->name + "(void);\n";
    o += "int32_t eq_" + d->name + "(" + t + " a, " + t + " b);\n";
    if (d->kind == TypeDef::Kind::Record) {
      o += t + " mk_" + d->name + "(";
      for (std::size_t i = 0; i < d->fields.size(); ++i)
        o += (i ? ", " : "") + ctype(types_.field_type(*d, i)) + " f_" + d->fields[i].name;
      o += d->fields.empty() ? "void);\n" : ");\n";
    } else {
      for (std::size_t c = 0; c < d->ctors.size(); ++c) {
        o += t + " mk_" + d->name + "_" + d->ctors[c].name + "(";
        for (std::size_t i = 0; i < d->ctors[c].payload.size(); ++i)
          o += (i ? ", " : "") + ctype(types_.payload_type(*d, c, i)) + " p" + std::to_string(i);
        o += d->ctors[c].payload.empty() ? "void);\n" : ");\n";
      }
    }
  }
  if (!m.funcs.empty()) o += "\n";
  for (const auto& f : m.funcs) {
    o += ctype(types_.resolve_or_throw(f.result)) + " F_" + f.name + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i)
      o += (i ? ", " : "") + ctype(types_.resolve_or_throw(f.params[i].type)) + " v_" + f.params[i].name;
    o += f.params.empty() ? "void);\n" : ");\n";
  }
  o += "\n#endif\n";
  return {"types.h", o, GeneratedUnit::Kind::Types};
}

GeneratedUnit Gen::types_source() {
  std::string o = "#include \"types.h\"\n\n";
  o += "syn_error_t syn_error;\nint32_t syn_component;\n\n";
  o += "void syn_fail(int32_t kind)\n{\n  if (syn_error.kind == SYN_OK) {\n    syn_error.kind = kind;\n"
       "    syn_error.component = syn_component;\n  }\n}\n\n";
  o += "int32_t syn_narrow(int64_t v)\n{\n  if (v < INT32_MIN || v > INT32_MAX) {\n    syn_fail(SYN_RangeViolation);\n"
       "    return 0;\n  }\n  return (int32_t)v;\n}\n\n";
  o += "int32_t syn_range(int32_t v, int32_t lo, int32_t hi)\n{\n  if (v < lo || v > hi) {\n"
       "    syn_fail(SYN_RangeViolation);\n  }\n  return v;\n}\n\n";
  o += "int32_t syn_div(int32_t a, int32_t b)\n{\n  if (b == 0) {\n    syn_fail(SYN_DivisionByZero);\n    return 0;\n  }\n"
       "  return syn_narrow((int64_t)a / (int64_t)b);\n}\n\n";
  o += "int32_t syn_mod(int32_t a, int32_t b)\n{\n  if (b == 0) {\n    syn_fail(SYN_DivisionByZero);\n    return 0;\n  }\n"
       "  return syn_narrow((int64_t)a % (int64_t)b);\n}\n\n";

  for (const TypeDef* d : user_types_) {
    if (d->kind != TypeDef::Kind::Variant && d->kind != TypeDef::Kind::Record) continue;
    const std::string t = "T_" + d->name;
    o += t + " zero_" + d->name + "(void)\n{\n  " + t + " r;\n";
    if (d->kind == TypeDef::Kind::Record) {
      for (std::size_t i = 0; i < d->fields.size(); ++i)
        o += "  r.f_" + d->fields[i].name + " = " + zero(types_.field_type(*d, i)) + ";\n";
      if (d->fields.empty()) o += "  r.unused_ = 0;\n";
    } else {
      o += "  r.tag = 0;\n";
      for (std::size_t c = 0; c < d->ctors.size(); ++c)
        for (std::size_t i = 0; i < d->ctors[c].payload.size(); ++i)
          o += "  r.c_" + d->ctors[c].name + ".p" + std::to_string(i) + " = " + zero(types_.payload_type(*d, c, i)) + ";\n";
    }
    o += "  return r;\n}\n\n";

    o += "int32_t eq_" + d->name + "(" + t + " a, " + t + " b)\n{\n";
    if (d->kind == TypeDef::Kind::Record) {
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < d->fields.size(); ++i) {
        const std::string f = ".f_" + d->fields[i].name;
        parts.push_back(eq("a" + f, "b" + f, types_.field_type(*d, i)));
      }
      if (parts.empty()) {
        o += "  (void)a;\n  (void)b;\n  return 1;\n";
      } else {
        o += "  return ";
        for (std::size_t i = 0; i < parts.size(); ++i) o += (i ? " && " : "") + parts[i];
        o += ";\n";
      }
    } else {
      o += "  if (a.tag != b.tag) {\n    return 0;\n  }\n";
      for (std::size_t c = 0; c < d->ctors.size(); ++c) {
        const auto& ctor = d->ctors[c];
        if (ctor.payload.empty()) continue;
        o += "  if (a.tag == " + tag_const(*d, ctor.name) + ") {\n    return ";
        for (std::size_t i = 0; i < ctor.payload.size(); ++i) {
          const std::string f = ".c_" + ctor.name + ".p" + std::to_string(i);
          o += (i ? " && " : "") + eq("a" + f, "b" + f, types_.payload_type(*d, c, i));
        }
        o += ";\n  }\n";
      }
      o += "  return 1;\n";
    }
    o += "}\n\n";

    if (d->kind == TypeDef::Kind::Record) {
      o += t + " mk_" + d->name + "(";
      for (std::size_t i = 0; i < d->fields.size(); ++i)
        o += (i ? ", " : "") + ctype(types_.field_type(*d, i)) + " f_" + d->fields[i].name;
      o += std::string(d->fields.empty() ? "void" : "") + ")\n{\n  " + t + " r = zero_" + d->name + "();\n";
      for (const auto& f : d->fields) o += "  r.f_" + f.name + " = f_" + f.name + ";\n";
      o += "  return r;\n}\n\n";
    } else {
      for (std::size_t c = 0; c < d->ctors.size(); ++c) {
        const auto& ctor = d->ctors[c];
        o += t + " mk_" + d->name + "_" + ctor.name + "(";
        for (std::size_t i = 0; i < ctor.payload.size(); ++i)
          o += (i ? ", " : "") + ctype(types_.payload_type(*d, c, i)) + " p" + std::to_string(i);
        o += std::string(ctor.payload.empty() ? "void" : "") + ")\n{\n  " + t + " r = zero_" + d->name + "();\n";
        o += "  r.tag = " + tag_const(*d, ctor.name) + ";\n";
        for (std::size_t i = 0; i < ctor.payload.size(); ++i)
          o += "  r.c_" + ctor.name + ".p" + std::to_string(i) + " = p" + std::to_string(i) + ";\n";
        o += "  return r;\n}\n\n";
      }
    }
  }

  for (const auto& f : sys_.model().funcs) {
    int counter = 0;
    Body b{{}, 1, &counter};
    CScope sc;
    std::string head = ctype(types_.resolve_or_throw(f.result)) + " F_" + f.name + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      Type t = types_.resolve_or_throw(f.params[i].type);
      head += (i ? ", " : "") + ctype(t) + " v_" + f.params[i].name;
      sc.push_back({f.params[i].name, "v_" + f.params[i].name, t});
      b.line("(void)v_" + f.params[i].name + ";");
    }
    head += f.params.empty() ? "void)" : ")";
    CVal r = lower(*f.body, sc, b);
    b.line("return " + checked(r, types_.resolve_or_throw(f.result), b) + ";");
    o += head + "\n{\n" + b.text + "}\n\n";
  }
  return {"types.c", o, GeneratedUnit::Kind::Types};
}

std::string Gen::checked(const CVal& v, const Type& slot, Body& b) {
  if (!narrow(slot)) return v.c;
  std::string t = b.temp();
  b.line("int32_t " + t + " = syn_range(" + v.c + ", " + c_int(slot.lo) + ", " + c_int(slot.hi) + ");");
  return t;
}

CVal Gen::lower(const Expr& e, CScope& sc, Body& b) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return {c_int(e.number), Type::integer()};
    case Expr::Kind::BoolLit: return {e.number ? "1" : "0", Type::boolean()};
    case Expr::Kind::Name:
    case Expr::Kind::Call: {
      if (e.kind == Expr::Kind::Name)
        for (auto it = sc.rbegin(); it != sc.rend(); ++it)
          if (it->name == e.name) return {it->c, it->t};
      if (const FuncDef* f = types_.find_func(e.name)) {
        std::vector<std::string> args;
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          CVal a = lower(*e.args[i], sc, b);
          Type slot = types_.resolve_or_throw(f->params[i].type);
          std::string t = b.temp();
          b.line(ctype(slot) + " " + t + " = " + (narrow(slot) ? checked(a, slot, b) : a.c) + ";");
          args.push_back(t);
        }
        Type rt = types_.resolve_or_throw(f->result);
        std::string t = b.temp();
        std::string call = "F_" + f->name + "(";
        for (std::size_t i = 0; i < args.size(); ++i) call += (i ? ", " : "") + args[i];
        b.line(ctype(rt) + " " + t + " = " + call + ");");
        return {t, rt.is_int() ? Type::integer() : rt};
      }
      const CtorInfo* ci = types_.find_ctor(e.name);
      if (!ci) throw CodegenError("unknown name " + e.name);
      const TypeDef& d = *ci->type;
      Type dt = types_.resolve_or_throw(TypeRef::named(d.name));
      if (d.kind == TypeDef::Kind::Enum) return {enum_const(d, d.literals[ci->index]), dt};
      std::string call = "mk_" + d.name + "_" + d.ctors[ci->index].name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        CVal a = lower(*e.args[i], sc, b);
        Type slot = types_.payload_type(d, ci->index, i);
        std::string t = b.temp();
        b.line(ctype(slot) + " " + t + " = " + checked(a, slot, b) + ";");
        call += (i ? ", " : "") + t;
      }
      return {call + ")", dt};
    }
    case Expr::Kind::Record: {
      const TypeDef& d = *types_.find_type(e.name);
      std::string call = "mk_" + d.name + "(";
      for (std::size_t i = 0; i < d.fields.size(); ++i)
        for (const auto& fi : e.inits) {
          if (fi.name != d.fields[i].name) continue;
          CVal a = lower(*fi.value, sc, b);
          Type slot = types_.field_type(d, i);
          std::string t = b.temp();
          b.line(ctype(slot) + " " + t + " = " + checked(a, slot, b) + ";");
          call += (i ? ", " : "") + t;
        }
      return {call + ")", types_.resolve_or_throw(TypeRef::named(d.name))};
    }
    case Expr::Kind::Field: {
      CVal base = lower(*e.args[0], sc, b);
      const TypeDef& d = *base.t.def;
      for (std::size_t i = 0; i < d.fields.size(); ++i)
        if (d.fields[i].name == e.name) return {base.c + ".f_" + e.name, types_.field_type(d, i)};
      throw CodegenError("no field " + e.name);
    }
    case Expr::Kind::Match: return match(e, sc, b);
    case Expr::Kind::If: {
      CVal c = lower(*e.args[0], sc, b);
      Body tb = b.child(), eb = b.child();
      CVal x = lower(*e.args[1], sc, tb);
      CVal y = lower(*e.args[2], sc, eb);
      Type rt = x.t.is_int() ? Type::integer() : x.t;
      std::string r = b.temp();
      b.line(ctype(rt) + " " + r + " = " + zero(rt) + ";");
      b.line("if (" + c.c + ") {");
      b.text += tb.text;
      b.raw_line(b.depth + 1, r + " = " + x.c + ";");
      b.line("} else {");
      b.text += eb.text;
      b.raw_line(b.depth + 1, r + " = " + y.c + ";");
      b.line("}");
      return {r, rt};
    }
    case Expr::Kind::Unary: {
      CVal a = lower(*e.args[0], sc, b);
      if (e.unop == UnaryOp::Not) return {"(!" + a.c + ")", Type::boolean()};
      std::string t = b.temp();
      b.line("int32_t " + t + " = syn_narrow(-(int64_t)" + a.c + ");");
      return {t, Type::integer()};
    }
    case Expr::Kind::Binary: return binary(e, sc, b);
    default: break;
  }
  throw CodegenError("observation expressions have no generated form");
}

CVal Gen::binary(const Expr& e, CScope& sc, Body& b) {
  CVal a = lower(*e.args[0], sc, b);
  if (e.binop == BinaryOp::And || e.binop == BinaryOp::Or) {
    std::string r = b.temp();
    b.line("int32_t " + r + " = " + a.c + ";");
    Body rb = b.child();
    CVal y = lower(*e.args[1], sc, rb);
    b.line(std::string("if (") + (e.binop == BinaryOp::And ? r : "!" + r) + ") {");
    b.text += rb.text;
    b.raw_line(b.depth + 1, r + " = " + y.c + ";");
    b.line("}");
    return {r, Type::boolean()};
  }
  CVal y = lower(*e.args[1], sc, b);
  auto cmp = [&](const char* op) { return CVal{"(" + a.c + " " + op + " " + y.c + ")", Type::boolean()}; };
  auto arith = [&](const std::string& expr) {
    std::string t = b.temp();
    b.line("int32_t " + t + " = " + expr + ";");
    return CVal{t, Type::integer()};
  };
  switch (e.binop) {
    case BinaryOp::Eq: return {eq(a.c, y.c, a.t), Type::boolean()};
    case BinaryOp::Ne: return {"(!" + eq(a.c, y.c, a.t) + ")", Type::boolean()};
    case BinaryOp::Lt: return cmp("<");
    case BinaryOp::Le: return cmp("<=");
    case BinaryOp::Gt: return cmp(">");
    case BinaryOp::Ge: return cmp(">=");
    case BinaryOp::Add: return arith("syn_narrow((int64_t)" + a.c + " + (int64_t)" + y.c + ")");
    case BinaryOp::Sub: return arith("syn_narrow((int64_t)" + a.c + " - (int64_t)" + y.c + ")");
    case BinaryOp::Mul: return arith("syn_narrow((int64_t)" + a.c + " * (int64_t)" + y.c + ")");
    case BinaryOp::Div: return arith("syn_div(" + a.c + ", " + y.c + ")");
    case BinaryOp::Mod: return arith("syn_mod(" + a.c + ", " + y.c + ")");
    default: break;
  }
  throw CodegenError("unknown operator");
}

CVal Gen::match(const Expr& e, CScope& sc, Body& b) {
  CVal s = lower(*e.args[0], sc, b);
  const TypeDef& d = *s.t.def;
  const std::string st = b.temp();
  b.line(ctype(s.t) + " " + st + " = " + s.c + ";");
  std::vector<std::string> heads, texts, vals;
  Type rt;
  bool wildcard = false;
  for (std::size_t k = 0; k < e.arms.size() && !wildcard; ++k) {
    const auto& arm = e.arms[k];
    const auto mark = sc.size();
    if (arm.ctor.empty()) {
      wildcard = true;
      heads.push_back(k == 0 ? "{" : "} else {");
    } else if (d.kind == TypeDef::Kind::Enum) {
      heads.push_back(std::string(k ? "} else if (" : "if (") + st + " == " + enum_const(d, arm.ctor) + ") {");
    } else {
      heads.push_back(std::string(k ? "} else if (" : "if (") + st + ".tag == " + tag_const(d, arm.ctor) + ") {");
      const std::size_t c = types_.find_ctor(arm.ctor)->index;
      for (std::size_t i = 0; i < arm.binds.size(); ++i)
        sc.push_back({arm.binds[i], st + ".c_" + arm.ctor + ".p" + std::to_string(i), types_.payload_type(d, c, i)});
    }
    Body ab = b.child();
    CVal v = lower(*arm.body, sc, ab);
    sc.resize(mark);
    if (k == 0) rt = v.t.is_int() ? Type::integer() : v.t;
    texts.push_back(ab.text);
    vals.push_back(v.c);
  }
  const std::string r = b.temp();
  b.line(ctype(rt) + " " + r + " = " + zero(rt) + ";");
  for (std::size_t k = 0; k < heads.size(); ++k) {
    b.line(heads[k]);
    b.text += texts[k];
    b.raw_line(b.depth + 1, r + " = " + vals[k] + ";");
  }
  if (!wildcard) {
    b.line("} else {");
    b.raw_line(b.depth + 1, "syn_fail(SYN_MatchFailure);");
  }
  b.line("}");
  return {r, rt};
}

void Gen::name_units() {
  const std::size_t n = flat_.instances.size();
  std::map<std::string, int> uses;
  for (const auto& inst : flat_.instances) ++uses[inst.spec->name];
  for (std::size_t i = 0; i < n; ++i) {
    const Instance& inst = flat_.instances[i];
    prefix_.push_back(cid(inst.path));
    const std::string& name = inst.spec->name;
    const bool clash = uses[name] > 1 || name == "types" || name == "harness";
    file_.push_back(clash ? cid(inst.path) : name);
  }
}

GeneratedUnit Gen::unit_header(int inst) {
  const Instance& me = flat_.instances[inst];
  const std::string& px = prefix(inst);
  std::string guard = "SYN_" + px + "_H";
  std::transform(guard.begin(), guard.end(), guard.begin(), [](unsigned char c) { return std::toupper(c); });
  std::string o = "/* Component " + me.path + " (" + to_string(me.spec->causality) + "ly causal). */\n";
  o += "#ifndef " + guard + "\n#define " + guard + "\n\n#include \"types.h\"\n";
  for (int c : me.children) o += "#include \"" + file_[static_cast<std::size_t>(c)] + ".h\"\n";
  o += "\n";
  for (Direction d : {Direction::In, Direction::Out}) {
    o += "typedef struct {\n";
    bool any = false;
    for (std::size_t p = 0; p < me.spec->ports.size(); ++p) {
      if (me.spec->ports[p].direction != d) continue;
      o += "  " + mtype(port_type(inst, p)) + " p_" + me.spec->ports[p].name + ";\n";
      any = true;
    }
    if (!any) o += "  int32_t unused_;\n";
    o += "} " + px + (d == Direction::In ? "_in;\n\n" : "_out;\n\n");
  }
  o += "typedef struct {\n";
  if (me.atomic()) {
    const std::size_t a = sys_.atom_of_instance(inst);
    o += "  int32_t control;\n";
    const auto& vars = sys_.behavior(a).vars;
    for (std::size_t v = 0; v < vars.size(); ++v) o += "  " + ctype(sys_.var_type(a, v)) + " v_" + vars[v].name + ";\n";
    if (me.spec->causality == Causality::Strong)
      for (std::size_t p = 0; p < me.spec->ports.size(); ++p)
        if (me.spec->ports[p].direction == Direction::Out)
          o += "  " + mtype(port_type(inst, p)) + " b_" + me.spec->ports[p].name + ";\n";
  } else {
    for (int c : me.children) o += "  " + prefix(c) + "_state s_" + flat_.instances[c].spec->name + ";\n";
    if (me.children.empty()) o += "  int32_t unused_;\n";
  }
  o += "} " + px + "_state;\n\n";
  o += "void " + px + "_init(" + px + "_state *st);\n";
  o += "void " + px + "_peek(const " + px + "_state *st, " + px + "_out *out);\n";
  o += "void " + px + "_step(const " + px + "_in *in, " + px + "_out *out, " + px + "_state *st);\n";
  o += "\n#endif\n";
  return {file_[static_cast<std::size_t>(inst)] + ".h", o, GeneratedUnit::Kind::ComponentStep};
}

void Gen::atomic_step(int inst, std::string& o) {
  const Instance& me = flat_.instances[inst];
  const std::string& px = prefix(inst);
  const std::size_t a = sys_.atom_of_instance(inst);
  const Automaton& au = sys_.behavior(a);
  const auto& ports = me.spec->ports;
  const bool strong = me.spec->causality == Causality::Strong;
  const AtomicState init = sys_.init_atomic(a);

  o += "enum {";
  for (std::size_t s = 0; s < au.states.size(); ++s) o += (s ? ", " : " ") + std::string("S_") + au.states[s].name + " = " + std::to_string(s);
  o += " };\n\n";

  o += "void " + px + "_init(" + px + "_state *st)\n{\n";
  o += "  st->control = S_" + au.states[au.initial].name + ";\n";
  for (std::size_t v = 0; v < au.vars.size(); ++v)
    o += "  st->v_" + au.vars[v].name + " = " + value(init.vars[v], sys_.var_type(a, v)) + ";\n";
  if (strong)
    for (std::size_t p = 0; p < ports.size(); ++p) {
      if (ports[p].direction != Direction::Out) continue;
      const Type t = port_type(inst, p);
      o += "  st->b_" + ports[p].name + ".present = " + (init.buffer[p] ? "1" : "0") + ";\n";
      o += "  st->b_" + ports[p].name + ".value = " + (init.buffer[p] ? value(*init.buffer[p], t) : zero(t)) + ";\n";
    }
  o += "}\n\n";

  o += "void " + px + "_peek(const " + px + "_state *st, " + px + "_out *out)\n{\n  (void)st;\n  (void)out;\n";
  for (std::size_t p = 0; p < ports.size(); ++p) {
    if (ports[p].direction != Direction::Out) continue;
    if (strong) {
      o += "  out->p_" + ports[p].name + " = st->b_" + ports[p].name + ";\n";
    } else {
      o += "  out->p_" + ports[p].name + ".present = 0;\n";
      o += "  out->p_" + ports[p].name + ".value = " + zero(port_type(inst, p)) + ";\n";
    }
  }
  o += "}\n\n";

  int counter = 0;
  Body b{{}, 1, &counter};
  const std::string res = strong ? "nx." : "out->";
  if (strong) b.line(px + "_out nx;");
  const std::size_t n = au.transitions.size();
  for (std::size_t k = 0; k < n; ++k) b.line("int32_t en" + std::to_string(k) + " = 0;");
  b.line("(void)in;");
  b.line("syn_component = " + std::to_string(a) + ";");
  for (std::size_t p = 0; p < ports.size(); ++p)
    if (ports[p].direction == Direction::Out) set_absent(b, res + "p_" + ports[p].name, port_type(inst, p));

  CScope base;
  for (std::size_t v = 0; v < au.vars.size(); ++v) base.push_back({au.vars[v].name, "st->v_" + au.vars[v].name, sys_.var_type(a, v)});
  std::vector<CScope> scopes(n, base);
  EvalContext ctx{types_, nullptr};
  for (std::size_t k = 0; k < n; ++k) {
    const Transition& tr = au.transitions[k];
    std::string cond = "st->control == S_" + tr.source;
    for (const auto& pat : tr.inputs) {
      const auto p = static_cast<std::size_t>(port_index(*me.spec, pat.port));
      const Type t = port_type(inst, p);
      const std::string m = "in->p_" + pat.port;
      switch (pat.kind) {
        case Pattern::Kind::Absent: cond += " && !" + m + ".present"; break;
        case Pattern::Kind::Present: cond += " && " + m + ".present"; break;
        case Pattern::Kind::Bind:
          cond += " && " + m + ".present";
          scopes[k].push_back({pat.var, m + ".value", t});
          break;
        case Pattern::Kind::Literal: {
          Env none;
          cond += " && " + m + ".present && " + eq(m + ".value", value(eval_expr(*pat.literal, none, ctx), t), t);
          break;
        }
      }
    }
    b.line("if (" + cond + ") {");
    Body gb = b.child();
    CVal g = tr.guard ? lower(*tr.guard, scopes[k], gb) : CVal{"1", Type::boolean()};
    b.text += gb.text;
    b.raw_line(b.depth + 1, "en" + std::to_string(k) + " = " + g.c + ";");
    b.line("}");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Transition& tr = au.transitions[k];
    b.line(std::string(k ? "} else if (en" : "if (en") + std::to_string(k) + ") {");
    Body fb = b.child();
    for (const auto& out : tr.outputs) {
      if (!out.value) continue;
      const auto p = static_cast<std::size_t>(port_index(*me.spec, out.port));
      const Type t = port_type(inst, p);
      CVal v = lower(*out.value, scopes[k], fb);
      std::string x = checked(v, t, fb);
      fb.line(res + "p_" + out.port + ".present = 1;");
      fb.line(res + "p_" + out.port + ".value = " + x + ";");
    }
    std::vector<std::pair<std::string, std::string>> assigns;
    for (const auto& u : tr.updates)
      for (std::size_t v = 0; v < au.vars.size(); ++v) {
        if (au.vars[v].name != u.var) continue;
        const Type t = sys_.var_type(a, v);
        CVal x = lower(*u.value, scopes[k], fb);
        std::string tmp = fb.temp();
        fb.line(ctype(t) + " " + tmp + " = " + checked(x, t, fb) + ";");
        assigns.push_back({"st->v_" + u.var, tmp});
      }
    for (const auto& [lhs, rhs] : assigns) fb.line(lhs + " = " + rhs + ";");
    if (tr.target != tr.source) fb.line("st->control = S_" + tr.target + ";");
    b.text += fb.text;
  }
  if (n > 0) b.line("}");
  if (strong)
    for (std::size_t p = 0; p < ports.size(); ++p) {
      if (ports[p].direction != Direction::Out) continue;
      b.line("out->p_" + ports[p].name + " = st->b_" + ports[p].name + ";");
      b.line("st->b_" + ports[p].name + " = nx.p_" + ports[p].name + ";");
    }
  o += "void " + px + "_step(const " + px + "_in *in, " + px + "_out *out, " + px + "_state *st)\n{\n" + b.text + "}\n";
}

void Gen::composite_step(int inst, std::string& o) {
  const Instance& me = flat_.instances[inst];
  const std::string& px = prefix(inst);
  const Composite& comp = *me.spec->composite();
  auto child_name = [&](int c) { return flat_.instances[c].spec->name; };
  auto child_of = [&](const std::string& name) {
    for (int c : me.children)
      if (child_name(c) == name) return c;
    return -1;
  };
  auto out_port = [&](const PortSpec& p) { return p.direction == Direction::Out; };

  o += "void " + px + "_init(" + px + "_state *st)\n{\n  (void)st;\n";
  for (int c : me.children) o += "  " + prefix(c) + "_init(&st->s_" + child_name(c) + ");\n";
  o += "}\n\n";

  // Where a child input or own output reads from: "o_<child>.p_<port>",
  // "in->p_<port>" or empty for absence.
  auto wire = [&](const std::string& comp_name, const std::string& port) -> std::string {
    for (const auto& ch : comp.channels) {
      if (ch.to.component != comp_name || ch.to.port != port) continue;
      int from = child_of(ch.from.component);
      if (from < 0 || ch.from.component.empty()) return {};
      const auto* fp = flat_.instances[from].spec->find_port(ch.from.port);
      if (!fp || !out_port(*fp)) return {};
      return "o_" + ch.from.component + ".p_" + ch.from.port;
    }
    for (const auto& d : comp.delegations) {
      if (d.to.component != comp_name || d.to.port != port) continue;
      if (comp_name.empty()) {
        // Child output delegated to our output.
        int from = child_of(d.from.component);
        if (from < 0 || d.from.component.empty()) return {};
        const auto* fp = flat_.instances[from].spec->find_port(d.from.port);
        if (!fp || !out_port(*fp)) return {};
        return "o_" + d.from.component + ".p_" + d.from.port;
      }
      if (!d.from.component.empty()) return {};
      const auto* pp = me.spec->find_port(d.from.port);
      if (!pp || out_port(*pp)) return {};
      return "in->p_" + d.from.port;
    }
    return {};
  };
  auto assign_outputs = [&](Body& b, const std::string& target, bool peek) {
    for (std::size_t p = 0; p < me.spec->ports.size(); ++p) {
      const auto& port = me.spec->ports[p];
      if (!out_port(port)) continue;
      std::string src = wire("", port.name);
      if (src.empty() || (peek && src.rfind("in->", 0) == 0))
        set_absent(b, target + "p_" + port.name, port_type(inst, p));
      else
        b.line(target + "p_" + port.name + " = " + src + ";");
    }
  };

  int counter = 0;
  Body pb{{}, 1, &counter};
  for (int c : me.children) pb.line(prefix(c) + "_out o_" + child_name(c) + ";");
  pb.line("(void)st;");
  pb.line("(void)out;");
  for (int c : me.children) pb.line(prefix(c) + "_peek(&st->s_" + child_name(c) + ", &o_" + child_name(c) + ");");
  assign_outputs(pb, "out->", true);
  o += "void " + px + "_peek(const " + px + "_state *st, " + px + "_out *out)\n{\n" + pb.text + "}\n\n";

  // Children in schedule order.
  std::vector<int> order;
  for (int ii : *flat_.schedule) {
    int c = ii;
    while (c >= 0 && flat_.instances[c].parent != inst) c = flat_.instances[c].parent;
    if (c >= 0 && std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
  }
  for (int c : me.children)
    if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);

  Body b{{}, 1, &counter};
  for (int c : me.children) {
    b.line(prefix(c) + "_in i_" + child_name(c) + ";");
    b.line(prefix(c) + "_out o_" + child_name(c) + ";");
  }
  b.line("(void)in;");
  for (int c : me.children) b.line(prefix(c) + "_peek(&st->s_" + child_name(c) + ", &o_" + child_name(c) + ");");
  for (int c : order) {
    const Instance& ci = flat_.instances[c];
    bool any = false;
    for (std::size_t p = 0; p < ci.spec->ports.size(); ++p) {
      const auto& port = ci.spec->ports[p];
      if (out_port(port)) continue;
      any = true;
      const std::string lhs = "i_" + child_name(c) + ".p_" + port.name;
      std::string src = wire(child_name(c), port.name);
      if (src.empty())
        set_absent(b, lhs, port_type(c, p));
      else
        b.line(lhs + " = " + src + ";");
    }
    if (!any) b.line("i_" + child_name(c) + ".unused_ = 0;");
    b.line(prefix(c) + "_step(&i_" + child_name(c) + ", &o_" + child_name(c) + ", &st->s_" + child_name(c) + ");");
  }
  assign_outputs(b, "out->", false);
  o += "void " + px + "_step(const " + px + "_in *in, " + px + "_out *out, " + px + "_state *st)\n{\n" + b.text + "}\n";
}

GeneratedUnit Gen::unit_source(int inst) {
  const Instance& me = flat_.instances[inst];
  std::string o = "#include \"" + file_[static_cast<std::size_t>(inst)] + ".h\"\n\n";
  if (me.atomic()) {
    if (sys_.behavior(sys_.atom_of_instance(inst)).transitions.size() > 1)
      o += "/* When several transitions are enabled the lowest-declared one fires. */\n";
    atomic_step(inst, o);
  } else {
    composite_step(inst, o);
  }
  return {file_[static_cast<std::size_t>(inst)] + ".c", o, GeneratedUnit::Kind::ComponentStep};
}

std::vector<GeneratedUnit> Gen::units(CheckReport* notes) {
  std::vector<std::string> first_policy;
  CheckReport det = check_determinism(sys_.model());
  for (const auto& f : det.findings) {
    if (f.code != "PossibleNonDeterminism") continue;
    if (std::find(first_policy.begin(), first_policy.end(), f.path) == first_policy.end()) first_policy.push_back(f.path);
    if (notes)
      notes->add(Severity::Warning, "PossibleNonDeterminism", f.path, f.pos,
                 "generated code fires the lowest-declared enabled transition: " + f.message);
  }
  std::vector<GeneratedUnit> out;
  out.push_back(types_header(first_policy));
  out.push_back(types_source());
  for (std::size_t i = 0; i < flat_.instances.size(); ++i) {
    out.push_back(unit_header(static_cast<int>(i)));
    out.push_back(unit_source(static_cast<int>(i)));
  }
  return out;
}

GeneratedUnit Gen::harness() {
  const ComponentSpec& root = sys_.model().root;
  const std::string& px = prefix(0);
  std::vector<std::size_t> ins, outs;
  for (std::size_t p = 0; p < root.ports.size(); ++p) (root.ports[p].direction == Direction::In ? ins : outs).push_back(p);

  std::string o = "/* Reads a stimulus file, steps " + root.name + " once per row and prints the trace. */\n";
  o += "#include <stdio.h>\n#include <stdint.h>\n\n#include \"types.h\"\n#include \"" + file_[0] + ".h\"\n\n";
  o += "typedef char syn_state_fits[(sizeof(" + px + "_state) == SYN_STATE_BYTES) ? 1 : -1];\n";
  o += "typedef char syn_io_fits[(sizeof(" + px + "_in) + sizeof(" + px + "_out) <= SYN_IO_BYTES) ? 1 : -1];\n\n";
  o += "static char line[SYN_LINE_MAX];\nstatic int32_t line_len;\nstatic int32_t pos;\nstatic int32_t field_end;\n"
       "static int32_t bad;\n";
  o += "static " + px + "_state st;\nstatic " + px + "_in in;\nstatic " + px + "_out out;\n\n";
  o += "static const char *const kinds[4] = {\"Ok\", \"DivisionByZero\", \"RangeViolation\", \"MatchFailure\"};\n";
  o += "static const char *const paths[" + std::to_string(sys_.atom_count()) + "] = {";
  for (std::size_t a = 0; a < sys_.atom_count(); ++a) o += (a ? ", " : "") + c_str(sys_.atom_instance(a).path);
  o += "};\n";
  o += "static const char *const problems[7] = {\"\", \"SyntaxError\", \"NonContiguousTicks\", \"UnknownPort\", "
       "\"DuplicatePort\", \"TypeMismatch\", \"MissingPort\"};\n\n";

  // Types reachable from the ports, for reading (inputs) and printing (all).
  std::set<std::string> rd, pr;
  std::function<void(const Type&, std::set<std::string>&)> reach = [&](const Type& t, std::set<std::string>& into) {
    if (!into.insert(sort(t)).second || !t.def) return;
    const TypeDef& d = *t.def;
    for (std::size_t c = 0; c < d.ctors.size(); ++c)
      for (std::size_t i = 0; i < d.ctors[c].payload.size(); ++i) reach(types_.payload_type(d, c, i), into);
    for (std::size_t i = 0; i < d.fields.size(); ++i) reach(types_.field_type(d, i), into);
  };
  for (std::size_t p : ins) reach(port_type(0, p), rd);
  for (std::size_t p = 0; p < root.ports.size(); ++p) reach(port_type(0, p), pr);
  std::set<std::string> used = {"read_line", "find_char", "put_i64"};
  bool words = rd.count("Bool") > 0, brackets = false;
  for (const TypeDef* d : user_types_) {
    if (!rd.count(d->name)) continue;
    words = words || d->kind != TypeDef::Kind::BoundedInt;
    brackets = brackets || d->kind == TypeDef::Kind::Record;
    for (const auto& c : d->ctors) brackets = brackets || !c.payload.empty();
  }
  if (!ins.empty() || words) used.insert("span_is");
  if (rd.count("Int")) used.insert("rd_int");
  if (rd.count("Bool")) used.insert("rd_Bool");
  if (words) used.insert({"read_word", "ident_end"});
  if (brackets) used.insert("expect");
  if (brackets || rd.count("Int")) used.insert("peek");
  if (pr.count("Bool")) used.insert("pr_Bool");
  if (pr.count("Int")) used.insert("pr_Int");

  // Fixed helpers, emitted only when used so the unit compiles warning-free.
  const std::vector<std::pair<std::string, std::string>> helpers = {
      {"read_line", R"(/* Length of the next line, -1 at end of input, -2 when too long. */
static int32_t read_line(FILE *f)
{
  int32_t i;
  for (i = 0; i < SYN_LINE_MAX; i++) {
    int c = fgetc(f);
    if (c == EOF) {
      return i == 0 ? -1 : i;
    }
    if (c == '\n') {
      return i;
    }
    line[i] = (char)c;
  }
  return -2;
}

)"},
      {"peek", R"(static int32_t peek(void)
{
  return pos < field_end ? line[pos] : 0;
}

)"},
      {"expect", R"(static void expect(int32_t c)
{
  if (peek() != c) {
    bad = 1;
    return;
  }
  pos++;
}

)"},
      {"ident_end", R"(static int32_t ident_end(void)
{
  int32_t i;
  for (i = pos; i < field_end; i++) {
    int32_t c = line[i];
    int32_t alpha = c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (!alpha && !(i > pos && c >= '0' && c <= '9')) {
      break;
    }
  }
  return i;
}

)"},
      {"span_is", R"(static int32_t span_is(int32_t s, int32_t e, const char *w)
{
  int32_t i;
  for (i = 0; i < e - s; i++) {
    if (w[i] == 0 || w[i] != line[s + i]) {
      return 0;
    }
  }
  return w[e - s] == 0;
}

)"},
      {"find_char", R"(static int32_t find_char(int32_t from, int32_t to, int32_t c)
{
  int32_t i;
  for (i = from; i < to; i++) {
    if (line[i] == c) {
      return i;
    }
  }
  return -1;
}

)"},
      {"read_word", R"(static int32_t read_word(void)
{
  int32_t s = pos;
  pos = ident_end();
  return s;
}

)"},
      {"rd_int", R"(static int32_t rd_int(int32_t lo, int32_t hi)
{
  int64_t v = 0;
  int32_t neg = 0;
  int32_t digits = 0;
  int32_t i;
  if (peek() == '-') {
    neg = 1;
    pos++;
  }
  for (i = 0; i < SYN_LINE_MAX; i++) {
    int32_t c = peek();
    if (c < '0' || c > '9') {
      break;
    }
    if (v < 100000000000LL) {
      v = v * 10 + (c - '0');
    }
    digits++;
    pos++;
  }
  if (neg) {
    v = -v;
  }
  if (digits == 0 || v < lo || v > hi) {
    bad = 1;
    return 0;
  }
  return (int32_t)v;
}

)"},
      {"rd_Bool", R"(static int32_t rd_Bool(void)
{
  int32_t s = read_word();
  if (span_is(s, pos, "true")) {
    return 1;
  }
  if (!span_is(s, pos, "false")) {
    bad = 1;
  }
  return 0;
}

)"},
      {"put_i64", R"(static void put_i64(int64_t v)
{
  char buf[24];
  int32_t n = 0;
  int32_t i;
  uint64_t u = v < 0 ? (uint64_t)(-(v + 1)) + 1u : (uint64_t)v;
  if (v < 0) {
    putchar('-');
  }
  for (i = 0; i < 24; i++) {
    buf[n] = (char)('0' + (int32_t)(u % 10u));
    n++;
    u = u / 10u;
    if (u == 0u) {
      break;
    }
  }
  for (i = 0; i < n; i++) {
    putchar(buf[n - 1 - i]);
  }
}

)"},
      {"pr_Bool", R"(static void pr_Bool(int32_t v)
{
  fputs(v ? "true" : "false", stdout);
}

)"},
      {"pr_Int", R"(static void pr_Int(int32_t v)
{
  put_i64(v);
}

)"},
  };
  for (const auto& [name, text] : helpers)
    if (used.count(name)) o += text;

  // Readers and printers per user type, dependencies first.
  auto reader = [&](const Type& t) -> std::string {
    if (t.kind == Type::Kind::Bool) return "rd_Bool()";
    if (t.kind == Type::Kind::Int) return "rd_int(" + c_int(t.lo) + ", " + c_int(t.hi) + ")";
    return "rd_" + t.def->name + "()";
  };
  auto printer = [&](const Type& t, const std::string& v) -> std::string {
    if (t.kind == Type::Kind::Bool) return "pr_Bool(" + v + ");";
    if (t.kind == Type::Kind::Int) return "pr_Int(" + v + ");";
    return "pr_" + t.def->name + "(" + v + ");";
  };
  for (const TypeDef* d : user_types_) {
    const std::string t = "T_" + d->name;
    const bool want_rd = rd.count(d->name) > 0, want_pr = pr.count(d->name) > 0;
    if (!want_rd && !want_pr) continue;
    if (d->kind == TypeDef::Kind::Enum) {
      o += "static const char *const names_" + d->name + "[" + std::to_string(d->literals.size()) + "] = {";
      for (std::size_t i = 0; i < d->literals.size(); ++i) o += (i ? ", " : "") + c_str(d->literals[i]);
      o += "};\n\n";
      if (want_rd) {
        o += "static " + t + " rd_" + d->name + "(void)\n{\n  int32_t s = read_word();\n  int32_t i;\n";
        o += "  for (i = 0; i < " + std::to_string(d->literals.size()) + "; i++) {\n";
        o += "    if (span_is(s, pos, names_" + d->name + "[i])) {\n      return i;\n    }\n  }\n  bad = 1;\n  return 0;\n}\n\n";
      }
      if (want_pr) o += "static void pr_" + d->name + "(" + t + " v)\n{\n  fputs(names_" + d->name + "[v], stdout);\n}\n\n";
    } else if (d->kind == TypeDef::Kind::Variant) {
      if (want_rd) {
        o += "static " + t + " rd_" + d->name + "(void)\n{\n  int32_t s = read_word();\n";
        for (std::size_t c = 0; c < d->ctors.size(); ++c) {
          const auto& ctor = d->ctors[c];
          o += "  if (span_is(s, pos, " + c_str(ctor.name) + ")) {\n";
          std::string args;
          if (!ctor.payload.empty()) {
            o += "    expect('(');\n";
            for (std::size_t i = 0; i < ctor.payload.size(); ++i) {
              const Type pt = types_.payload_type(*d, c, i);
              if (i) o += "    expect(',');\n";
              o += "    " + ctype(pt) + " a" + std::to_string(i) + " = " + reader(pt) + ";\n";
              args += (i ? ", a" : "a") + std::to_string(i);
            }
            o += "    expect(')');\n";
          }
          o += "    return mk_" + d->name + "_" + ctor.name + "(" + args + ");\n  }\n";
      }
      o += "  bad = 1;\n  return zero_" + d->name + "();\n}\n\n";
      }
      if (want_pr) {
        o += "static void pr_" + d->name + "(" + t + " v)\n{\n";
        for (std::size_t c = 0; c < d->ctors.size(); ++c) {
          const auto& ctor = d->ctors[c];
          o += "  if (v.tag == " + tag_const(*d, ctor.name) + ") {\n    fputs(" + c_str(ctor.name) + ", stdout);\n";
          if (!ctor.payload.empty()) {
            o += "    putchar('(');\n";
            for (std::size_t i = 0; i < ctor.payload.size(); ++i) {
              if (i) o += "    putchar(',');\n";
              o += "    " + printer(types_.payload_type(*d, c, i), "v.c_" + ctor.name + ".p" + std::to_string(i)) + "\n";
            }
            o += "    putchar(')');\n";
          }
          o += "  }\n";
      }
      o += "}\n\n";
      }
    } else if (d->kind == TypeDef::Kind::Record) {
      if (want_rd) {
        o += "static " + t + " rd_" + d->name + "(void)\n{\n  " + t + " r = zero_" + d->name + "();\n  int32_t s;\n";
        o += "  expect('{');\n";
        for (std::size_t i = 0; i < d->fields.size(); ++i) {
          if (i) o += "  expect(',');\n";
          o += "  s = read_word();\n  if (!span_is(s, pos, " + c_str(d->fields[i].name) + ")) {\n    bad = 1;\n  }\n";
          o += "  expect('=');\n  r.f_" + d->fields[i].name + " = " + reader(types_.field_type(*d, i)) + ";\n";
      }
      o += "  expect('}');\n  return r;\n}\n\n";
      }
      if (want_pr) {
        o += "static void pr_" + d->name + "(" + t + " v)\n{\n  (void)v;\n  putchar('{');\n";
        for (std::size_t i = 0; i < d->fields.size(); ++i) {
          o += std::string("  fputs(") + c_str((i ? "," : "") + d->fields[i].name + "=") + ", stdout);\n";
          o += "  " + printer(types_.field_type(*d, i), "v.f_" + d->fields[i].name) + "\n";
      }
      o += "  putchar('}');\n}\n\n";
      }
    }
  }

  // Row parser.
  const std::size_t nin = std::max<std::size_t>(ins.size(), 1);
  o += "/* 0, or an index into problems. */\nstatic int32_t parse_row(int64_t tick)\n{\n";
  o += "  int32_t seen[" + std::to_string(nin) + "];\n  int32_t i;\n  int64_t t = 0;\n";
  o += "  for (i = 0; i < " + std::to_string(nin) + "; i++) {\n    seen[i] = 0;\n  }\n";
  o += "  field_end = find_char(0, line_len, ';');\n  if (field_end < 0) {\n    field_end = line_len;\n  }\n";
  o += "  if (field_end == 0) {\n    return 1;\n  }\n";
  o += "  for (i = 0; i < field_end; i++) {\n    if (line[i] < '0' || line[i] > '9' || t > 100000000000LL) {\n"
       "      return 1;\n    }\n    t = t * 10 + (line[i] - '0');\n  }\n";
  o += "  if (t != tick) {\n    return 2;\n  }\n";
  o += "  for (i = 0; i < SYN_LINE_MAX; i++) {\n    int32_t start;\n    int32_t eq;\n";
  o += "    if (field_end >= line_len) {\n      break;\n    }\n";
  o += "    start = field_end + 1;\n    field_end = find_char(start, line_len, ';');\n";
  o += "    if (field_end < 0) {\n      field_end = line_len;\n    }\n";
  o += "    eq = find_char(start, field_end, '=');\n    if (eq < 0) {\n      return 1;\n    }\n";
  o += "    pos = eq + 1;\n    bad = 0;\n";
  for (std::size_t k = 0; k < ins.size(); ++k) {
    const auto& port = root.ports[ins[k]];
    const Type t = port_type(0, ins[k]);
    const std::string m = "in.p_" + port.name;
    const std::string ks = std::to_string(k);
    o += std::string(k ? "    } else if" : "    if") + " (span_is(start, eq, " + c_str(port.name) + ")) {\n";
    o += "      if (seen[" + ks + "]) {\n        return 4;\n      }\n      seen[" + ks + "] = 1;\n";
    o += "      if (field_end - pos == 1 && line[pos] == '-') {\n        " + m + ".present = 0;\n        " + m +
         ".value = " + zero(t) + ";\n        pos = field_end;\n      } else {\n        " + m + ".present = 1;\n        " + m +
         ".value = " + reader(t) + ";\n      }\n";
  }
  if (ins.empty())
    o += "    {\n      return 3;\n    }\n";
  else
    o += "    } else {\n      return 3;\n    }\n";
  o += "    if (bad || pos != field_end) {\n      return 5;\n    }\n  }\n";
  o += "  for (i = 0; i < " + std::to_string(ins.size()) + "; i++) {\n    if (!seen[i]) {\n      return 6;\n    }\n  }\n";
  o += "  return 0;\n}\n\n";

  o += "static void print_row(int64_t tick)\n{\n  put_i64(tick);\n";
  for (const auto& group : {ins, outs})
    for (std::size_t p : group) {
      const auto& port = root.ports[p];
      const std::string m = (port.direction == Direction::In ? "in.p_" : "out.p_") + port.name;
      o += "  fputs(" + c_str(";" + port.name + "=") + ", stdout);\n";
      o += "  if (" + m + ".present) {\n    " + printer(port_type(0, p), m + ".value") + "\n  } else {\n    putchar('-');\n  }\n";
    }
  o += "  putchar('\\n');\n}\n\n";

  o += R"(int main(int argc, char **argv)
{
  FILE *f;
  int64_t ticks = 0;
  int32_t i;
  int32_t pass;
  if (argc != 3) {
    fputs("usage: harness <stimulus-file> <ticks>\n", stderr);
    return 2;
  }
  for (i = 0; i < 19; i++) {
    char c = argv[2][i];
    if (c == 0) {
      break;
    }
    if (c < '0' || c > '9') {
      fputs("usage: harness <stimulus-file> <ticks>\n", stderr);
      return 2;
    }
    ticks = ticks * 10 + (c - '0');
  }
  if (i == 0 || argv[2][i] != 0) {
    fputs("usage: harness <stimulus-file> <ticks>\n", stderr);
    return 2;
  }
  f = fopen(argv[1], "r");
  if (f == NULL) {
    fputs("harness: cannot open stimulus file\n", stderr);
    return 2;
  }
  for (pass = 0; pass < 2; pass++) {
    int64_t tick;
    rewind(f);
    syn_error.kind = SYN_OK;
)";
  o += "    " + px + "_init(&st);\n";
  o += R"(    for (tick = 0; tick < 2147483647; tick++) {
      int32_t problem;
      line_len = read_line(f);
      if (line_len == -1) {
        break;
      }
      problem = line_len == -2 ? 1 : parse_row(tick);
      if (problem != 0) {
        fputs("harness: malformed stimulus row: ", stderr);
        fputs(problems[problem], stderr);
        fputs("\n", stderr);
        fclose(f);
        return 1;
      }
      if (pass == 1 && tick < ticks) {
)";
  o += "        " + px + "_step(&in, &out, &st);\n";
  o += R"(        if (syn_error.kind != SYN_OK) {
          fputs("!error;", stdout);
          put_i64(tick);
          putchar(';');
          fputs(kinds[syn_error.kind], stdout);
          putchar(';');
          fputs(paths[syn_error.component], stdout);
          putchar('\n');
          fclose(f);
          return 1;
        }
        print_row(tick);
      }
    }
  }
  fclose(f);
  return 0;
}
)";
  return {"harness.c", o, GeneratedUnit::Kind::Harness};
}

}  // namespace

std::vector<GeneratedUnit> generate_code(const System& sys, CheckReport* notes) { return Gen(sys).units(notes); }

GeneratedUnit generate_harness(const System& sys) { return Gen(sys).harness(); }

std::vector<GeneratedUnit> generate_all(const System& sys, CheckReport* notes) {
  Gen g(sys);
  auto units = g.units(notes);
  units.push_back(g.harness());
  return units;
}

}  // namespace syn
