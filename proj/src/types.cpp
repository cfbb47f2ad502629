#include "syn/types.hpp"

#include <charconv>

namespace syn {

namespace {

TypeDef make_builtin(std::string name, TypeDef::Kind kind) {
  TypeDef d;
  d.name = std::move(name);
  d.kind = kind;
  if (kind == TypeDef::Kind::BoundedInt) {
    d.lo = kIntMin;
    d.hi = kIntMax;
  }
  return d;
}

}  // namespace

const TypeDef& builtin_bool() {
  static const TypeDef def = make_builtin("Bool", TypeDef::Kind::Bool);
  return def;
}

const TypeDef& builtin_int() {
  static const TypeDef def = make_builtin("Int", TypeDef::Kind::BoundedInt);
  return def;
}

bool same_type(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Type::Kind::Bool: return true;
    case Type::Kind::Int: return a.lo == b.lo && a.hi == b.hi;
    default: return a.def == b.def;
  }
}

bool assignable(const Type& from, const Type& to) {
  if (from.is_int() && to.is_int()) return true;
  return same_type(from, to);
}

std::string describe(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Bool: return "Bool";
    case Type::Kind::Int:
      if (t.def) return t.def->name;
      if (t.lo == kIntMin && t.hi == kIntMax) return "Int";
      return "int[" + std::to_string(t.lo) + ", " + std::to_string(t.hi) + "]";
    default: return t.def ? t.def->name : "?";
  }
}

TypeTable::TypeTable(const Model& model) {
  types_.emplace("Bool", &builtin_bool());
  types_.emplace("Int", &builtin_int());
  for (const auto& t : model.types) {
    if (!types_.emplace(t.name, &t).second) duplicates_.push_back(t.name);
    if (t.kind == TypeDef::Kind::Enum) {
      for (std::size_t i = 0; i < t.literals.size(); ++i)
        if (!ctors_.emplace(t.literals[i], CtorInfo{&t, i}).second) duplicates_.push_back(t.literals[i]);
    } else if (t.kind == TypeDef::Kind::Variant) {
      for (std::size_t i = 0; i < t.ctors.size(); ++i)
        if (!ctors_.emplace(t.ctors[i].name, CtorInfo{&t, i}).second) duplicates_.push_back(t.ctors[i].name);
    }
  }
  for (const auto& f : model.funcs) {
    if (types_.count(f.name) || !funcs_.emplace(f.name, &f).second) duplicates_.push_back(f.name);
  }
}

std::variant<const TypeDef*, const FuncDef*, ResolveError> TypeTable::resolve(std::string_view name) const {
  for (const auto& d : duplicates_)
    if (d == name) return ResolveError::Ambiguous;
  if (auto* t = find_type(name)) return t;
  if (auto* f = find_func(name)) return f;
  return ResolveError::NotFound;
}

const TypeDef* TypeTable::find_type(std::string_view name) const {
  auto it = types_.find(std::string(name));
  return it == types_.end() ? nullptr : it->second;
}

const FuncDef* TypeTable::find_func(std::string_view name) const {
  auto it = funcs_.find(std::string(name));
  return it == funcs_.end() ? nullptr : it->second;
}

const CtorInfo* TypeTable::find_ctor(std::string_view name) const {
  auto it = ctors_.find(std::string(name));
  return it == ctors_.end() ? nullptr : &it->second;
}

std::optional<Type> TypeTable::resolve(const TypeRef& ref) const {
  switch (ref.kind) {
    case TypeRef::Kind::Bool: return Type::boolean();
    case TypeRef::Kind::Int: return Type::integer(ref.lo, ref.hi);
    case TypeRef::Kind::Named: break;
  }
  const TypeDef* d = find_type(ref.name);
  if (!d) return std::nullopt;
  switch (d->kind) {
    case TypeDef::Kind::Bool: return Type::boolean();
    case TypeDef::Kind::BoundedInt: {
      Type t = Type::integer(d->lo, d->hi);
      if (d != &builtin_int()) t.def = d;
      return t;
    }
    case TypeDef::Kind::Enum: return Type{Type::Kind::Enum, 0, 0, d};
    case TypeDef::Kind::Variant: return Type{Type::Kind::Variant, 0, 0, d};
    case TypeDef::Kind::Record: return Type{Type::Kind::Record, 0, 0, d};
  }
  return std::nullopt;
}

Type TypeTable::resolve_or_throw(const TypeRef& ref) const {
  auto t = resolve(ref);
  if (!t) throw std::logic_error("unresolved type " + ref.name);
  return *t;
}

Type TypeTable::payload_type(const TypeDef& variant, std::size_t ctor, std::size_t i) const {
  return resolve_or_throw(variant.ctors.at(ctor).payload.at(i));
}

Type TypeTable::field_type(const TypeDef& record, std::size_t i) const {
  return resolve_or_throw(record.fields.at(i).type);
}

bool conforms(const Value& v, const Type& t, const TypeTable& types) {
  switch (t.kind) {
    case Type::Kind::Bool: return v.kind == Value::Kind::Bool && v.items.empty();
    case Type::Kind::Int: return v.kind == Value::Kind::Int && v.num >= t.lo && v.num <= t.hi;
    case Type::Kind::Enum:
      return v.kind == Value::Kind::Enum && v.num >= 0 &&
             static_cast<std::size_t>(v.num) < t.def->literals.size();
    case Type::Kind::Variant: {
      if (v.kind != Value::Kind::Variant || v.num < 0 ||
          static_cast<std::size_t>(v.num) >= t.def->ctors.size())
        return false;
      const auto& c = t.def->ctors[static_cast<std::size_t>(v.num)];
      if (v.items.size() != c.payload.size()) return false;
      for (std::size_t i = 0; i < c.payload.size(); ++i)
        if (!conforms(v.items[i], types.payload_type(*t.def, static_cast<std::size_t>(v.num), i), types))
          return false;
      return true;
    }
    case Type::Kind::Record: {
      if (v.kind != Value::Kind::Record || v.items.size() != t.def->fields.size()) return false;
      for (std::size_t i = 0; i < v.items.size(); ++i)
        if (!conforms(v.items[i], types.field_type(*t.def, i), types)) return false;
      return true;
    }
  }
  return false;
}

void render_value(std::string& out, const Value& v, const Type& t, const TypeTable& types) {
  switch (t.kind) {
    case Type::Kind::Bool: out += v.as_bool() ? "true" : "false"; return;
    case Type::Kind::Int: out += std::to_string(v.num); return;
    case Type::Kind::Enum: out += t.def->literals.at(static_cast<std::size_t>(v.num)); return;
    case Type::Kind::Variant: {
      const auto idx = static_cast<std::size_t>(v.num);
      const auto& c = t.def->ctors.at(idx);
      out += c.name;
      if (c.payload.empty()) return;
      out += '(';
      for (std::size_t i = 0; i < c.payload.size(); ++i) {
        if (i) out += ',';
        render_value(out, v.items.at(i), types.payload_type(*t.def, idx, i), types);
      }
      out += ')';
      return;
    }
    case Type::Kind::Record: {
      out += '{';
      for (std::size_t i = 0; i < t.def->fields.size(); ++i) {
        if (i) out += ',';
        out += t.def->fields[i].name;
        out += '=';
        render_value(out, v.items.at(i), types.field_type(*t.def, i), types);
      }
      out += '}';
      return;
    }
  }
}

std::string render_value(const Value& v, const Type& t, const TypeTable& types) {
  std::string s;
  render_value(s, v, t, types);
  return s;
}

std::string render_message(const Message& m, const Type& t, const TypeTable& types) {
  return m ? render_value(*m, t, types) : std::string("-");
}

namespace {

class ValueReader {
 public:
  ValueReader(std::string_view text, const TypeTable& types) : text_(text), types_(types) {}

  Value read(const Type& t) {
    switch (t.kind) {
      case Type::Kind::Bool: {
        auto w = ident();
        if (w == "true") return Value::boolean(true);
        if (w == "false") return Value::boolean(false);
        fail("expected true or false");
      }
      case Type::Kind::Int: {
        std::size_t start = pos_;
        if (peek() == '-') ++pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc() || p != text_.data() + pos_ || pos_ == start) fail("expected integer");
        if (v < t.lo || v > t.hi) fail("integer " + std::to_string(v) + " outside " + describe(t));
        return Value::integer(v);
      }
      case Type::Kind::Enum: {
        auto w = ident();
        for (std::size_t i = 0; i < t.def->literals.size(); ++i)
          if (t.def->literals[i] == w) return Value::enumeration(t.def, i);
        fail("'" + std::string(w) + "' is not a literal of " + t.def->name);
      }
      case Type::Kind::Variant: {
        auto w = ident();
        for (std::size_t c = 0; c < t.def->ctors.size(); ++c) {
          if (t.def->ctors[c].name != w) continue;
          std::vector<Value> payload;
          const auto n = t.def->ctors[c].payload.size();
          if (n > 0) {
            expect('(');
            for (std::size_t i = 0; i < n; ++i) {
              if (i) expect(',');
              payload.push_back(read(types_.payload_type(*t.def, c, i)));
            }
            expect(')');
          }
          return Value::variant(t.def, c, std::move(payload));
        }
        fail("'" + std::string(w) + "' is not a constructor of " + t.def->name);
      }
      case Type::Kind::Record: {
        expect('{');
        std::vector<Value> fields;
        for (std::size_t i = 0; i < t.def->fields.size(); ++i) {
          if (i) expect(',');
          if (ident() != t.def->fields[i].name) fail("expected field " + t.def->fields[i].name);
          expect('=');
          fields.push_back(read(types_.field_type(*t.def, i)));
        }
        expect('}');
        return Value::record(t.def, std::move(fields));
      }
    }
    fail("unsupported type");
  }

  bool at_end() const { return pos_ == text_.size(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValueSyntaxError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (pos_ > start && c >= '0' && c <= '9'))
        ++pos_;
      else
        break;
    }
    if (pos_ == start) fail("expected identifier");
    return text_.substr(start, pos_ - start);
  }

  std::string_view text_;
  const TypeTable& types_;
  std::size_t pos_ = 0;
};

}  // namespace

Value parse_value(std::string_view text, const Type& t, const TypeTable& types) {
  ValueReader r(text, types);
  Value v = r.read(t);
  if (!r.at_end()) r.fail("trailing characters");
  return v;
}

Message parse_message(std::string_view text, const Type& t, const TypeTable& types) {
  if (text == "-") return absent;
  return parse_value(text, t, types);
}

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
  if (a == 0 || b == 0) return 0;
  if (a > limit / b) return limit;
  return std::min(a * b, limit);
}

}  // namespace

std::uint64_t value_count(const Type& t, const TypeTable& types, std::uint64_t cap) {
  const std::uint64_t limit = cap + 1;
  switch (t.kind) {
    case Type::Kind::Bool: return std::min<std::uint64_t>(2, limit);
    case Type::Kind::Int: {
      auto span = static_cast<std::uint64_t>(t.hi - t.lo) + 1;
      return std::min(span, limit);
    }
    case Type::Kind::Enum: return std::min<std::uint64_t>(t.def->literals.size(), limit);
    case Type::Kind::Variant: {
      std::uint64_t total = 0;
      for (std::size_t c = 0; c < t.def->ctors.size(); ++c) {
        std::uint64_t n = 1;
        for (std::size_t i = 0; i < t.def->ctors[c].payload.size(); ++i)
          n = sat_mul(n, value_count(types.payload_type(*t.def, c, i), types, cap), limit);
        total = std::min(total + n, limit);
      }
      return total;
    }
    case Type::Kind::Record: {
      std::uint64_t n = 1;
      for (std::size_t i = 0; i < t.def->fields.size(); ++i)
        n = sat_mul(n, value_count(types.field_type(*t.def, i), types, cap), limit);
      return n;
    }
  }
  return limit;
}

namespace {

// Cartesian product, first component most significant.
std::vector<std::vector<Value>> product(const std::vector<std::vector<Value>>& axes) {
  std::vector<std::vector<Value>> out{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<Value>> next;
    next.reserve(out.size() * axis.size());
    for (const auto& prefix : out)
      for (const auto& v : axis) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::optional<std::vector<Value>> enumerate_values(const Type& t, const TypeTable& types, std::uint64_t cap) {
  if (value_count(t, types, cap) > cap) return std::nullopt;
  std::vector<Value> out;
  switch (t.kind) {
    case Type::Kind::Bool:
      out = {Value::boolean(false), Value::boolean(true)};
      break;
    case Type::Kind::Int:
      for (std::int64_t v = t.lo; v <= t.hi; ++v) out.push_back(Value::integer(v));
      break;
    case Type::Kind::Enum:
      for (std::size_t i = 0; i < t.def->literals.size(); ++i) out.push_back(Value::enumeration(t.def, i));
      break;
    case Type::Kind::Variant:
      for (std::size_t c = 0; c < t.def->ctors.size(); ++c) {
        std::vector<std::vector<Value>> axes;
        for (std::size_t i = 0; i < t.def->ctors[c].payload.size(); ++i)
          axes.push_back(*enumerate_values(types.payload_type(*t.def, c, i), types, cap));
        for (auto& p : product(axes)) out.push_back(Value::variant(t.def, c, std::move(p)));
      }
      break;
    case Type::Kind::Record: {
      std::vector<std::vector<Value>> axes;
      for (std::size_t i = 0; i < t.def->fields.size(); ++i)
        axes.push_back(*enumerate_values(types.field_type(*t.def, i), types, cap));
      for (auto& p : product(axes)) out.push_back(Value::record(t.def, std::move(p)));
      break;
    }
  }
  return out;
}

Value default_value(const Type& t, const TypeTable& types) {
  switch (t.kind) {
    case Type::Kind::Bool: return Value::boolean(false);
    case Type::Kind::Int: return Value::integer(t.lo);
    case Type::Kind::Enum: return Value::enumeration(t.def, 0);
    case Type::Kind::Variant: {
      std::vector<Value> payload;
      for (std::size_t i = 0; i < t.def->ctors.at(0).payload.size(); ++i)
        payload.push_back(default_value(types.payload_type(*t.def, 0, i), types));
      return Value::variant(t.def, 0, std::move(payload));
    }
    case Type::Kind::Record: {
      std::vector<Value> fields;
      for (std::size_t i = 0; i < t.def->fields.size(); ++i)
        fields.push_back(default_value(types.field_type(*t.def, i), types));
      return Value::record(t.def, std::move(fields));
    }
  }
  return Value{};
}

}  // namespace syn
