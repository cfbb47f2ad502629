#include "syn/parser.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <unordered_set>

namespace syn {

std::string SyntaxDiagnostic::format() const {
  std::string s = std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + code + ": " + message;
  if (!expected.empty()) {
    s += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) s += ", ";
      s += expected[i];
    }
    s += ")";
  }
  return s;
}

namespace {

std::string join_messages(const std::vector<SyntaxDiagnostic>& diags) {
  std::string s;
  for (const auto& d : diags) {
    if (!s.empty()) s += "\n";
    s += d.format();
  }
  return s;
}

}  // namespace

ParseError::ParseError(std::vector<SyntaxDiagnostic> diags)
    : std::runtime_error(join_messages(diags)), diags_(std::move(diags)) {}

std::string normalize_phrase(std::string_view phrase) {
  std::string out;
  bool space = false;
  for (char c : phrase) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

namespace {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t number = 0;
  SourcePos pos;
};

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "model", "type",   "enum",   "variant", "record", "int",       "func",   "component", "in",
      "out",   "init",   "causality", "weak", "strong", "automaton", "states", "var",       "transition",
      "when",  "with",   "then",   "table",   "sub",    "channel",   "delegate", "if",      "else",
      "match", "div",    "mod",    "and",     "or",     "not",       "true",   "false"};
  return kw;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      Token t;
      t.pos = {line_, col_};
      if (i_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = text_[i_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t s = i_;
        while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) advance();
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(s, i_ - s));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t s = i_;
        while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) advance();
        t.kind = Tok::Int;
        t.text = std::string(text_.substr(s, i_ - s));
        // Magnitudes up to 2^31 are needed for the most negative literal.
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (ec != std::errc() || t.number > 2147483648LL)
          throw ParseError({{t.pos, "SyntaxError", "integer literal " + t.text + " out of range", {}}});
      } else if (c == '"') {
        advance();
        std::size_t s = i_;
        while (i_ < text_.size() && text_[i_] != '"' && text_[i_] != '\n') advance();
        if (i_ >= text_.size() || text_[i_] != '"')
          throw ParseError({{t.pos, "SyntaxError", "unterminated string", {"\""}}});
        t.kind = Tok::String;
        t.text = std::string(text_.substr(s, i_ - s));
        advance();
      } else {
        static const char* two[] = {"->", "=>", ":=", "<=", ">=", "!="};
        t.kind = Tok::Punct;
        for (const char* p : two) {
          if (text_.substr(i_, 2) == p) {
            t.text = p;
            advance();
            advance();
            break;
          }
        }
        if (t.text.empty()) {
          static const std::string one = "{}()[],:=?.+-*<>@_";
          if (one.find(c) == std::string::npos)
            throw ParseError({{t.pos, "SyntaxError", std::string("unexpected character '") + c + "'", {}}});
          t.text = std::string(1, c);
          advance();
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, bool glossary) : toks_(Lexer(text).run()), glossary_(glossary) {}

  Model model() {
    Model m;
    expect_kw("model");
    m.name = ident("model name");
    expect("{");
    bool have_root = false;
    while (!is("}")) {
      if (is_kw("type")) {
        m.types.push_back(type_def());
      } else if (is_kw("func")) {
        m.funcs.push_back(func_def());
      } else if (is_kw("component")) {
        SourcePos p = peek().pos;
        next();
        if (have_root) fail_at(p, "a model has exactly one top-level component", {});
        m.root = component_body_named();
        m.root.pos = p;
        have_root = true;
      } else {
        fail({"type", "func", "component", "}"});
      }
    }
    expect("}");
    if (!have_root) fail({"component"});
    expect_end();
    return m;
  }

  ExprPtr single_expr() {
    ExprPtr e = expr();
    expect_end();
    return e;
  }

  std::vector<GlossaryEntry> glossary() {
    std::vector<GlossaryEntry> out;
    while (peek().kind != Tok::End) {
      if (peek().kind != Tok::String) fail({"quoted phrase"});
      GlossaryEntry g;
      g.pos = peek().pos;
      g.phrase = normalize_phrase(next().text);
      expect(":=");
      g.expr = expr();
      out.push_back(std::move(g));
    }
    return out;
  }

 private:
  // --- token helpers -----------------------------------------------------
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool is(std::string_view p, std::size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == p; }
  bool is_kw(std::string_view w, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == w; }
  bool is_ident(std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && !keywords().count(peek(k).text);
  }

  [[noreturn]] void fail_at(SourcePos p, const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError({{p, "SyntaxError", msg, std::move(expected)}});
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    if (t.kind == Tok::String) found = "\"" + t.text + "\"";
    fail_at(t.pos, "unexpected " + found, std::move(expected));
  }

  void expect(std::string_view p) {
    if (!is(p)) fail({"'" + std::string(p) + "'"});
    next();
  }

  void expect_kw(std::string_view w) {
    if (!is_kw(w)) fail({std::string(w)});
    next();
  }

  bool accept(std::string_view p) {
    if (!is(p)) return false;
    next();
    return true;
  }

  bool accept_kw(std::string_view w) {
    if (!is_kw(w)) return false;
    next();
    return true;
  }

  std::string ident(const char* what) {
    if (!is_ident()) fail({what});
    return next().text;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }

  std::int64_t signed_int() {
    bool neg = accept("-");
    if (peek().kind != Tok::Int) fail({"integer"});
    std::int64_t v = next().number;
    v = neg ? -v : v;
    if (v > kIntMax) fail_at(peek().pos, "integer out of range", {});
    return v;
  }

  // --- declarations ------------------------------------------------------
  TypeRef type_ref() {
    TypeRef t;
    t.pos = peek().pos;
    if (accept_kw("int")) {
      expect("[");
      t.kind = TypeRef::Kind::Int;
      t.lo = signed_int();
      expect(",");
      t.hi = signed_int();
      expect("]");
      return t;
    }
    std::string n = ident("type");
    if (n == "Bool") {
      t.kind = TypeRef::Kind::Bool;
    } else if (n == "Int") {
      t.kind = TypeRef::Kind::Int;
    } else {
      t.kind = TypeRef::Kind::Named;
      t.name = std::move(n);
    }
    return t;
  }

  TypeDef type_def() {
    TypeDef d;
    d.pos = peek().pos;
    expect_kw("type");
    d.name = ident("type name");
    expect("=");
    if (accept_kw("enum")) {
      d.kind = TypeDef::Kind::Enum;
      expect("{");
      do d.literals.push_back(ident("enum literal"));
      while (accept(","));
      expect("}");
    } else if (accept_kw("variant")) {
      d.kind = TypeDef::Kind::Variant;
      expect("{");
      do {
        Constructor c;
        c.pos = peek().pos;
        c.name = ident("constructor");
        if (accept("(")) {
          do c.payload.push_back(type_ref());
          while (accept(","));
          expect(")");
        }
        d.ctors.push_back(std::move(c));
      } while (accept(","));
      expect("}");
    } else if (accept_kw("record")) {
      d.kind = TypeDef::Kind::Record;
      expect("{");
      do {
        Field f;
        f.pos = peek().pos;
        f.name = ident("field name");
        expect(":");
        f.type = type_ref();
        d.fields.push_back(std::move(f));
      } while (accept(","));
      expect("}");
    } else {
      TypeRef r = type_ref();
      if (r.kind == TypeRef::Kind::Named) fail_at(r.pos, "type aliases of user types are not supported", {"enum", "variant", "record", "int", "Bool", "Int"});
      if (r.kind == TypeRef::Kind::Bool) {
        d.kind = TypeDef::Kind::Bool;
      } else {
        d.kind = TypeDef::Kind::BoundedInt;
        d.lo = r.lo;
        d.hi = r.hi;
      }
    }
    return d;
  }

  FuncDef func_def() {
    FuncDef f;
    f.pos = peek().pos;
    expect_kw("func");
    f.name = ident("function name");
    expect("(");
    if (!is(")")) {
      do {
        Param p;
        p.pos = peek().pos;
        p.name = ident("parameter");
        expect(":");
        p.type = type_ref();
        f.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    expect(":");
    f.result = type_ref();
    expect("=");
    f.body = expr();
    return f;
  }

  ComponentSpec component_body_named() {
    ComponentSpec c;
    c.pos = peek().pos;
    c.name = ident("component name");
    expect("{");
    bool have_causality = false;
    bool have_behavior = false;
    Composite comp;
    bool composite = false;
    while (!is("}")) {
      SourcePos p = peek().pos;
      if (is_kw("in") || is_kw("out")) {
        PortSpec port;
        port.pos = p;
        port.direction = next().text == "in" ? Direction::In : Direction::Out;
        port.name = ident("port name");
        expect(":");
        port.type = type_ref();
        expect_kw("init");
        port.initial = expr();
        c.ports.push_back(std::move(port));
      } else if (accept_kw("causality")) {
        if (have_causality) fail_at(p, "causality declared twice", {});
        have_causality = true;
        if (accept_kw("weak")) {
          c.causality = Causality::Weak;
        } else if (accept_kw("strong")) {
          c.causality = Causality::Strong;
        } else {
          fail({"weak", "strong"});
        }
      } else if (is_kw("automaton") || is_kw("table")) {
        if (have_behavior || composite) fail_at(p, "component " + c.name + " has more than one behavior", {});
        have_behavior = true;
        if (accept_kw("automaton"))
          c.behavior = automaton();
        else {
          next();
          c.behavior = table();
        }
      } else if (is_kw("sub")) {
        if (have_behavior) fail_at(p, "component " + c.name + " mixes subcomponents with a behavior", {});
        composite = true;
        next();
        comp.subs.push_back(component_body_named());
        comp.subs.back().pos = p;
      } else if (accept_kw("channel")) {
        composite = true;
        Channel ch;
        ch.pos = p;
        ch.from = qualified_port();
        expect("->");
        ch.to = qualified_port();
        comp.channels.push_back(std::move(ch));
      } else if (accept_kw("delegate")) {
        composite = true;
        Delegation d;
        d.pos = p;
        d.from = port_ref();
        expect("->");
        d.to = port_ref();
        comp.delegations.push_back(std::move(d));
      } else {
        fail({"in", "out", "causality", "automaton", "table", "sub", "channel", "delegate", "}"});
      }
    }
    expect("}");
    if (!have_causality) fail_at(c.pos, "component " + c.name + " does not declare its causality", {"causality"});
    if (composite) {
      if (have_behavior) fail_at(c.pos, "component " + c.name + " mixes subcomponents with a behavior", {});
      c.behavior = std::move(comp);
    } else if (!have_behavior) {
      fail_at(c.pos, "component " + c.name + " has no behavior", {"automaton", "table", "sub"});
    }
    return c;
  }

  PortRef qualified_port() {
    PortRef r;
    r.component = ident("component");
    expect(".");
    r.port = ident("port");
    return r;
  }

  PortRef port_ref() {
    PortRef r;
    std::string first = ident("port");
    if (accept(".")) {
      r.component = std::move(first);
      r.port = ident("port");
    } else {
      r.port = std::move(first);
    }
    return r;
  }

  Automaton automaton() {
    Automaton a;
    expect("{");
    expect_kw("states");
    bool have_init = false;
    do {
      ControlState s;
      s.pos = peek().pos;
      s.name = ident("control state");
      if (accept_kw("init")) {
        if (have_init) fail_at(s.pos, "more than one initial state", {});
        have_init = true;
        a.initial = a.states.size();
      }
      a.states.push_back(std::move(s));
    } while (accept(","));
    if (!have_init) fail_at(a.states.front().pos, "no initial state marked", {"init"});
    while (is_kw("var")) {
      VarDecl v;
      v.pos = next().pos;
      v.name = ident("variable name");
      expect(":");
      v.type = type_ref();
      expect_kw("init");
      v.init = expr();
      a.vars.push_back(std::move(v));
    }
    while (is_kw("transition")) a.transitions.push_back(transition());
    expect("}");
    return a;
  }

  Transition transition() {
    Transition t;
    t.pos = next().pos;
    if (is_ident() && is(":", 1)) {
      t.name = next().text;
      next();
    }
    t.source = ident("source state");
    expect("->");
    t.target = ident("target state");
    if (accept_kw("when")) t.inputs = patterns();
    if (accept_kw("with")) t.guard = expr();
    if (accept_kw("then")) actions(t.outputs, &t.updates);
    return t;
  }

  FunctionTable table() {
    FunctionTable tab;
    expect("{");
    while (is_kw("when")) {
      TableRow r;
      r.pos = next().pos;
      r.inputs = patterns();
      if (accept_kw("with")) r.guard = expr();
      expect_kw("then");
      actions(r.outputs, nullptr);
      tab.rows.push_back(std::move(r));
    }
    expect("}");
    return tab;
  }

  // A `-` after `=` means absence unless it starts a negative literal.
  bool dash_is_absence() const { return is("-") && peek(1).kind != Tok::Int && !is("(", 1) && !is_ident(1); }

  std::vector<Pattern> patterns() {
    std::vector<Pattern> out;
    if (!is_ident()) return out;
    do {
      Pattern p;
      p.pos = peek().pos;
      p.port = ident("input port");
      if (accept("?")) {
        if (is_ident() && !is("->", 1)) {
          p.kind = Pattern::Kind::Bind;
          p.var = next().text;
        } else {
          p.kind = Pattern::Kind::Present;
        }
      } else if (accept("=")) {
        if (dash_is_absence()) {
          next();
          p.kind = Pattern::Kind::Absent;
        } else {
          p.kind = Pattern::Kind::Literal;
          p.literal = expr();
        }
      } else {
        fail({"?", "="});
      }
      out.push_back(std::move(p));
    } while (accept(","));
    return out;
  }

  void actions(std::vector<OutputAction>& outs, std::vector<Assignment>* updates) {
    if (!is_ident()) return;
    do {
      SourcePos p = peek().pos;
      std::string target = ident(updates ? "output port or variable" : "output port");
      if (updates && accept(":=")) {
        updates->push_back({std::move(target), expr(), p});
      } else if (accept("=")) {
        OutputAction o;
        o.pos = p;
        o.port = std::move(target);
        if (dash_is_absence())
          next();
        else
          o.value = expr();
        outs.push_back(std::move(o));
      } else {
        fail(updates ? std::vector<std::string>{"=", ":="} : std::vector<std::string>{"="});
      }
    } while (accept(","));
  }

  // --- expressions -------------------------------------------------------
  ExprPtr expr() { return or_expr(); }

  ExprPtr or_expr() {
    ExprPtr l = and_expr();
    while (is_kw("or")) {
      SourcePos p = next().pos;
      l = at(ex::binary(BinaryOp::Or, l, and_expr()), p);
    }
    return l;
  }

  ExprPtr and_expr() {
    ExprPtr l = not_expr();
    while (is_kw("and")) {
      SourcePos p = next().pos;
      l = at(ex::binary(BinaryOp::And, l, not_expr()), p);
    }
    return l;
  }

  ExprPtr not_expr() {
    if (is_kw("not")) {
      SourcePos p = next().pos;
      return at(ex::unary(UnaryOp::Not, not_expr()), p);
    }
    return cmp_expr();
  }

  ExprPtr cmp_expr() {
    ExprPtr l = add_expr();
    static const std::pair<const char*, BinaryOp> ops[] = {{"=", BinaryOp::Eq},  {"!=", BinaryOp::Ne},
                                                           {"<", BinaryOp::Lt},  {"<=", BinaryOp::Le},
                                                           {">", BinaryOp::Gt},  {">=", BinaryOp::Ge}};
    for (auto [s, op] : ops) {
      if (is(s)) {
        // `x = -` inside an action list is handled by the caller.
        if (op == BinaryOp::Eq && dash_is_absence_after_eq()) return l;
        SourcePos p = next().pos;
        return at(ex::binary(op, l, add_expr()), p);
      }
    }
    return l;
  }

  bool dash_is_absence_after_eq() const { return is("-", 1) && peek(2).kind != Tok::Int && !is("(", 2) && !is_ident(2); }

  ExprPtr add_expr() {
    ExprPtr l = mul_expr();
    while (is("+") || is("-")) {
      SourcePos p = peek().pos;
      BinaryOp op = next().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      l = at(ex::binary(op, l, mul_expr()), p);
    }
    return l;
  }

  ExprPtr mul_expr() {
    ExprPtr l = unary();
    while (is("*") || is_kw("div") || is_kw("mod")) {
      SourcePos p = peek().pos;
      const std::string& w = next().text;
      BinaryOp op = w == "*" ? BinaryOp::Mul : w == "div" ? BinaryOp::Div : BinaryOp::Mod;
      l = at(ex::binary(op, l, unary()), p);
    }
    return l;
  }

  ExprPtr unary() {
    if (is("-")) {
      SourcePos p = next().pos;
      if (peek().kind == Tok::Int) {
        std::int64_t v = -next().number;
        return postfix(at(ex::int_lit(v), p));
      }
      return at(ex::unary(UnaryOp::Neg, unary()), p);
    }
    return postfix(primary());
  }

  ExprPtr postfix(ExprPtr e) {
    while (is(".") && is_ident(1)) {
      SourcePos p = next().pos;
      e = at(ex::field(e, next().text), p);
    }
    return e;
  }

  static ExprPtr at(ExprPtr e, SourcePos p) {
    Expr copy = *e;
    copy.pos = p;
    return copy;
  }

  ExprPtr primary() {
    const Token& t = peek();
    SourcePos p = t.pos;
    if (t.kind == Tok::Int) {
      std::int64_t v = next().number;
      if (v > kIntMax) fail_at(p, "integer literal out of range", {});
      return at(ex::int_lit(v), p);
    }
    if (accept_kw("true")) return at(ex::bool_lit(true), p);
    if (accept_kw("false")) return at(ex::bool_lit(false), p);
    if (accept("(")) {
      bool saved = no_record_;
      no_record_ = false;
      ExprPtr e = expr();
      no_record_ = saved;
      expect(")");
      return e;
    }
    if (accept_kw("if")) {
      ExprPtr c = expr();
      expect_kw("then");
      ExprPtr a = expr();
      expect_kw("else");
      ExprPtr b = expr();
      return at(ex::if_then_else(c, a, b), p);
    }
    if (accept_kw("match")) return match_expr(p);
    if (glossary_ && accept("@")) {
      std::vector<std::string> parts{ident("component")};
      while (accept(".")) parts.push_back(ident("state or variable"));
      if (parts.size() < 2) fail({"."});
      Expr e;
      e.kind = Expr::Kind::StateIs;
      e.member = parts.back();
      parts.pop_back();
      for (std::size_t i = 0; i < parts.size(); ++i) e.name += (i ? "." : "") + parts[i];
      e.pos = p;
      return e;
    }
    if (is_ident()) {
      std::string n = next().text;
      if (accept("(")) {
        std::vector<ExprPtr> args;
        bool saved = no_record_;
        no_record_ = false;
        if (!is(")")) {
          do args.push_back(expr());
          while (accept(","));
        }
        no_record_ = saved;
        expect(")");
        return at(ex::call(std::move(n), std::move(args)), p);
      }
      if (!no_record_ && is("{")) return record_expr(std::move(n), p);
      if (glossary_ && is("?")) {
        next();
        Expr e;
        e.kind = Expr::Kind::PortPresent;
        e.name = std::move(n);
        e.pos = p;
        return e;
      }
      return at(ex::name(std::move(n)), p);
    }
    fail({"expression"});
  }

  ExprPtr record_expr(std::string type, SourcePos p) {
    Expr e;
    e.kind = Expr::Kind::Record;
    e.name = std::move(type);
    e.pos = p;
    expect("{");
    do {
      FieldInit fi;
      fi.pos = peek().pos;
      fi.name = ident("field name");
      expect("=");
      fi.value = expr();
      e.inits.push_back(std::move(fi));
    } while (accept(","));
    expect("}");
    return e;
  }

  ExprPtr match_expr(SourcePos p) {
    Expr e;
    e.kind = Expr::Kind::Match;
    e.pos = p;
    bool saved = no_record_;
    no_record_ = true;
    e.args.push_back(expr());
    no_record_ = saved;
    expect("{");
    do {
      MatchArm arm;
      arm.pos = peek().pos;
      if (!accept("_")) {
        arm.ctor = ident("constructor or _");
        if (accept("(")) {
          do arm.binds.push_back(ident("binder"));
          while (accept(","));
          expect(")");
        }
      }
      expect("=>");
      arm.body = expr();
      e.arms.push_back(std::move(arm));
    } while (accept(","));
    expect("}");
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool glossary_ = false;
  bool no_record_ = false;
};

void check_duplicates_in(const ComponentSpec& c, const std::string& path, std::vector<SyntaxDiagnostic>& out) {
  std::set<std::string> ports;
  for (const auto& p : c.ports)
    if (!ports.insert(p.name).second)
      out.push_back({p.pos, "DuplicateDefinition", "port " + p.name + " declared twice in " + path, {}});
  if (const auto* a = c.automaton()) {
    std::set<std::string> states;
    for (const auto& s : a->states)
      if (!states.insert(s.name).second)
        out.push_back({s.pos, "DuplicateDefinition", "control state " + s.name + " declared twice in " + path, {}});
    std::set<std::string> vars;
    for (const auto& v : a->vars)
      if (!vars.insert(v.name).second || ports.count(v.name))
        out.push_back({v.pos, "DuplicateDefinition", "variable " + v.name + " clashes in " + path, {}});
  }
  if (const auto* comp = c.composite()) {
    std::set<std::string> subs;
    for (const auto& s : comp->subs) {
      if (!subs.insert(s.name).second)
        out.push_back({s.pos, "DuplicateDefinition", "subcomponent " + s.name + " declared twice in " + path, {}});
      check_duplicates_in(s, path + "." + s.name, out);
    }
  }
}

void check_duplicates(const Model& m) {
  std::vector<SyntaxDiagnostic> out;
  std::set<std::string> globals = {"Bool", "Int"};
  std::set<std::string> ctors;
  for (const auto& t : m.types) {
    if (!globals.insert(t.name).second)
      out.push_back({t.pos, "DuplicateDefinition", "type " + t.name + " defined twice", {}});
    std::set<std::string> local;
    for (const auto& l : t.literals)
      if (!ctors.insert(l).second) out.push_back({t.pos, "DuplicateDefinition", "constructor " + l + " defined twice", {}});
    for (const auto& c : t.ctors)
      if (!ctors.insert(c.name).second)
        out.push_back({c.pos, "DuplicateDefinition", "constructor " + c.name + " defined twice", {}});
    for (const auto& f : t.fields)
      if (!local.insert(f.name).second)
        out.push_back({f.pos, "DuplicateDefinition", "field " + f.name + " repeated in " + t.name, {}});
  }
  for (const auto& f : m.funcs) {
    if (!globals.insert(f.name).second || ctors.count(f.name))
      out.push_back({f.pos, "DuplicateDefinition", "function " + f.name + " clashes with an earlier definition", {}});
    std::set<std::string> params;
    for (const auto& p : f.params)
      if (!params.insert(p.name).second)
        out.push_back({p.pos, "DuplicateDefinition", "parameter " + p.name + " repeated in " + f.name, {}});
  }
  check_duplicates_in(m.root, m.root.name, out);
  if (!out.empty()) throw ParseError(std::move(out));
}

}  // namespace

Model parse_model(std::string_view text) {
  Parser p(text, false);
  Model m = p.model();
  check_duplicates(m);
  return m;
}

ExprPtr parse_expr(std::string_view text, bool glossary) {
  Parser p(text, glossary);
  return p.single_expr();
}

std::vector<GlossaryEntry> parse_glossary_entries(std::string_view text) {
  Parser p(text, true);
  return p.glossary();
}

}  // namespace syn
