#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "syn/codegen.hpp"

namespace syn {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct };
  Kind kind;
  std::string text;
  SourcePos pos;
};

// C tokens with comments, literals and preprocessor lines dropped.
std::vector<Token> tokenize(const std::string& src) {
  static const char* const puncts[] = {"...", "<<=", ">>=", "->", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
                                       "^=",  "<<",  ">>",  "<=", ">=", "==", "!=", "&&", "||"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  bool line_start = true;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        line_start = true;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n' || std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' && line_start) {
      while (i < src.size() && src[i] != '\n') advance(src[i] == '\\' ? 2 : 1);
      continue;
    }
    line_start = false;
    if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.compare(i, 2, "/*") == 0) {
      advance(2);
      while (i < src.size() && src.compare(i, 2, "*/") != 0) advance(1);
      advance(2);
      continue;
    }
    const SourcePos pos{line, col};
    if (c == '"' || c == '\'') {
      advance(1);
      while (i < src.size() && src[i] != c && src[i] != '\n') advance(src[i] == '\\' ? 2 : 1);
      advance(1);
      out.push_back({Token::Kind::Number, "lit", pos});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      const bool num = std::isdigit(static_cast<unsigned char>(c));
      out.push_back({num ? Token::Kind::Number : Token::Kind::Ident, src.substr(i, j - i), pos});
      advance(j - i);
      continue;
    }
    std::string p(1, c);
    for (const char* q : puncts)
      if (src.compare(i, std::char_traits<char>::length(q), q) == 0) {
        p = q;
        break;
      }
    out.push_back({Token::Kind::Punct, p, pos});
    advance(p.size());
  }
  return out;
}

const std::set<std::string> kAllocation = {"malloc", "calloc", "realloc", "free", "alloca", "aligned_alloc"};
const std::set<std::string> kVariadic = {"printf",   "fprintf",  "sprintf",  "snprintf", "vprintf", "vfprintf",
                                         "vsprintf", "vsnprintf", "scanf",   "fscanf",   "sscanf",  "va_start",
                                         "va_arg",   "va_end",   "va_list"};
const std::set<std::string> kLoops = {"while", "do", "goto", "setjmp", "longjmp"};
const std::set<std::string> kBaseTypes = {"void",    "char",    "short",   "int",      "long",     "float",
                                          "double",  "signed",  "unsigned", "int8_t",  "int16_t",  "int32_t",
                                          "int64_t", "uint8_t", "uint16_t", "uint32_t", "uint64_t", "size_t",
                                          "FILE",    "const"};

// `=`, `++`, `--` and compound assignments.
bool writes(const std::string& op) {
  if (op == "=" || op == "++" || op == "--") return true;
  return op.size() >= 2 && op.back() == '=' && op != "==" && op != "<=" && op != ">=" && op != "!=";
}

using Defs = std::map<std::string, std::pair<std::string, SourcePos>>;

class Linter {
 public:
  Linter(const GeneratedUnit& u, CheckReport& r) : unit_(u), report_(r), t_(tokenize(u.contents)) {}

  void run(std::map<std::string, std::set<std::string>>& calls, Defs& where);

 private:
  const Token* at(std::size_t i) const { return i < t_.size() ? &t_[i] : nullptr; }
  bool is(std::size_t i, const char* s) const { return i < t_.size() && t_[i].text == s; }
  bool ident(std::size_t i) const { return i < t_.size() && t_[i].kind == Token::Kind::Ident; }
  void forbid(std::size_t i, const std::string& msg) {
    report_.add(Severity::Error, "ForbiddenConstruct", unit_.fileName, t_[i].pos, msg);
  }
  std::size_t match_close(std::size_t open) const;
  void collect_names();
  void check_for(std::size_t i);
  bool unary_position(std::size_t i) const;

  const GeneratedUnit& unit_;
  CheckReport& report_;
  std::vector<Token> t_;
  std::set<std::string> types_ = kBaseTypes;
  std::set<std::string> addressy_;  // pointers and arrays
};

std::size_t Linter::match_close(std::size_t open) const {
  const std::string o = t_[open].text;
  const std::string c = o == "(" ? ")" : o == "{" ? "}" : "]";
  int depth = 0;
  for (std::size_t i = open; i < t_.size(); ++i) {
    if (t_[i].text == o) ++depth;
    if (t_[i].text == c && --depth == 0) return i;
  }
  return t_.size();
}

void Linter::collect_names() {
  // Typedef names: first identifier at the typedef's own nesting level that is
  // followed by ';', '[' or ','.
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!is(i, "typedef")) continue;
    int depth = 0;
    for (std::size_t j = i + 1; j < t_.size(); ++j) {
      const std::string& s = t_[j].text;
      if (s == "{" || s == "(" || s == "[") ++depth;
      if (s == "}" || s == ")" || s == "]") --depth;
      if (depth == 0 && ident(j) && (is(j + 1, ";") || is(j + 1, "[") || is(j + 1, ","))) {
        types_.insert(s);
        break;
      }
      if (depth == 0 && s == ";") break;
    }
  }
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!ident(i)) continue;
    std::size_t k = i - 1;
    bool star = false;
    while (k > 0 && t_[k].text == "*") {
      star = true;
      --k;
    }
    const bool typed = ident(k) && types_.count(t_[k].text);
    if (typed && star) addressy_.insert(t_[i].text);
    if (typed && !star && is(i + 1, "[")) addressy_.insert(t_[i].text);
  }
}

bool Linter::unary_position(std::size_t i) const {
  if (i == 0) return true;
  const Token& p = t_[i - 1];
  if (p.kind != Token::Kind::Punct) return p.text == "return";
  return p.text != ")" && p.text != "]";
}

void Linter::check_for(std::size_t i) {
  if (!is(i + 1, "(")) {
    forbid(i, "for without a header");
    return;
  }
  const std::size_t close = match_close(i + 1);
  std::vector<std::vector<std::size_t>> parts(1);
  int depth = 0;
  for (std::size_t j = i + 2; j < close; ++j) {
    const std::string& s = t_[j].text;
    if (s == "(" || s == "[") ++depth;
    if (s == ")" || s == "]") --depth;
    if (depth == 0 && s == ";")
      parts.emplace_back();
    else
      parts.back().push_back(j);
  }
  auto bad = [&] { forbid(i, "loop header is not of the form `for (i = a; i < b; i++)`"); };
  if (parts.size() != 3 || parts[0].size() < 3 || parts[1].size() < 3 || parts[2].size() != 2) return bad();
  const std::string var = t_[parts[0][0]].text;
  if (!ident(parts[0][0]) || !is(parts[0][1], "=")) return bad();
  if (t_[parts[1][0]].text != var || !is(parts[1][1], "<")) return bad();
  for (std::size_t k = 2; k < parts[1].size(); ++k) {
    if (writes(t_[parts[1][k]].text)) return bad();
  }
  if (t_[parts[2][0]].text != var || !is(parts[2][1], "++")) return bad();

  // The body may not write the counter.
  std::size_t end = close + 1;
  if (is(end, "{")) {
    end = match_close(end);
  } else {
    while (end < t_.size() && !is(end, ";")) ++end;
  }
  for (std::size_t j = close + 1; j < end && j < t_.size(); ++j) {
    if (t_[j].text != var || is(j - 1, ".") || is(j - 1, "->")) continue;
    const Token* n = at(j + 1);
    if ((n && writes(n->text)) || is(j - 1, "++") || is(j - 1, "--") || is(j - 1, "&")) {
      forbid(j, "loop body writes the loop counter " + var);
      return;
    }
  }
}

void Linter::run(std::map<std::string, std::set<std::string>>& calls, Defs& where) {
  collect_names();
  int depth = 0;
  std::string current;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const Token& tk = t_[i];
    if (tk.text == "{") {
      if (depth == 0) {
        // Function definition: `name ( ... ) {` at file scope.
        std::size_t k = i;
        if (k > 0 && is(k - 1, ")")) {
          int d = 0;
          for (k = i - 1; k > 0; --k) {
            if (t_[k].text == ")") ++d;
            if (t_[k].text == "(" && --d == 0) break;
          }
          if (k > 0 && ident(k - 1)) {
            current = t_[k - 1].text;
            calls[current];
            where.emplace(current, std::make_pair(unit_.fileName, t_[k - 1].pos));
          }
        }
      }
      ++depth;
      continue;
    }
    if (tk.text == "}") {
      if (--depth == 0) current.clear();
      continue;
    }
    if (tk.text == "...") {
      forbid(i, "variadic function");
      continue;
    }
    if (tk.kind == Token::Kind::Ident) {
      const std::string& s = tk.text;
      if (kAllocation.count(s)) {
        forbid(i, "heap allocation through " + s);
        continue;
      }
      if (kVariadic.count(s)) {
        forbid(i, "variadic call " + s);
        continue;
      }
      if (kLoops.count(s)) {
        forbid(i, "unbounded control flow: " + s);
        continue;
      }
      if (s == "for") {
        check_for(i);
        continue;
      }
      if (!current.empty() && is(i + 1, "(") && !is(i - 1, ".") && !is(i - 1, "->")) calls[current].insert(s);
      if (addressy_.count(s) && !is(i - 1, ".") && !is(i - 1, "->") && !is(i - 1, "*")) {
        const bool whole = !is(i + 1, "[") && !is(i + 1, "->") && !is(i + 1, ".") && !is(i + 1, "(");
        const Token* n = at(i + 1);
        const bool after = n && (n->text == "+" || n->text == "-" || n->text == "++" || n->text == "--" ||
                                 n->text == "+=" || n->text == "-=");
        const bool before = i > 0 && (is(i - 1, "++") || is(i - 1, "--") ||
                                      ((is(i - 1, "+") || is(i - 1, "-")) && !unary_position(i - 1)));
        if (whole && (after || before)) forbid(i, "pointer arithmetic on " + s);
      }
      continue;
    }
    if (tk.text == "&" && unary_position(i) && ident(i + 1)) {
      // &x, &x.f, &x->f followed by + or -.
      std::size_t j = i + 1;
      while (ident(j) && (is(j + 1, ".") || is(j + 1, "->")) && ident(j + 2)) j += 2;
      if (is(j + 1, "+") || is(j + 1, "-")) forbid(i, "arithmetic on an address");
    }
  }
}

}  // namespace

CheckReport lint_subset(const std::vector<GeneratedUnit>& units) {
  CheckReport report;
  std::map<std::string, std::set<std::string>> calls;
  Defs where;
  for (const auto& u : units) Linter(u, report).run(calls, where);

  // Tarjan over the reconstructed call graph; every cycle is one finding.
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : calls[v]) {
      if (!calls.count(w) || !where.count(w)) continue;
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] != index[v]) return;
    std::vector<std::string> scc;
    std::string w;
    do {
      w = stack.back();
      stack.pop_back();
      on_stack.erase(w);
      scc.push_back(w);
    } while (w != v);
    if (scc.size() > 1 || calls[v].count(v)) {
      std::string names;
      for (auto it = scc.rbegin(); it != scc.rend(); ++it) names += (names.empty() ? "" : " -> ") + *it;
      report.add(Severity::Error, "RecursionDetected", where[v].first, where[v].second, "call cycle " + names);
    }
  };
  std::vector<std::string> roots;
  for (const auto& [name, _] : where) roots.push_back(name);
  for (const auto& r : roots)
    if (!index.count(r)) visit(r);
  return report;
}

}  // namespace syn
