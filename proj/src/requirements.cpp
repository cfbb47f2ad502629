#include "syn/requirements.hpp"

#include <cctype>

#include "syn/parser.hpp"

namespace syn {

namespace {

struct Word {
  std::string text;
  SourcePos pos;
};

std::vector<Word> words(std::string_view text) {
  std::vector<Word> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') adv();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      adv();
    } else {
      Word w;
      w.pos = {line, col};
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
        w.text += text[i];
        adv();
      }
      out.push_back(std::move(w));
    }
  }
  return out;
}

bool is_keyword(const std::string& w) {
  return w == "REQ" || w == "WHILE" || w == "IF" || w == "THEN" || w == "ELSE" || w == "NEXT" || w == "AND";
}

[[noreturn]] void fail(SourcePos pos, const std::string& code, const std::string& msg,
                       std::vector<std::string> expected = {}) {
  throw ParseError({{pos, code, msg, std::move(expected)}});
}

}  // namespace

std::vector<Requirement> parse_requirements(std::string_view text) {
  const auto ws = words(text);
  std::vector<Requirement> out;
  std::size_t i = 0;
  while (i < ws.size()) {
    if (ws[i].text != "REQ") fail(ws[i].pos, "SyntaxError", "unexpected '" + ws[i].text + "'", {"REQ"});
    Requirement r;
    r.pos = ws[i].pos;
    ++i;
    if (i >= ws.size() || is_keyword(ws[i].text)) fail(i < ws.size() ? ws[i].pos : r.pos, "SyntaxError", "missing requirement id", {"identifier"});
    r.id = ws[i++].text;
    static const char* order[] = {"WHILE", "IF", "THEN", "ELSE"};
    int stage = 0;
    while (i < ws.size() && ws[i].text != "REQ") {
      const Word& kw = ws[i];
      int k = -1;
      for (int j = 0; j < 4; ++j)
        if (kw.text == order[j]) k = j;
      if (k < 0) fail(kw.pos, "SyntaxError", "unexpected '" + kw.text + "'", {"WHILE", "IF", "THEN", "ELSE"});
      if (k != stage) {
        fail(kw.pos, k > stage ? "MissingClause" : "SyntaxError",
             k > stage ? "requirement " + r.id + " lacks its " + order[stage] + " clause"
                       : "clause " + kw.text + " out of order in " + r.id);
      }
      ++i;
      Timing timing = Timing::SameTick;
      if (k >= 2 && i < ws.size() && ws[i].text == "NEXT") {
        timing = Timing::NextTick;
        ++i;
      }
      std::vector<std::string> phrases;
      std::string cur;
      auto flush = [&](SourcePos at) {
        if (cur.empty()) fail(at, "SyntaxError", "empty phrase in " + r.id, {"phrase"});
        phrases.push_back(normalize_phrase(cur));
        cur.clear();
      };
      while (i < ws.size()) {
        const std::string& w = ws[i].text;
        if (w == "AND") {
          flush(ws[i].pos);
          ++i;
          continue;
        }
        if (w == "WHILE" || w == "IF" || w == "THEN" || w == "ELSE" || w == "REQ") break;
        if (w == "NEXT") fail(ws[i].pos, "SyntaxError", "NEXT only starts a THEN or ELSE phrase");
        cur += (cur.empty() ? "" : " ") + w;
        ++i;
      }
      flush(i < ws.size() ? ws[i].pos : kw.pos);
      switch (k) {
        case 0: r.whileCond = std::move(phrases); break;
        case 1: r.ifCond = std::move(phrases); break;
        case 2:
          r.thenResp = std::move(phrases);
          r.timing = timing;
          break;
        default:
          r.elseResp = std::move(phrases);
          r.elseTiming = timing;
          break;
      }
      stage = k + 1;
    }
    if (stage < 3) fail(r.pos, "MissingClause", std::string("requirement ") + r.id + " lacks its " + order[stage] + " clause");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace syn
