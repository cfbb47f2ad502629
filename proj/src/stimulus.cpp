#include "syn/stimulus.hpp"

#include <charconv>

#include "syn/flat.hpp"

namespace syn {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

}  // namespace

Stimulus parse_stimulus(std::string_view text, const Model& m, const TypeTable& types) {
  const auto inputs = ports_of(m.root, Direction::In);
  std::vector<Type> tys;
  for (const auto* p : inputs) tys.push_back(types.resolve_or_throw(p->type));
  Stimulus s;
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const int line = static_cast<int>(ln + 1);
    auto fields = split(lines[ln], ';');
    std::size_t tick = 0;
    auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), tick);
    if (ec != std::errc() || ptr != fields[0].data() + fields[0].size() || fields[0].empty())
      throw StimulusError("SyntaxError", line, "bad tick '" + std::string(fields[0]) + "'");
    if (tick != s.rows.size())
      throw StimulusError("NonContiguousTicks", line,
                          "expected tick " + std::to_string(s.rows.size()) + ", found " + std::to_string(tick));
    std::vector<Message> row(inputs.size());
    std::vector<bool> seen(inputs.size(), false);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      auto eq = fields[f].find('=');
      if (eq == std::string_view::npos)
        throw StimulusError("SyntaxError", line, "expected port=value, got '" + std::string(fields[f]) + "'");
      std::string_view name = fields[f].substr(0, eq);
      std::size_t idx = inputs.size();
      for (std::size_t i = 0; i < inputs.size(); ++i)
        if (inputs[i]->name == name) idx = i;
      if (idx == inputs.size()) throw StimulusError("UnknownPort", line, "no root input " + std::string(name));
      if (seen[idx]) throw StimulusError("DuplicatePort", line, "port " + std::string(name) + " given twice");
      seen[idx] = true;
      try {
        row[idx] = parse_message(fields[f].substr(eq + 1), tys[idx], types);
      } catch (const ValueSyntaxError& e) {
        throw StimulusError("TypeMismatch", line, std::string(name) + ": " + e.what());
      }
    }
    for (std::size_t i = 0; i < inputs.size(); ++i)
      if (!seen[i]) throw StimulusError("MissingPort", line, "no value for " + inputs[i]->name);
    s.rows.push_back(std::move(row));
  }
  return s;
}

std::string render_stimulus(const Stimulus& s, const Model& m, const TypeTable& types) {
  std::string out;
  for (std::size_t t = 0; t < s.rows.size(); ++t) {
    out += render_row(t, s.rows[t], {}, m, types);
    out += '\n';
  }
  return out;
}

std::string render_row(std::size_t tick, const std::vector<Message>& inputs, const std::vector<Message>& outputs,
                       const Model& m, const TypeTable& types) {
  std::string out = std::to_string(tick);
  for (Direction d : {Direction::In, Direction::Out}) {
    const auto& msgs = d == Direction::In ? inputs : outputs;
    std::size_t i = 0;
    for (const auto& p : m.root.ports) {
      if (p.direction != d || i >= msgs.size()) continue;
      out += ';';
      out += p.name;
      out += '=';
      out += render_message(msgs[i++], types.resolve_or_throw(p.type), types);
    }
  }
  return out;
}

}  // namespace syn
