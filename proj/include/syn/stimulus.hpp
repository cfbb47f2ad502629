// Stimulus files and the shared `tick;port=value;...` line format.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syn/ast.hpp"
#include "syn/types.hpp"

namespace syn {

// rows[t][i] is the message on the i-th root input port (declaration order).
struct Stimulus {
  std::vector<std::vector<Message>> rows;
};

class StimulusError : public std::runtime_error {
 public:
  StimulusError(std::string code, int line, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ": " + code + ": " + msg), code_(std::move(code)), line_(line) {}
  const std::string& code() const { return code_; }
  int line() const { return line_; }

 private:
  std::string code_;
  int line_;
};

// Codes: SyntaxError, UnknownPort, DuplicatePort, MissingPort, TypeMismatch,
// NonContiguousTicks.
Stimulus parse_stimulus(std::string_view text, const Model& m, const TypeTable& types);

std::string render_stimulus(const Stimulus& s, const Model& m, const TypeTable& types);

// One line (without the newline): inputs then outputs, declaration order.
std::string render_row(std::size_t tick, const std::vector<Message>& inputs, const std::vector<Message>& outputs,
                       const Model& m, const TypeTable& types);

}  // namespace syn
