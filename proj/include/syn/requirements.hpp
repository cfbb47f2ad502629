// Structured requirements: REQ <id> WHILE .. IF .. THEN [NEXT] .. [ELSE [NEXT] ..]
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syn/ast.hpp"

namespace syn {

enum class Timing { SameTick, NextTick };

// Each clause is a conjunction of phrases (split on AND), normalized.
struct Requirement {
  std::string id;
  std::vector<std::string> whileCond;
  std::vector<std::string> ifCond;
  std::vector<std::string> thenResp;
  std::optional<std::vector<std::string>> elseResp;
  Timing timing = Timing::SameTick;
  Timing elseTiming = Timing::SameTick;
  SourcePos pos;
};

// Throws ParseError with code SyntaxError or MissingClause.
std::vector<Requirement> parse_requirements(std::string_view text);

}  // namespace syn
