// Textual front end for `.syn` model files.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syn/ast.hpp"

namespace syn {

struct SyntaxDiagnostic {
  SourcePos pos;
  std::string code;  // SyntaxError, DuplicateDefinition, ...
  std::string message;
  std::vector<std::string> expected;

  std::string format() const;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<SyntaxDiagnostic> diags);
  const std::vector<SyntaxDiagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<SyntaxDiagnostic> diags_;
};

// Throws ParseError.  Name resolution is left to the static checks; only
// duplicate definitions are reported here.
Model parse_model(std::string_view text);

// A single expression.  `glossary` enables `port?` and `@Comp.State`.
ExprPtr parse_expr(std::string_view text, bool glossary = false);

struct GlossaryEntry {
  std::string phrase;  // normalized
  ExprPtr expr;
  SourcePos pos;
};

// `"<phrase>" := <boolean-expr>` entries; phrases are normalized.
std::vector<GlossaryEntry> parse_glossary_entries(std::string_view text);

// Lowercase, whitespace collapsed, trimmed.
std::string normalize_phrase(std::string_view phrase);

}  // namespace syn
