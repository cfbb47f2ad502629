// Binding requirement phrases to glossary atoms over the model.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "syn/ast.hpp"
#include "syn/parser.hpp"
#include "syn/requirements.hpp"

namespace syn {

// A glossary entry after name resolution.  Root ports read as PortValue or
// PortPresent, `@path.x` as StateIs or StateVar with `name` relative to the
// root.  Every boolean leaf that reads a port value is guarded by the
// presence of those ports, so an atom is false rather than undefined when
// its ports are absent.
struct Atom {
  std::string phrase;
  ExprPtr expr;
};

struct BoundRequirement {
  Requirement req;
  // Indices into BoundRequirements::atoms; one per phrase.
  std::vector<int> when;
  std::vector<int> cond;
  std::vector<int> then;
  std::vector<int> otherwise;  // empty without ELSE
};

struct BoundRequirements {
  std::vector<Atom> atoms;
  std::vector<BoundRequirement> reqs;
};

struct BindDiagnostic {
  std::string code;  // UnknownPhrase, TypeError, UnknownName, DuplicateDefinition
  std::string reqId;
  std::string phrase;
  std::string message;
};

class BindError : public std::runtime_error {
 public:
  explicit BindError(std::vector<BindDiagnostic> diags);
  const std::vector<BindDiagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<BindDiagnostic> diags_;
};

// Resolves one glossary expression against the model (exposed for tests and
// the random formula generator).  Throws BindError.
ExprPtr resolve_atom(const Model& m, const ExprPtr& e, const std::string& phrase = {});

BoundRequirements bind_glossary(const Model& m, const std::vector<GlossaryEntry>& glossary,
                                const std::vector<Requirement>& reqs);

}  // namespace syn
