// C99-subset code generation: a types unit, one step unit per component
// instance and a stimulus-driven harness.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "syn/checks.hpp"
#include "syn/simulator.hpp"

namespace syn {

struct GeneratedUnit {
  enum class Kind { Types, ComponentStep, Harness };
  std::string fileName;
  std::string contents;
  Kind kind = Kind::Types;
};

// Raised when a composite cannot be stepped as one block (an instantaneous
// path leaves it and comes back).
class CodegenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Longest stimulus line the harness accepts.
inline constexpr int kHarnessLineMax = 4096;

// Types unit plus step units.  Components whose transitions may overlap are
// reported as warnings in `notes` (the generated code takes the first).
std::vector<GeneratedUnit> generate_code(const System& sys, CheckReport* notes = nullptr);
GeneratedUnit generate_harness(const System& sys);

// Every unit, harness last.
std::vector<GeneratedUnit> generate_all(const System& sys, CheckReport* notes = nullptr);

// Token-level scan of generated units for constructs outside the subset.
CheckReport lint_subset(const std::vector<GeneratedUnit>& units);

}  // namespace syn
