// SMT-LIB v2 encoding of bounded model checking and the solver driver.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "syn/bmc.hpp"

namespace syn {

// Minimal s-expression tree for reading solver output.
struct SExpr {
  std::string atom;  // empty for a list
  std::vector<SExpr> list;
  bool is_atom() const { return !atom.empty(); }
};

// Parses a sequence of s-expressions; throws std::runtime_error.
std::vector<SExpr> parse_sexprs(std::string_view text);

// Unrolls ticks 0..bound-1.  The script asserts that some tick violates the
// formula, then asks for the model and the per-tick violation flags.
std::string encode_smt(const System& sys, const TemporalFormula& f, std::size_t bound);

struct SmtOptions {
  std::string solver;       // command; empty means unavailable
  std::string script_path;  // where to write the script; empty for a temp file
};

// SYN_SOLVER, else `z3` when found on PATH, else empty.
std::string default_solver();

// Verdict from the solver; EngineError carries SolverUnavailable or
// SolverParseError diagnostics.
Verdict bmc_smt(const System& sys, const TemporalFormula& f, std::size_t bound, const SmtOptions& opt);

// Reads solver output (`sat` plus model and flags, or `unsat`).
Verdict read_solver_output(const System& sys, std::string_view output, std::size_t bound);

}  // namespace syn
