// Bounded model checking: verdicts and the explicit-state engine.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "syn/formula.hpp"
#include "syn/simulator.hpp"
#include "syn/stimulus.hpp"

namespace syn {

struct Verdict {
  enum class Kind { Holds, Counterexample, EngineError };
  Kind kind = Kind::Holds;
  std::size_t bound = 0;
  // Counterexample: inputs for ticks 0..violationTick and, per tick and
  // atomic, the transition picked where several were enabled (else -1).
  Stimulus stimulus;
  std::vector<std::vector<int>> fired;
  std::size_t violationTick = 0;
  std::string diagnostic;  // EngineError text or a vacuity note
  bool vacuous = false;    // no antecedent was ever satisfied

  // HOLDS(k), CEX(t) or ERROR.
  std::string label() const;
  bool holds() const { return kind == Kind::Holds; }
};

struct ExplicitOptions {
  std::uint64_t cap = 10'000'000;        // visited configurations
  std::uint64_t input_cap = 1'000'000;   // input combinations per tick
};

// Breadth-first over (system state, pending next-tick obligations), branching
// over every root input message and every resolution of non-determinism.
Verdict bmc_explicit(const System& sys, const TemporalFormula& f, std::size_t bound, ExplicitOptions opt = {});

// Replays a counterexample through the simulator with its recorded choices
// and reports the first violating tick found there.
std::optional<std::size_t> replay_violation(const System& sys, const TemporalFormula& f, const Verdict& v);

}  // namespace syn
