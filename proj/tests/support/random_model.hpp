// Seeded generators for models, stimuli and safety formulas used by the
// property suites, the engine fuzz and the differential tests.
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "syn/formula.hpp"
#include "syn/simulator.hpp"

namespace syn::testing {

struct ModelShape {
  int maxAtomics = 3;
  int maxTransitions = 4;
  int maxStates = 3;
  bool tables = true;      // some atomics are function tables
  bool strong = true;      // some atomics are strongly causal (enables feedback)
  bool rich = false;       // records, variants, functions, unbounded Int, div
  bool nested = false;     // wrap part of the children in a middle composite
};

// Text of a model that passes check_model.  Same seed, same text.
std::string random_model_text(std::uint64_t seed, const ModelShape& shape = {});

// A single weakly causal table component as the root, for table/automaton
// equivalence.
std::string random_table_model_text(std::uint64_t seed);

Value random_value(const Type& t, const TypeTable& types, std::mt19937_64& rng);
Message random_message(const Type& t, const TypeTable& types, std::mt19937_64& rng, double absent = 0.25);

// Root inputs for `ticks` ticks; each message is absent with probability
// `absent`.
Stimulus random_stimulus(const System& sys, std::mt19937_64& rng, std::size_t ticks, double absent = 0.25);

// One or two clauses over atoms on root ports and control states.
TemporalFormula random_formula(const System& sys, std::mt19937_64& rng, const std::string& id);

}  // namespace syn::testing
