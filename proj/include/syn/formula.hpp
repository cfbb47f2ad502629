// Safety formulas G(antecedent -> [X] consequent) over glossary atoms.
#pragma once

#include <string>
#include <vector>

#include "syn/eval.hpp"
#include "syn/glossary.hpp"
#include "syn/simulator.hpp"

namespace syn {

struct Prop {
  enum class Kind { True, Atom, Not, And, Or };
  Kind kind = Kind::True;
  int atom = -1;
  std::vector<Prop> kids;

  static Prop truth() { return {}; }
  static Prop atom_of(int i) { return {Kind::Atom, i, {}}; }
  static Prop negate(Prop p) { return {Kind::Not, -1, {std::move(p)}}; }
  static Prop conj(std::vector<Prop> ps);
  static Prop disj(std::vector<Prop> ps);
};

struct SafetyClause {
  Prop antecedent;
  Prop consequent;
  bool next = false;
};

// Holds iff every clause holds at every tick.  A runtime error in the model
// or in an atom at tick t counts as a violation at t.  For a clause with
// `next`, a violation at t means the antecedent held at t-1 and the
// consequent fails at t.
struct TemporalFormula {
  std::string id;
  std::vector<Atom> atoms;
  std::vector<SafetyClause> clauses;
};

TemporalFormula requirement_to_formula(const BoundRequirements& b, const BoundRequirement& r);
std::string render_formula(const TemporalFormula& f);

// Observes the root ports of one tick and the state the tick started from.
class TickObserver : public Observer {
 public:
  TickObserver(const System& sys, const SystemState& pre, const std::vector<Message>& root_ports)
      : sys_(sys), pre_(pre), ports_(root_ports) {}
  Message port(std::string_view name) const override;
  bool in_state(std::string_view path, std::string_view state) const override;
  Value state_var(std::string_view path, std::string_view var) const override;

 private:
  std::size_t atom_at(std::string_view path) const;

  const System& sys_;
  const SystemState& pre_;
  const std::vector<Message>& ports_;
};

// Atom values at one tick; throws EvalError.
std::vector<bool> eval_atoms(const TemporalFormula& f, const System& sys, const SystemState& pre,
                             const std::vector<Message>& root_ports);
bool eval_prop(const Prop& p, const std::vector<bool>& atoms);

// Evaluates the formula over a finished simulation run.  Returns the first
// violating tick, if any.
std::optional<std::size_t> first_violation(const TemporalFormula& f, const System& sys, const Stimulus& stim,
                                           Chooser& chooser, std::size_t ticks);

}  // namespace syn
