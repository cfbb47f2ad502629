// Reference semantics: time-synchronous execution of a checked model.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "syn/ast.hpp"
#include "syn/eval.hpp"
#include "syn/flat.hpp"
#include "syn/stimulus.hpp"
#include "syn/types.hpp"

namespace syn {

struct AtomicState {
  std::size_t control = 0;
  std::vector<Value> vars;
  std::vector<Message> buffer;  // per port index; outputs of strong components

  bool operator==(const AtomicState&) const = default;
  auto operator<=>(const AtomicState&) const = default;
};

// One entry per atomic instance, in FlatModel::atomics order.
struct SystemState {
  std::vector<AtomicState> atoms;

  bool operator==(const SystemState&) const = default;
  auto operator<=>(const SystemState&) const = default;
};

std::size_t hash_value(const Value& v);
std::size_t hash_state(const SystemState& s);

// Picks one of several enabled transitions.  Called only when at least two
// are enabled; returns an index into `enabled`.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual std::size_t choose(std::size_t atom, std::size_t tick, std::span<const std::size_t> enabled) = 0;
};

class FirstChooser : public Chooser {
 public:
  std::size_t choose(std::size_t, std::size_t, std::span<const std::size_t>) override { return 0; }
};

// xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D).  A zero
// seed is replaced by 0x9E3779B97F4A7C15.  choose() draws one number and
// takes it modulo the number of enabled transitions.
class RandomChooser : public Chooser {
 public:
  explicit RandomChooser(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}
  std::uint64_t next();
  std::size_t choose(std::size_t, std::size_t, std::span<const std::size_t> enabled) override {
    return static_cast<std::size_t>(next() % enabled.size());
  }

 private:
  std::uint64_t state_;
};

// Replays recorded choices: fired[tick][atom] is the transition index that
// fired (or -1).  Falls back to the first enabled transition.
class ScriptedChooser : public Chooser {
 public:
  explicit ScriptedChooser(std::vector<std::vector<int>> fired) : fired_(std::move(fired)) {}
  std::size_t choose(std::size_t atom, std::size_t tick, std::span<const std::size_t> enabled) override;

 private:
  std::vector<std::vector<int>> fired_;
};

struct RunError {
  std::size_t tick = 0;
  EvalErrorKind kind = EvalErrorKind::TypeError;
  std::string path;
  std::string message;
};

class StepError : public std::runtime_error {
 public:
  explicit StepError(RunError e) : std::runtime_error(e.path + ": " + e.message), error_(std::move(e)) {}
  const RunError& error() const { return error_; }

 private:
  RunError error_;
};

struct EnabledTransition {
  std::size_t index = 0;
  Binding binding;
};

struct AtomicStep {
  std::vector<Message> outputs;  // per port index; emitted this tick
  AtomicState next;
  int fired = -1;
};

struct TickResult {
  std::vector<Message> outputs;  // root outputs, declaration order
  SystemState next;
  std::vector<int> fired;        // per atomic
  // Messages seen on every port of every instance this tick, for
  // observation: ports[inst][port].
  std::vector<std::vector<Message>> ports;
};

// Single implicit control state, one transition per row.
Automaton derive_automaton(const FunctionTable& t);

// Direct evaluation of a function table under the First policy.
std::vector<Message> eval_table(const ComponentSpec& c, const FunctionTable& t, const std::vector<Message>& inputs,
                                const TypeTable& types);

class System {
 public:
  // `m` must pass check_model and outlive the System.
  explicit System(const Model& m);

  const Model& model() const { return *model_; }
  const TypeTable& types() const { return types_; }
  const FlatModel& flat() const { return flat_; }
  std::size_t atom_count() const { return flat_.atomics.size(); }
  const Instance& atom_instance(std::size_t a) const { return flat_.instances[flat_.atomics[a]]; }
  // The automaton driving an atomic, derived for function tables.
  const Automaton& behavior(std::size_t a) const { return behaviors_[a]; }
  const Type& port_type(std::size_t inst, std::size_t port) const { return port_types_[inst][port]; }
  const Type& var_type(std::size_t a, std::size_t v) const { return var_types_[a][v]; }
  std::size_t input_count() const { return root_inputs_.size(); }
  const std::vector<std::size_t>& root_inputs() const { return root_inputs_; }
  const std::vector<std::size_t>& root_outputs() const { return root_outputs_; }
  std::size_t atom_of_instance(int inst) const;

  SystemState init_state() const;
  AtomicState init_atomic(std::size_t a) const;

  // inputs are indexed by port index of the atomic's spec.
  std::vector<EnabledTransition> enabled_transitions(std::size_t a, const AtomicState& st,
                                                     const std::vector<Message>& inputs) const;
  AtomicStep step_atomic(std::size_t a, const AtomicState& st, const std::vector<Message>& inputs, Chooser& chooser,
                         std::size_t tick) const;
  // Fires transition `index` (which must be enabled with `binding`).
  AtomicStep fire(std::size_t a, const AtomicState& st, const EnabledTransition& tr) const;
  TickResult step_system(const SystemState& st, const std::vector<Message>& root_inputs, Chooser& chooser,
                         std::size_t tick) const;

 private:
  [[noreturn]] void fail(std::size_t a, std::size_t tick, const EvalError& e, const std::string& where) const;

  const Model* model_;
  TypeTable types_;
  FlatModel flat_;
  std::vector<Automaton> behaviors_;
  std::vector<std::vector<Type>> port_types_;  // per instance, per port
  std::vector<std::vector<Type>> var_types_;   // per atomic
  std::vector<std::size_t> root_inputs_;       // port indices of root inputs
  std::vector<std::size_t> root_outputs_;
  std::vector<int> atom_index_;                // instance -> atomic position or -1
};

struct TraceRow {
  std::vector<Message> inputs;
  std::vector<Message> outputs;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::optional<RunError> error;
  std::vector<std::vector<int>> fired;  // per tick, per atomic
};

Trace run(const System& sys, const Stimulus& stim, Chooser& chooser, std::size_t ticks);
// Canonical trace text; a failed run ends with `!error;<tick>;<Kind>;<path>`.
std::string render_trace(const Trace& t, const System& sys);

}  // namespace syn
