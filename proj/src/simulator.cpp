#include "syn/simulator.hpp"

#include <functional>

namespace syn {

namespace {

void mix(std::size_t& h, std::size_t v) { h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2); }

}  // namespace

std::size_t hash_value(const Value& v) {
  std::size_t h = static_cast<std::size_t>(v.kind);
  mix(h, static_cast<std::size_t>(v.num));
  mix(h, reinterpret_cast<std::uintptr_t>(v.type));
  for (const auto& i : v.items) mix(h, hash_value(i));
  return h;
}

std::size_t hash_state(const SystemState& s) {
  std::size_t h = s.atoms.size();
  for (const auto& a : s.atoms) {
    mix(h, a.control);
    for (const auto& v : a.vars) mix(h, hash_value(v));
    for (const auto& m : a.buffer) mix(h, m ? hash_value(*m) + 1 : 0);
  }
  return h;
}

std::uint64_t RandomChooser::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

std::size_t ScriptedChooser::choose(std::size_t atom, std::size_t tick, std::span<const std::size_t> enabled) {
  if (tick < fired_.size() && atom < fired_[tick].size())
    for (std::size_t i = 0; i < enabled.size(); ++i)
      if (static_cast<int>(enabled[i]) == fired_[tick][atom]) return i;
  return 0;
}

Automaton derive_automaton(const FunctionTable& t) {
  Automaton a;
  a.states.push_back({"Run", {}});
  a.initial = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    Transition tr;
    tr.name = "row" + std::to_string(i + 1);
    tr.source = tr.target = "Run";
    tr.inputs = r.inputs;
    tr.guard = r.guard;
    tr.outputs = r.outputs;
    tr.pos = r.pos;
    a.transitions.push_back(std::move(tr));
  }
  return a;
}

std::vector<Message> eval_table(const ComponentSpec& c, const FunctionTable& t, const std::vector<Message>& inputs,
                                const TypeTable& types) {
  EvalContext ctx{types, nullptr};
  std::vector<Message> out(c.ports.size());
  for (const auto& row : t.rows) {
    Env env;
    bool ok = true;
    for (const auto& p : row.inputs) {
      auto b = match_pattern(p, inputs[static_cast<std::size_t>(port_index(c, p.port))], ctx);
      if (!b) {
        ok = false;
        break;
      }
      for (auto& [n, v] : *b) env.bind(n, std::move(v));
    }
    if (!ok) continue;
    if (row.guard && !eval_expr(*row.guard, env, ctx).as_bool()) continue;
    for (const auto& o : row.outputs) {
      auto idx = static_cast<std::size_t>(port_index(c, o.port));
      if (o.value) out[idx] = eval_into(*o.value, types.resolve_or_throw(c.ports[idx].type), env, ctx);
    }
    return out;
  }
  return out;
}

System::System(const Model& m) : model_(&m), types_(m), flat_(flatten(m)) {
  if (!flat_.schedule) throw std::logic_error("model has a weakly causal cycle");
  port_types_.resize(flat_.instances.size());
  atom_index_.assign(flat_.instances.size(), -1);
  for (std::size_t i = 0; i < flat_.instances.size(); ++i)
    for (const auto& p : flat_.instances[i].spec->ports) port_types_[i].push_back(types_.resolve_or_throw(p.type));
  for (std::size_t a = 0; a < flat_.atomics.size(); ++a) {
    const Instance& inst = flat_.instances[flat_.atomics[a]];
    atom_index_[flat_.atomics[a]] = static_cast<int>(a);
    if (const auto* au = inst.spec->automaton())
      behaviors_.push_back(*au);
    else
      behaviors_.push_back(derive_automaton(*inst.spec->table()));
    std::vector<Type> vt;
    for (const auto& v : behaviors_.back().vars) vt.push_back(types_.resolve_or_throw(v.type));
    var_types_.push_back(std::move(vt));
  }
  for (std::size_t p = 0; p < m.root.ports.size(); ++p)
    (m.root.ports[p].direction == Direction::In ? root_inputs_ : root_outputs_).push_back(p);
}

std::size_t System::atom_of_instance(int inst) const { return static_cast<std::size_t>(atom_index_.at(inst)); }

AtomicState System::init_atomic(std::size_t a) const {
  const Instance& inst = atom_instance(a);
  const Automaton& au = behaviors_[a];
  AtomicState st;
  st.control = au.initial;
  EvalContext ctx{types_, nullptr};
  for (std::size_t v = 0; v < au.vars.size(); ++v) {
    Env env;
    st.vars.push_back(eval_into(*au.vars[v].init, var_types_[a][v], env, ctx));
  }
  if (inst.spec->causality == Causality::Strong) {
    st.buffer.resize(inst.spec->ports.size());
    const int ii = flat_.atomics[a];
    for (std::size_t p = 0; p < inst.spec->ports.size(); ++p) {
      const auto& port = inst.spec->ports[p];
      if (port.direction != Direction::Out) continue;
      Env env;
      st.buffer[p] = eval_into(*port.initial, port_types_[ii][p], env, ctx);
    }
  }
  return st;
}

SystemState System::init_state() const {
  SystemState s;
  for (std::size_t a = 0; a < atom_count(); ++a) s.atoms.push_back(init_atomic(a));
  return s;
}

void System::fail(std::size_t a, std::size_t tick, const EvalError& e, const std::string& where) const {
  throw StepError({tick, e.kind(), atom_instance(a).path, where + ": " + e.what()});
}

std::vector<EnabledTransition> System::enabled_transitions(std::size_t a, const AtomicState& st,
                                                           const std::vector<Message>& inputs) const {
  const Instance& inst = atom_instance(a);
  const Automaton& au = behaviors_[a];
  EvalContext ctx{types_, nullptr};
  std::vector<EnabledTransition> out;
  const std::string& cur = au.states[st.control].name;
  for (std::size_t i = 0; i < au.transitions.size(); ++i) {
    const Transition& t = au.transitions[i];
    if (t.source != cur) continue;
    Binding binding;
    bool ok = true;
    for (const auto& p : t.inputs) {
      auto b = match_pattern(p, inputs[static_cast<std::size_t>(port_index(*inst.spec, p.port))], ctx);
      if (!b) {
        ok = false;
        break;
      }
      for (auto& kv : *b) binding.push_back(std::move(kv));
    }
    if (!ok) continue;
    if (t.guard) {
      Env env;
      for (std::size_t v = 0; v < au.vars.size(); ++v) env.bind(au.vars[v].name, st.vars[v]);
      for (const auto& [n, v] : binding) env.bind(n, v);
      if (!eval_expr(*t.guard, env, ctx).as_bool()) continue;
    }
    out.push_back({i, std::move(binding)});
  }
  return out;
}

AtomicStep System::fire(std::size_t a, const AtomicState& st, const EnabledTransition& tr) const {
  const Instance& inst = atom_instance(a);
  const int ii = flat_.atomics[a];
  const Automaton& au = behaviors_[a];
  const Transition& t = au.transitions[tr.index];
  EvalContext ctx{types_, nullptr};
  Env env;
  for (std::size_t v = 0; v < au.vars.size(); ++v) env.bind(au.vars[v].name, st.vars[v]);
  for (const auto& [n, v] : tr.binding) env.bind(n, v);
  AtomicStep r;
  r.outputs.resize(inst.spec->ports.size());
  for (const auto& o : t.outputs) {
    auto p = static_cast<std::size_t>(port_index(*inst.spec, o.port));
    if (o.value) r.outputs[p] = eval_into(*o.value, port_types_[ii][p], env, ctx);
  }
  r.next = st;
  for (const auto& u : t.updates) {
    for (std::size_t v = 0; v < au.vars.size(); ++v)
      if (au.vars[v].name == u.var) r.next.vars[v] = eval_into(*u.value, var_types_[a][v], env, ctx);
  }
  for (std::size_t s = 0; s < au.states.size(); ++s)
    if (au.states[s].name == t.target) r.next.control = s;
  r.fired = static_cast<int>(tr.index);
  return r;
}

AtomicStep System::step_atomic(std::size_t a, const AtomicState& st, const std::vector<Message>& inputs,
                               Chooser& chooser, std::size_t tick) const {
  const Instance& inst = atom_instance(a);
  AtomicStep r;
  std::vector<EnabledTransition> en;
  try {
    en = enabled_transitions(a, st, inputs);
  } catch (const EvalError& e) {
    fail(a, tick, e, "precondition");
  }
  if (en.empty()) {
    r.outputs.resize(inst.spec->ports.size());
    r.next = st;
  } else {
    std::size_t pick = 0;
    if (en.size() > 1) {
      std::vector<std::size_t> idx;
      for (const auto& e : en) idx.push_back(e.index);
      pick = chooser.choose(a, tick, idx);
    }
    try {
      r = fire(a, st, en[pick]);
    } catch (const EvalError& e) {
      fail(a, tick, e, "transition " + std::to_string(en[pick].index + 1));
    }
  }
  if (inst.spec->causality == Causality::Strong) {
    // Emit last tick's result, keep this tick's for the next one.
    std::swap(r.outputs, r.next.buffer);
    for (std::size_t p = 0; p < inst.spec->ports.size(); ++p)
      if (inst.spec->ports[p].direction != Direction::Out) r.next.buffer[p].reset();
    r.outputs = st.buffer;
  }
  return r;
}

TickResult System::step_system(const SystemState& st, const std::vector<Message>& root_inputs, Chooser& chooser,
                               std::size_t tick) const {
  TickResult res;
  res.next.atoms.resize(st.atoms.size());
  res.fired.assign(st.atoms.size(), -1);
  res.ports.resize(flat_.instances.size());
  for (std::size_t i = 0; i < flat_.instances.size(); ++i) res.ports[i].resize(flat_.instances[i].spec->ports.size());
  std::vector<bool> done(flat_.instances.size(), false);
  for (std::size_t k = 0; k < root_inputs_.size(); ++k) res.ports[0][root_inputs_[k]] = root_inputs[k];
  // Strong producers are readable from the start of the tick.
  for (std::size_t a = 0; a < atom_count(); ++a) {
    const Instance& inst = atom_instance(a);
    if (inst.spec->causality != Causality::Strong) continue;
    const int ii = flat_.atomics[a];
    for (std::size_t p = 0; p < inst.spec->ports.size(); ++p)
      if (inst.spec->ports[p].direction == Direction::Out) res.ports[ii][p] = st.atoms[a].buffer[p];
    done[ii] = true;
  }
  auto read = [&](const Source& s) -> Message {
    switch (s.kind) {
      case Source::Kind::None: return absent;
      case Source::Kind::RootInput: return res.ports[0][static_cast<std::size_t>(s.port)];
      case Source::Kind::AtomicOutput:
        if (!done[s.inst]) throw std::logic_error("scheduler read " + flat_.instances[s.inst].path + " before it ran");
        return res.ports[s.inst][static_cast<std::size_t>(s.port)];
    }
    return absent;
  };
  for (int ii : *flat_.schedule) {
    const std::size_t a = atom_of_instance(ii);
    const Instance& inst = flat_.instances[ii];
    std::vector<Message> inputs(inst.spec->ports.size());
    for (std::size_t p = 0; p < inst.spec->ports.size(); ++p)
      if (inst.spec->ports[p].direction == Direction::In) inputs[p] = read(inst.input_src[p]);
    AtomicStep step = step_atomic(a, st.atoms[a], inputs, chooser, tick);
    for (std::size_t p = 0; p < inst.spec->ports.size(); ++p)
      res.ports[ii][p] = inst.spec->ports[p].direction == Direction::In ? inputs[p] : step.outputs[p];
    done[ii] = true;
    res.next.atoms[a] = std::move(step.next);
    res.fired[a] = step.fired;
  }
  // Composite ports mirror what flows through them.
  for (std::size_t i = 0; i < flat_.instances.size(); ++i) {
    const Instance& inst = flat_.instances[i];
    if (inst.atomic()) continue;
    for (std::size_t p = 0; p < inst.spec->ports.size(); ++p) {
      if (inst.spec->ports[p].direction == Direction::In) {
        if (i != 0) res.ports[i][p] = read(inst.input_src[p]);
      }
    }
  }
  for (std::size_t k = 0; k < root_outputs_.size(); ++k) {
    const Source& s = flat_.root_outputs[root_outputs_[k]];
    Message m = read(s);
    if (flat_.root().atomic()) m = res.ports[0][root_outputs_[k]];
    res.outputs.push_back(m);
    if (!flat_.root().atomic()) res.ports[0][root_outputs_[k]] = m;
  }
  return res;
}

Trace run(const System& sys, const Stimulus& stim, Chooser& chooser, std::size_t ticks) {
  Trace tr;
  SystemState st = sys.init_state();
  for (std::size_t t = 0; t < ticks && t < stim.rows.size(); ++t) {
    try {
      TickResult r = sys.step_system(st, stim.rows[t], chooser, t);
      tr.rows.push_back({stim.rows[t], std::move(r.outputs)});
      tr.fired.push_back(std::move(r.fired));
      st = std::move(r.next);
    } catch (const StepError& e) {
      tr.error = e.error();
      break;
    }
  }
  return tr;
}

std::string render_trace(const Trace& t, const System& sys) {
  std::string out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out += render_row(i, t.rows[i].inputs, t.rows[i].outputs, sys.model(), sys.types());
    out += '\n';
  }
  if (t.error) {
    out += "!error;" + std::to_string(t.error->tick) + ";" + to_string(t.error->kind) + ";" + t.error->path + "\n";
  }
  return out;
}

}  // namespace syn
