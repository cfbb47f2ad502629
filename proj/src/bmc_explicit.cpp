#include "syn/bmc.hpp"

#include <algorithm>
#include <unordered_map>

namespace syn {

std::string Verdict::label() const {
  switch (kind) {
    case Kind::Holds: return "HOLDS(" + std::to_string(bound) + ")";
    case Kind::Counterexample: return "CEX(" + std::to_string(violationTick) + ")";
    case Kind::EngineError: return "ERROR";
  }
  return "ERROR";
}

namespace {

struct Config {
  SystemState state;
  std::vector<bool> pending;  // antecedent of a next-tick clause held last tick

  bool operator==(const Config&) const = default;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const {
    std::size_t h = hash_state(c.state);
    for (bool b : c.pending) h = h * 31 + b;
    return h;
  }
};

struct Node {
  int parent = -1;
  std::vector<Message> inputs;  // the tick that led here
  std::vector<int> fired;
};

// Enumerates choice vectors depth-first: each decision point is replayed
// from `digits` and new points start at option 0.
class OdometerChooser : public Chooser {
 public:
  explicit OdometerChooser(std::size_t atoms) : picked(atoms, -1) {}

  std::size_t choose(std::size_t atom, std::size_t, std::span<const std::size_t> enabled) override {
    std::size_t k = 0;
    if (pos_ < digits_.size()) {
      k = digits_[pos_++].first;
    } else {
      digits_.push_back({0, enabled.size()});
      ++pos_;
    }
    picked[atom] = static_cast<int>(enabled[k]);
    return k;
  }
  void restart() {
    pos_ = 0;
    std::fill(picked.begin(), picked.end(), -1);
  }

  // Transition chosen per atomic where a choice was made.
  std::vector<int> picked;

  // Moves to the next combination; false when all are done.
  bool advance() {
    digits_.resize(pos_);
    while (!digits_.empty()) {
      auto& d = digits_.back();
      if (++d.first < d.second) return true;
      digits_.pop_back();
    }
    return false;
  }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> digits_;
  std::size_t pos_ = 0;
};

}  // namespace

Verdict bmc_explicit(const System& sys, const TemporalFormula& f, std::size_t bound, ExplicitOptions opt) {
  Verdict v;
  v.bound = bound;
  const auto& root = sys.model().root;
  std::vector<std::vector<Message>> universe;
  std::uint64_t combos = 1;
  for (std::size_t p : sys.root_inputs()) {
    auto vals = enumerate_values(sys.port_type(0, p), sys.types(), opt.input_cap);
    if (!vals) {
      v.kind = Verdict::Kind::EngineError;
      v.diagnostic = "input " + root.ports[p].name + " has too many values for explicit enumeration";
      return v;
    }
    std::vector<Message> msgs{absent};
    for (auto& x : *vals) msgs.push_back(std::move(x));
    combos *= msgs.size();
    if (combos > opt.input_cap) {
      v.kind = Verdict::Kind::EngineError;
      v.diagnostic = "too many input combinations per tick";
      return v;
    }
    universe.push_back(std::move(msgs));
  }

  std::unordered_map<Config, int, ConfigHash> seen;
  std::vector<Node> nodes;
  std::vector<bool> ante_seen(f.clauses.size(), false);
  std::vector<int> frontier;
  {
    Config c{sys.init_state(), std::vector<bool>(f.clauses.size(), false)};
    seen.emplace(c, 0);
    nodes.push_back({});
    frontier.push_back(0);
  }
  std::vector<Config> configs{seen.begin()->first};

  auto counterexample = [&](int node, const std::vector<Message>& inputs, const std::vector<int>& fired,
                            std::size_t tick) {
    std::vector<std::vector<Message>> rows{inputs};
    std::vector<std::vector<int>> fr{fired};
    for (int n = node; n > 0; n = nodes[n].parent) {
      rows.push_back(nodes[n].inputs);
      fr.push_back(nodes[n].fired);
    }
    std::reverse(rows.begin(), rows.end());
    std::reverse(fr.begin(), fr.end());
    v.kind = Verdict::Kind::Counterexample;
    v.stimulus.rows = std::move(rows);
    v.fired = std::move(fr);
    v.violationTick = tick;
  };

  std::vector<std::size_t> idx(universe.size());
  std::vector<Message> inputs(universe.size());
  for (std::size_t tick = 0; tick < bound; ++tick) {
    std::vector<int> next_frontier;
    for (int node : frontier) {
      const Config cur = configs[static_cast<std::size_t>(node)];
      std::fill(idx.begin(), idx.end(), 0);
      for (;;) {
        for (std::size_t i = 0; i < universe.size(); ++i) inputs[i] = universe[i][idx[i]];
        OdometerChooser chooser(sys.atom_count());
        do {
          chooser.restart();
          TickResult r;
          std::vector<bool> atoms;
          bool failed = false;
          try {
            r = sys.step_system(cur.state, inputs, chooser, tick);
            atoms = eval_atoms(f, sys, cur.state, r.ports[0]);
          } catch (const StepError&) {
            failed = true;
          } catch (const EvalError&) {
            failed = true;
          }
          if (failed) {
            counterexample(node, inputs, chooser.picked, tick);
            return v;
          }
          Config nc{std::move(r.next), std::vector<bool>(f.clauses.size(), false)};
          for (std::size_t c = 0; c < f.clauses.size(); ++c) {
            const auto& cl = f.clauses[c];
            bool ante = eval_prop(cl.antecedent, atoms);
            bool cons = eval_prop(cl.consequent, atoms);
            if (cl.next ? (cur.pending[c] && !cons) : (ante && !cons)) {
              counterexample(node, inputs, chooser.picked, tick);
              return v;
            }
            if (ante && (!cl.next || tick + 1 < bound)) ante_seen[c] = true;
            nc.pending[c] = cl.next && ante;
          }
          auto [it, fresh] = seen.emplace(std::move(nc), static_cast<int>(nodes.size()));
          if (fresh) {
            if (seen.size() > opt.cap) {
              v.kind = Verdict::Kind::EngineError;
              v.diagnostic = "StateSpaceExceeded(" + std::to_string(opt.cap) + ")";
              return v;
            }
            nodes.push_back({node, inputs, chooser.picked});
            configs.push_back(it->first);
            next_frontier.push_back(it->second);
          }
        } while (chooser.advance());
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == universe[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    frontier = std::move(next_frontier);
  }
  v.kind = Verdict::Kind::Holds;
  bool any = false;
  for (bool b : ante_seen) any = any || b;
  if (!any && bound > 0 && !f.clauses.empty()) {
    v.vacuous = true;
    v.diagnostic = "Vacuity: no antecedent is satisfiable within the bound";
  }
  return v;
}

std::optional<std::size_t> replay_violation(const System& sys, const TemporalFormula& f, const Verdict& v) {
  ScriptedChooser chooser(v.fired);
  return first_violation(f, sys, v.stimulus, chooser, v.stimulus.rows.size());
}

}  // namespace syn
