#include "syn/flat.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace syn {

std::vector<const PortSpec*> ports_of(const ComponentSpec& c, Direction d) {
  std::vector<const PortSpec*> out;
  for (const auto& p : c.ports)
    if (p.direction == d) out.push_back(&p);
  return out;
}

int port_index(const ComponentSpec& c, std::string_view name) {
  for (std::size_t i = 0; i < c.ports.size(); ++i)
    if (c.ports[i].name == name) return static_cast<int>(i);
  return -1;
}

int FlatModel::find(std::string_view rel) const {
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].rel == rel) return static_cast<int>(i);
  return -1;
}

namespace {

class Flattener {
 public:
  explicit Flattener(FlatModel& f) : f_(f) {}

  void build(const ComponentSpec& spec, int parent) {
    const int idx = static_cast<int>(f_.instances.size());
    Instance inst;
    inst.spec = &spec;
    inst.parent = parent;
    if (parent < 0) {
      inst.path = spec.name;
    } else {
      const Instance& p = f_.instances[parent];
      inst.path = p.path + "." + spec.name;
      inst.rel = p.rel.empty() ? spec.name : p.rel + "." + spec.name;
    }
    inst.input_src.resize(spec.ports.size());
    inst.input_via.resize(spec.ports.size());
    f_.instances.push_back(std::move(inst));
    if (parent >= 0) f_.instances[parent].children.push_back(idx);
    if (const auto* c = spec.composite())
      for (const auto& s : c->subs) build(s, idx);
    else
      f_.atomics.push_back(idx);
  }

  int child_named(int inst, std::string_view name) const {
    for (int c : f_.instances[inst].children)
      if (f_.instances[c].spec->name == name) return c;
    return -1;
  }

  // Where the message on input `port` of `inst` comes from.
  Source resolve_input(int inst, int port, std::vector<int>& via, int depth = 0) const {
    if (depth > 256) return {};
    const Instance& me = f_.instances[inst];
    const std::string& pname = me.spec->ports[port].name;
    if (me.parent < 0) return {Source::Kind::RootInput, -1, port};
    const Instance& parent = f_.instances[me.parent];
    const Composite& comp = *parent.spec->composite();
    for (const auto& ch : comp.channels) {
      if (ch.to.component != me.spec->name || ch.to.port != pname) continue;
      int from = child_named(me.parent, ch.from.component);
      if (from < 0) return {};
      int fp = port_index(*f_.instances[from].spec, ch.from.port);
      if (fp < 0) return {};
      return resolve_output(from, fp, depth + 1);
    }
    for (const auto& d : comp.delegations) {
      if (d.to.component != me.spec->name || d.to.port != pname || !d.from.component.empty()) continue;
      int pp = port_index(*parent.spec, d.from.port);
      if (pp < 0 || parent.spec->ports[pp].direction != Direction::In) return {};
      via.push_back(me.parent);
      return resolve_input(me.parent, pp, via, depth + 1);
    }
    return {};
  }

  Source resolve_output(int inst, int port, int depth = 0) const {
    if (depth > 256) return {};
    const Instance& me = f_.instances[inst];
    if (me.spec->ports[port].direction != Direction::Out) return {};
    if (me.atomic()) return {Source::Kind::AtomicOutput, inst, port};
    const std::string& pname = me.spec->ports[port].name;
    for (const auto& d : me.spec->composite()->delegations) {
      if (!d.to.component.empty() || d.to.port != pname || d.from.component.empty()) continue;
      int from = child_named(inst, d.from.component);
      if (from < 0) return {};
      int fp = port_index(*f_.instances[from].spec, d.from.port);
      if (fp < 0) return {};
      return resolve_output(from, fp, depth + 1);
    }
    return {};
  }

 private:
  FlatModel& f_;
};

// Child of `parent` on the way down to `inst`, or -1.
int child_toward(const FlatModel& f, int parent, int inst) {
  for (int i = inst; i >= 0; i = f.instances[i].parent)
    if (f.instances[i].parent == parent) return i;
  return -1;
}

// Orders siblings topologically (lowest position first) at every level and
// concatenates, so each composite's atomics run as one block.  Fails when an
// instantaneous path leaves a composite and comes back into it.
std::optional<std::vector<int>> nested_order(const FlatModel& f, int inst) {
  const Instance& me = f.instances[inst];
  if (me.atomic()) return std::vector<int>{inst};
  const auto& kids = me.children;
  const std::size_t n = kids.size();
  auto pos = [&](int c) { return static_cast<std::size_t>(std::find(kids.begin(), kids.end(), c) - kids.begin()); };
  std::vector<std::set<std::size_t>> succ(n);
  std::vector<int> indeg(n, 0);
  for (auto [u, v] : f.instant_edges) {
    int cu = child_toward(f, inst, u), cv = child_toward(f, inst, v);
    if (cu < 0 || cv < 0 || cu == cv) continue;
    if (succ[pos(cu)].insert(pos(cv)).second) ++indeg[pos(cv)];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<int> out;
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::size_t u = ready.top();
    ready.pop();
    ++seen;
    auto sub = nested_order(f, kids[u]);
    if (!sub) return std::nullopt;
    out.insert(out.end(), sub->begin(), sub->end());
    for (std::size_t v : succ[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  if (seen != n) return std::nullopt;
  return out;
}

void analyse_graph(FlatModel& f) {
  const int n = static_cast<int>(f.instances.size());
  std::set<std::pair<int, int>> edges;
  for (int a : f.atomics) {
    const Instance& inst = f.instances[a];
    for (std::size_t p = 0; p < inst.input_src.size(); ++p) {
      const Source& s = inst.input_src[p];
      if (s.kind != Source::Kind::AtomicOutput) continue;
      if (f.instances[s.inst].spec->causality == Causality::Weak) edges.insert({s.inst, a});
    }
  }
  f.instant_edges.assign(edges.begin(), edges.end());

  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (auto [u, v] : f.instant_edges) {
    succ[u].push_back(v);
    ++indeg[v];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int a : f.atomics)
    if (indeg[a] == 0) ready.push(a);
  std::vector<int> order;
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (int v : succ[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  if (order.size() == f.atomics.size()) {
    auto nested = nested_order(f, 0);
    f.nested = nested.has_value();
    f.schedule = nested ? std::move(*nested) : std::move(order);
    return;
  }

  // Tarjan over the leftover nodes to name each cycle.
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on(n, false);
  int counter = 0;
  std::function<void(int)> strong = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (int w : succ[v]) {
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] != index[v]) return;
    std::vector<int> scc;
    int w;
    do {
      w = stack.back();
      stack.pop_back();
      on[w] = false;
      scc.push_back(w);
    } while (w != v);
    bool self = std::find(succ[v].begin(), succ[v].end(), v) != succ[v].end();
    if (scc.size() < 2 && !self) return;
    // Shortest cycle through the lowest member, by breadth-first search.
    std::set<int> members(scc.begin(), scc.end());
    int start = *members.begin();
    std::vector<int> prev(n, -1);
    std::queue<int> q;
    q.push(start);
    int last = -1;
    while (!q.empty() && last < 0) {
      int u = q.front();
      q.pop();
      for (int s : succ[u]) {
        if (!members.count(s)) continue;
        if (s == start) {
          last = u;
          break;
        }
        if (prev[s] < 0) {
          prev[s] = u;
          q.push(s);
        }
      }
    }
    std::vector<int> cycle;
    for (int u = last; u != start && u >= 0; u = prev[u]) cycle.push_back(u);
    cycle.push_back(start);
    std::reverse(cycle.begin(), cycle.end());
    f.cycles.push_back(std::move(cycle));
  };
  for (int a : f.atomics)
    if (index[a] < 0) strong(a);
  std::sort(f.cycles.begin(), f.cycles.end());
}

}  // namespace

FlatModel flatten(const Model& m) {
  FlatModel f;
  f.model = &m;
  Flattener fl(f);
  fl.build(m.root, -1);
  for (std::size_t i = 0; i < f.instances.size(); ++i) {
    Instance& inst = f.instances[i];
    for (std::size_t p = 0; p < inst.spec->ports.size(); ++p) {
      if (inst.spec->ports[p].direction != Direction::In) continue;
      std::vector<int> via;
      inst.input_src[p] = fl.resolve_input(static_cast<int>(i), static_cast<int>(p), via);
      inst.input_via[p] = std::move(via);
    }
  }
  const auto& root = m.root;
  f.root_outputs.resize(root.ports.size());
  for (std::size_t p = 0; p < root.ports.size(); ++p)
    if (root.ports[p].direction == Direction::Out) f.root_outputs[p] = fl.resolve_output(0, static_cast<int>(p));
  analyse_graph(f);
  return f;
}

}  // namespace syn
