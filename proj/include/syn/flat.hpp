// Flattened instance tree: every component instance, where each atomic input
// reads its message from, and the instantaneous-dependency graph.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syn/ast.hpp"

namespace syn {

struct Source {
  enum class Kind { None, RootInput, AtomicOutput };
  Kind kind = Kind::None;
  int inst = -1;  // AtomicOutput
  int port = -1;  // port index in the producing spec (or the root spec)

  bool operator==(const Source&) const = default;
};

struct Instance {
  std::string path;  // dotted, starting with the root name
  std::string rel;   // relative to the root, empty for the root itself
  const ComponentSpec* spec = nullptr;
  int parent = -1;
  std::vector<int> children;
  // Indexed by port index of spec; meaningful for input ports.
  std::vector<Source> input_src;
  // Composite instances whose input port an input's chain passes through.
  std::vector<std::vector<int>> input_via;

  bool atomic() const { return !spec->is_composite(); }
};

struct FlatModel {
  const Model* model = nullptr;
  std::vector<Instance> instances;  // preorder, root first
  std::vector<int> atomics;         // preorder
  std::vector<Source> root_outputs; // indexed by root port index
  std::vector<std::pair<int, int>> instant_edges;  // producer -> consumer
  std::optional<std::vector<int>> schedule;         // topological order of atomics
  bool nested = false;  // schedule runs each composite's atomics as one block
  std::vector<std::vector<int>> cycles;             // one per offending strongly connected set

  int find(std::string_view rel) const;
  const Instance& root() const { return instances.front(); }
};

// Tolerates unresolved references (they read as unconnected), so it may run
// before the structural checks pass.
FlatModel flatten(const Model& m);

std::vector<const PortSpec*> ports_of(const ComponentSpec& c, Direction d);
int port_index(const ComponentSpec& c, std::string_view name);

}  // namespace syn
