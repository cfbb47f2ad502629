// Small helpers shared by the unit tests.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "syn/checks.hpp"
#include "syn/parser.hpp"
#include "syn/simulator.hpp"
#include "syn/stimulus.hpp"

namespace syn::test {

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path corpus(const std::string& name) {
  return std::filesystem::path(SYN_SOURCE_DIR) / "corpus" / name;
}

// Fresh scratch directory below the build tree.
inline std::filesystem::path work_dir(const std::string& name) {
  auto d = std::filesystem::path(SYN_WORK_DIR) / name;
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

inline std::string codes(const CheckReport& r) {
  std::string s;
  for (const auto& f : r.findings) s += f.code + " ";
  return s;
}

// Wraps one atomic component as the whole model.
inline std::string single(const std::string& component, const std::string& types = "") {
  return "model T {\n" + types + component + "\n}\n";
}

inline std::string trace_of(const System& sys, const std::string& stim, std::size_t ticks) {
  Stimulus s = parse_stimulus(stim, sys.model(), sys.types());
  FirstChooser first;
  return render_trace(run(sys, s, first, ticks), sys);
}

}  // namespace syn::test
