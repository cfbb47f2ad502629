// Runs the cross check with the build whose SMT unrolling stops one tick
// short.  On the mutated corpus model the explicit engine finds a violation
// at the last covered tick that the short unrolling cannot see, so the report
// must show DISAGREE and the command must exit 1.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "syn/cli.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const fs::path src = fs::path(SYN_SOURCE_DIR) / "corpus";
  const fs::path dir = fs::path(SYN_WORK_DIR) / "fault";
  fs::remove_all(dir);
  fs::create_directories(dir);

  std::string text = slurp(src / "cruise.syn");
  const std::string conj = "not lb and not pf";
  auto at = text.find(conj);
  if (at == std::string::npos) {
    std::cout << "FAIL switch-off conjunct not found\n";
    return 1;
  }
  text.replace(at, conj.size(), "not pf");
  std::ofstream(dir / "mutant.syn") << text;

  const std::string args[] = {"syn",  "verify",   (dir / "mutant.syn").string(), "--reqs", (src / "cruise.req").string(),
                              "--glossary", (src / "cruise.gls").string(), "--bound", "3", "--engine", "cross",
                              "--obl", (dir / "obl").string()};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = syn::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  std::cout << out.str();
  bool flagged = out.str().find("DISAGREE") != std::string::npos;
  bool pass = flagged && code == 1;
  std::cout << (pass ? "PASS" : "FAIL") << " fault-injected unrolling: exit " << code
            << (flagged ? ", DISAGREE reported" : ", no DISAGREE row") << "\n";
  return pass ? 0 : 1;
}
