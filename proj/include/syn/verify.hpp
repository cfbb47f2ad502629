// Engine cross-checking and the theory document export.
#pragma once

#include <string>
#include <vector>

#include "syn/bmc.hpp"
#include "syn/smt.hpp"

namespace syn {

struct CrossRow {
  std::string reqId;
  Verdict explicitVerdict;
  Verdict smtVerdict;
  bool agree = false;  // both engines ran and both hold or both violate
};

struct CrossReport {
  std::vector<CrossRow> rows;
  std::vector<std::string> warnings;  // vacuity notes

  bool all_agree() const;
  // reqId<TAB>explicit<TAB>smt<TAB>AGREE|DISAGREE per row.
  std::string render() const;
};

CrossReport cross_check(const System& sys, const std::vector<TemporalFormula>& formulas, std::size_t bound,
                        const SmtOptions& smt, const ExplicitOptions& opt = {});

// Data dictionary first, then one section per component instance with
// children before their parent.
std::string export_theories(const System& sys);
std::size_t theory_section_count(const std::string& doc);

}  // namespace syn
