// Command-line front end: check, simulate, generate, verify, export-theories.
#pragma once

#include <iosfwd>

namespace syn {

// Exit 0 on success, holds or agreement; 1 on findings, violations or
// disagreement; 2 on usage and I/O errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace syn
