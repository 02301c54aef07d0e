#pragma once

#include <iosfwd>

namespace qsc {

// Command-line frontend. Subcommands: axioms, expand, magnus, simulate.
// Exit codes: 0 success, 1 a check or convergence criterion failed,
// 2 usage or configuration error. All output is deterministic in the flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsc
