#pragma once

#include "strtour/euler_str.hpp"

#include <iosfwd>
#include <string>

namespace strtour::cli {

enum ExitCode : int { kOk = 0, kFault = 1, kNo = 2 };

/// Stats document written by `solve --stats`: every PassStats field at the top
/// level, per-phase peaks, the pass log and the merge reports.
std::string stats_json(const Graph& g, const SolveResult& r);

/// Entry point of the strtour tool; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace strtour::cli
