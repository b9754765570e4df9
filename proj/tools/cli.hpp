#pragma once

// Command-line experiment harness. Kept as a library so the test suite can
// drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace rydsim::cli {

/// Runs one invocation; args exclude the program name. Returns the process
/// exit status: 0 success, 1 runtime or statistical failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Angle in radians from "pi", "pi/2", "0.25pi", "-3pi/4" or a plain number.
/// Throws std::invalid_argument on malformed input.
double parse_angle(const std::string& text);

}  // namespace rydsim::cli
