#pragma once

#include <string>
#include <vector>

namespace lightplan {

inline constexpr const char* kToolVersion = "lightplan 0.1.0";

// Runs one CLI invocation. argv excludes the program name. Returns the
// process exit status: 0 on success, 2 on argument/config/validation
// errors, 3 when the policy search finds nothing feasible.
int run_cli(const std::vector<std::string>& argv);

}  // namespace lightplan
