#pragma once

#include <optional>

#include "lightplan/planner.hpp"

namespace lightplan::testing {

// Serial unpruned enumeration of the whole grid: every candidate is
// evaluated, infeasible ones are skipped, and the winner is picked with an
// inline restatement of the declared tie-break order. Kept deliberately
// straight-line as the reference the parallel search is checked against
// (and as the serial side of the search benchmark).
struct ReferenceResult {
    Policy policy;
    double objective = 0;
    double cpu_bytes = 0;
};

std::optional<ReferenceResult> brute_force_search(const HardwareSpec& hw, const ModelSpec& model,
                                                  const WorkloadSpec& workload,
                                                  const SearchGrid& grid,
                                                  const SearchOptions& options = {});

}  // namespace lightplan::testing
