#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightplan {

struct InvalidBatchParametersError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Request {
    std::string id;
    std::int64_t input_len = 0;
};

struct BatchPlan {
    std::vector<std::vector<Request>> micro_batches;
    std::vector<Request> aborted;
};

struct BatchParams {
    std::int64_t n_ub = 1;        // number of open partitions
    std::int64_t ubs = 1;         // requests per sealed micro-batch
    std::int64_t gen_len = 1;     // tokens generated per request
    std::int64_t cache_size = 2;  // KV token budget per micro-batch
    // Emit remaining non-empty partitions as final smaller micro-batches.
    // Off reproduces the literal seal-only behavior (used by oracle tests);
    // on avoids silently dropping accepted requests.
    bool flush_partials = true;
};

// Balanced micro-batching under a KV budget: sort descending by input
// length (ties by id), place each request into the open partition with the
// fewest tokens, abort it if no partition is open or the budget guard
// (sum + len) + (count + 1) * gen_len > cache_size trips, and seal a
// partition once it holds ubs requests.
BatchPlan batch_requests(std::vector<Request> queue, const BatchParams& params);

}  // namespace lightplan
