#include "lightplan/batcher.hpp"

#include <algorithm>

namespace lightplan {

BatchPlan batch_requests(std::vector<Request> queue, const BatchParams& params) {
    if (params.n_ub < 1 || params.ubs < 1 || params.gen_len < 1 ||
        params.cache_size < params.gen_len + 1) {
        throw InvalidBatchParametersError(
            "batch parameters require n_ub >= 1, ubs >= 1, gen_len >= 1 and "
            "cache_size >= gen_len + 1");
    }
    for (const Request& req : queue) {
        if (req.input_len < 1) {
            throw InvalidBatchParametersError("request " + req.id + " has input_len < 1");
        }
    }

    std::sort(queue.begin(), queue.end(), [](const Request& a, const Request& b) {
        if (a.input_len != b.input_len) return a.input_len > b.input_len;
        return a.id < b.id;
    });

    std::vector<std::vector<Request>> partitions(params.n_ub);
    std::vector<std::int64_t> sums(params.n_ub, 0);

    BatchPlan plan;
    for (Request& req : queue) {
        if (partitions.empty()) {
            plan.aborted.push_back(std::move(req));
            continue;
        }
        const std::size_t idx = static_cast<std::size_t>(
            std::min_element(sums.begin(), sums.end()) - sums.begin());
        const std::int64_t occupancy =
            static_cast<std::int64_t>(partitions[idx].size());
        if (sums[idx] + req.input_len + (1 + occupancy) * params.gen_len > params.cache_size) {
            plan.aborted.push_back(std::move(req));
            continue;
        }
        sums[idx] += req.input_len;
        partitions[idx].push_back(std::move(req));
        if (static_cast<std::int64_t>(partitions[idx].size()) == params.ubs) {
            plan.micro_batches.push_back(std::move(partitions[idx]));
            partitions.erase(partitions.begin() + static_cast<std::ptrdiff_t>(idx));
            sums.erase(sums.begin() + static_cast<std::ptrdiff_t>(idx));
        }
    }

    if (params.flush_partials) {
        for (auto& partition : partitions) {
            if (!partition.empty()) plan.micro_batches.push_back(std::move(partition));
        }
    }
    return plan;
}

}  // namespace lightplan
