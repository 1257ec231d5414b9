#include "search_reference.hpp"

#include <tuple>

namespace lightplan::testing {

std::optional<ReferenceResult> brute_force_search(const HardwareSpec& hw, const ModelSpec& model,
                                                  const WorkloadSpec& workload,
                                                  const SearchGrid& grid,
                                                  const SearchOptions& options) {
    std::optional<ReferenceResult> best;
    const double ctx = steady_context(workload, options);

    auto better = [](const ReferenceResult& a, const ReferenceResult& b) {
        auto rank = [](const ReferenceResult& r) {
            return std::make_tuple(r.objective, r.cpu_bytes, r.policy.batch, r.policy.micro_batch,
                                   static_cast<int>(r.policy.attn_on_gpu),
                                   static_cast<int>(r.policy.ffn_on_gpu),
                                   r.policy.weights_on_gpu, r.policy.kv_on_gpu);
        };
        return rank(a) < rank(b);
    };

    for (std::int64_t mu : grid.micro_batch_values) {
        for (std::int64_t n_ub : grid.micro_batch_counts) {
            for (bool attn_gpu : grid.attn_on_gpu_values) {
                std::vector<double> kv_ratios =
                    attn_gpu ? grid.kv_ratio_values : std::vector<double>{0.0};
                for (double kv_ratio : kv_ratios) {
                    for (bool ffn_gpu : grid.ffn_on_gpu_values) {
                        for (double weight_ratio : grid.weight_ratio_values) {
                            Policy p;
                            p.micro_batch = mu;
                            p.batch = mu * n_ub;
                            p.attn_on_gpu = attn_gpu;
                            p.ffn_on_gpu = ffn_gpu;
                            p.weights_on_gpu = weight_ratio;
                            p.kv_on_gpu = kv_ratio;

                            const MemoryFootprint fp = memory_footprint(hw, model, workload, p);
                            if (!fp.feasible) continue;
                            const double t_layer =
                                layer_latency(hw, model, workload, p, ctx).layer_total;
                            ReferenceResult candidate;
                            candidate.policy = p;
                            candidate.cpu_bytes = fp.cpu_bytes;
                            candidate.objective =
                                options.objective == SearchObjective::TokensPerSecond
                                    ? t_layer / static_cast<double>(p.batch)
                                    : t_layer;
                            if (!best || better(candidate, *best)) best = candidate;
                        }
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace lightplan::testing
