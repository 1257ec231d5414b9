#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lightplan/config.hpp"
#include "lightplan/opcost.hpp"

namespace lightplan {

struct InfeasiblePolicyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoFeasiblePolicyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-layer decode latency split. GPU terms carry the adjacent projection:
// gpu_attention includes the QKV projection (the pre-attention GPU work) and
// gpu_ffn includes the O projection (the post-attention GPU work), matching
// the simulator's PreAttn/PostAttn task split. layer_total is exactly
// max(link_upload, cpu_total, gpu_total).
struct LatencyBreakdown {
    double link_upload = 0;    // CPU->GPU traffic for one layer / b_cg
    double gpu_attention = 0;
    double gpu_ffn = 0;
    double cpu_attention = 0;
    double cpu_ffn = 0;
    double layer_total = 0;

    double gpu_total() const { return gpu_attention + gpu_ffn; }
    double cpu_total() const { return cpu_attention + cpu_ffn; }
};

// Every computation is timed as max(bytes/bandwidth, flops/peak) at its
// device; flops and activation traffic aggregate over the whole batch while
// layer weights are read once per layer. The link term counts the streamed
// weights, the hidden-state uploads beyond the first micro-batch (the first
// overlaps the previous layer's stream in steady state), and the KV uploads
// when attention runs on the GPU.
LatencyBreakdown layer_latency(const HardwareSpec& hw, const ModelSpec& model,
                               const WorkloadSpec& workload, const Policy& policy, double ctx);

struct MemoryFootprint {
    double gpu_bytes = 0;
    double cpu_bytes = 0;
    bool feasible = false;
};

// GPU holds the resident weight share, a double buffer of two streamed
// layers, the resident KV share, and the activation peak; the CPU holds
// everything offloaded plus the pinned staging mirror of the double buffer.
MemoryFootprint memory_footprint(const HardwareSpec& hw, const ModelSpec& model,
                                 const WorkloadSpec& workload, const Policy& policy);

// Sharding each layer across `tp` GPUs: tp times the GPU memory, bandwidth
// and compute; the CPU side and the link are unchanged.
HardwareSpec apply_tensor_parallelism(const HardwareSpec& hw, int tp);

struct PlanResult {
    Policy policy;
    LatencyBreakdown breakdown;   // at the steady-state context length
    MemoryFootprint memory;
    double decode_throughput = 0;      // tokens/sec over the decode phase
    double generation_throughput = 0;  // tokens/sec over prefill + decode
    double objective = 0;              // value minimized by the search
};

// Decode time sums per-step layer latency with the context growing each
// step; prefill is modeled GPU-compute/weight-stream bound with no pipeline
// optimization. Throws InfeasiblePolicyError if the policy does not fit.
PlanResult estimate_throughput(const HardwareSpec& hw, const ModelSpec& model,
                               const WorkloadSpec& workload, const Policy& policy);

enum class SearchObjective {
    TokensPerSecond,  // minimize layer_total / N  (default)
    LayerLatency,     // minimize layer_total
};

struct SearchGrid {
    std::vector<std::int64_t> micro_batch_values;
    std::vector<std::int64_t> micro_batch_counts;  // n_ub; N = mu * n_ub
    std::vector<double> weight_ratio_values;       // r_w
    std::vector<double> kv_ratio_values;           // r_c, applied only when A_g = 1
    std::vector<bool> attn_on_gpu_values;
    std::vector<bool> ffn_on_gpu_values;

    // mu over powers of two 1..1024 plus multiples of 4 up to 256,
    // n_ub over 1..32, ratios over {0, 0.05, ..., 1}, both placements free.
    static SearchGrid defaults();

    std::size_t candidate_count() const;
};

struct SearchOptions {
    SearchObjective objective = SearchObjective::TokensPerSecond;
    // Context length for the steady-state objective; <0 means s + n/2.
    double ctx_override = -1.0;
};

// Exhaustive over the grid with feasibility pruning; the parallel evaluation
// reduces under a total order (objective, cpu_bytes, N, mu, A_g, F_g, r_w,
// r_c) so the result is identical for any thread count. Throws
// NoFeasiblePolicyError naming the tightest violated constraint.
PlanResult search_policy(const HardwareSpec& hw, const ModelSpec& model,
                         const WorkloadSpec& workload, const SearchGrid& grid,
                         const SearchOptions& options = {});

double steady_context(const WorkloadSpec& workload, const SearchOptions& options);

// True when `a` precedes `b` in the search's total order; exposed so the
// serial reference in the test suite can apply the identical tie-break.
bool plan_preferred(double objective_a, double cpu_bytes_a, const Policy& a,
                    double objective_b, double cpu_bytes_b, const Policy& b);

}  // namespace lightplan
