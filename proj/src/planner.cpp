#include "lightplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lightplan {

namespace {

double roofline_time(double bytes, double bandwidth, double flops, double peak) {
    return std::max(bytes / bandwidth, flops / peak);
}

LatencyBreakdown layer_latency_unchecked(const HardwareSpec& hw, const ModelSpec& model,
                                         const Policy& policy, double ctx) {
    const double batch = static_cast<double>(policy.batch);
    const double n_ub = static_cast<double>(policy.micro_batch_count());

    const OpProfile attn = attention_decode_profile(model, batch, ctx);
    const OpProfile ffn = moe_ffn_profile(model, batch, policy.weights_on_gpu);
    const ProjectionProfiles proj = projection_profiles(model, batch);

    LatencyBreakdown lat;

    // Projections always run on the GPU; they are the pre/post-attention
    // halves of the layer in every schedule.
    const double t_qkv = roofline_time(proj.qkv.gpu_bytes, hw.gpu_bw, proj.qkv.flops, hw.gpu_flops);
    const double t_out =
        roofline_time(proj.output.gpu_bytes, hw.gpu_bw, proj.output.flops, hw.gpu_flops);

    lat.gpu_attention = t_qkv;
    lat.gpu_ffn = t_out;
    if (policy.attn_on_gpu) {
        lat.gpu_attention += roofline_time(attn.gpu_bytes, hw.gpu_bw, attn.flops, hw.gpu_flops);
    } else {
        lat.cpu_attention = roofline_time(attn.cpu_bytes, hw.cpu_bw, attn.flops, hw.cpu_flops);
    }
    if (policy.ffn_on_gpu) {
        lat.gpu_ffn += roofline_time(ffn.gpu_bytes, hw.gpu_bw, ffn.flops, hw.gpu_flops);
    } else {
        lat.cpu_ffn = roofline_time(ffn.cpu_bytes, hw.cpu_bw, ffn.flops, hw.cpu_flops);
    }

    const TransferSizes sizes = transfer_sizes(model, policy, ctx);
    double upload_bytes = sizes.weight_stream;
    if (policy.attn_on_gpu) {
        upload_bytes += n_ub * sizes.kv_upload;
    } else {
        // The first hidden upload of a layer overlaps the previous layer's
        // stream, so steady state pays for n_ub - 1 of them.
        upload_bytes += (n_ub - 1.0) * sizes.hidden_upload;
    }
    lat.link_upload = upload_bytes / hw.link_bw;

    lat.layer_total = std::max({lat.link_upload, lat.cpu_total(), lat.gpu_total()});
    return lat;
}

}  // namespace

LatencyBreakdown layer_latency(const HardwareSpec& hw, const ModelSpec& model,
                               const WorkloadSpec& workload, const Policy& policy, double ctx) {
    MemoryFootprint footprint = memory_footprint(hw, model, workload, policy);
    if (!footprint.feasible) {
        throw InfeasiblePolicyError("policy exceeds device memory (gpu " +
                                    std::to_string(footprint.gpu_bytes) + " / " +
                                    std::to_string(hw.gpu_mem_bytes) + ", cpu " +
                                    std::to_string(footprint.cpu_bytes) + " / " +
                                    std::to_string(hw.cpu_mem_bytes) + ")");
    }
    return layer_latency_unchecked(hw, model, policy, ctx);
}

MemoryFootprint memory_footprint(const HardwareSpec& hw, const ModelSpec& model,
                                 const WorkloadSpec& workload, const Policy& policy) {
    const MemoryTotals totals = memory_totals(model, workload, policy.batch);
    const double layer_bytes = layer_weight_bytes(model).total();
    const double streamed_share = 1.0 - policy.weights_on_gpu;
    const double activation_peak =
        static_cast<double>(policy.micro_batch) *
        static_cast<double>(model.hidden_dim + 2 * model.ffn_dim) * model.weight_dtype_bytes;

    MemoryFootprint fp;
    fp.gpu_bytes = policy.weights_on_gpu * totals.weight_bytes +
                   2.0 * streamed_share * layer_bytes + policy.kv_on_gpu * totals.kv_cache_bytes +
                   activation_peak;
    fp.cpu_bytes = streamed_share * totals.weight_bytes +
                   (1.0 - policy.kv_on_gpu) * totals.kv_cache_bytes +
                   2.0 * streamed_share * layer_bytes;
    fp.feasible = fp.gpu_bytes <= hw.gpu_mem_bytes && fp.cpu_bytes <= hw.cpu_mem_bytes;
    return fp;
}

HardwareSpec apply_tensor_parallelism(const HardwareSpec& hw, int tp) {
    if (tp < 1) throw std::invalid_argument("tensor-parallel degree must be >= 1");
    HardwareSpec scaled = hw;
    scaled.gpu_mem_bytes *= tp;
    scaled.gpu_bw *= tp;
    scaled.gpu_flops *= tp;
    return scaled;
}

namespace {

double prefill_layer_flops(const ModelSpec& model, const Policy& policy,
                           const WorkloadSpec& workload) {
    const double h1 = static_cast<double>(model.hidden_dim);
    const double h2 = static_cast<double>(model.ffn_dim);
    const double d_head = static_cast<double>(model.head_dim());
    const double s = static_cast<double>(workload.prompt_len);
    const double requests = static_cast<double>(policy.batch);

    const double linear_per_token = 2.0 * h1 * static_cast<double>(model.q_heads + 2 * model.kv_heads) * d_head +
                                    2.0 * h1 * h1 +
                                    static_cast<double>(model.top_k) * 6.0 * h1 * h2;
    const double causal_attn = 4.0 * static_cast<double>(model.q_heads) * d_head * s * (s + 1.0) / 2.0;
    return requests * (s * linear_per_token + causal_attn);
}

}  // namespace

PlanResult estimate_throughput(const HardwareSpec& hw, const ModelSpec& model,
                               const WorkloadSpec& workload, const Policy& policy) {
    PlanResult result;
    result.policy = policy;
    result.memory = memory_footprint(hw, model, workload, policy);
    if (!result.memory.feasible) {
        throw InfeasiblePolicyError("policy exceeds device memory");
    }

    const double layers = static_cast<double>(model.layers);
    double decode_time = 0.0;
    for (std::int64_t step = 1; step <= workload.gen_len; ++step) {
        const double ctx = static_cast<double>(workload.prompt_len + step);
        decode_time += layers * layer_latency(hw, model, workload, policy, ctx).layer_total;
    }

    // Prefill runs entirely on the GPU with KV offloaded as it is produced;
    // per layer it is bound by the slower of streaming the layer's weights
    // and the prompt computation.
    const double weight_stream = transfer_sizes(model, policy, 1.0).weight_stream / hw.link_bw;
    const double prefill_compute = prefill_layer_flops(model, policy, workload) / hw.gpu_flops;
    const double prefill_time = layers * std::max(weight_stream, prefill_compute);

    const double generated =
        static_cast<double>(policy.batch) * static_cast<double>(workload.gen_len);
    result.decode_throughput = generated / decode_time;
    result.generation_throughput = generated / (prefill_time + decode_time);

    const double ctx_mid =
        static_cast<double>(workload.prompt_len) + static_cast<double>(workload.gen_len) / 2.0;
    result.breakdown = layer_latency(hw, model, workload, policy, ctx_mid);
    result.objective = result.breakdown.layer_total / static_cast<double>(policy.batch);
    return result;
}

SearchGrid SearchGrid::defaults() {
    SearchGrid grid;
    for (std::int64_t mu = 1; mu <= 1024; mu *= 2) grid.micro_batch_values.push_back(mu);
    for (std::int64_t mu = 4; mu <= 256; mu += 4) grid.micro_batch_values.push_back(mu);
    std::sort(grid.micro_batch_values.begin(), grid.micro_batch_values.end());
    grid.micro_batch_values.erase(
        std::unique(grid.micro_batch_values.begin(), grid.micro_batch_values.end()),
        grid.micro_batch_values.end());
    for (std::int64_t n_ub = 1; n_ub <= 32; ++n_ub) grid.micro_batch_counts.push_back(n_ub);
    for (int i = 0; i <= 20; ++i) {
        grid.weight_ratio_values.push_back(static_cast<double>(i) * 0.05);
        grid.kv_ratio_values.push_back(static_cast<double>(i) * 0.05);
    }
    grid.attn_on_gpu_values = {false, true};
    grid.ffn_on_gpu_values = {false, true};
    return grid;
}

std::size_t SearchGrid::candidate_count() const {
    std::size_t kv_options = 0;
    for (bool attn_gpu : attn_on_gpu_values) {
        kv_options += attn_gpu ? kv_ratio_values.size() : 1;
    }
    return micro_batch_values.size() * micro_batch_counts.size() * weight_ratio_values.size() *
           ffn_on_gpu_values.size() * kv_options;
}

double steady_context(const WorkloadSpec& workload, const SearchOptions& options) {
    if (options.ctx_override > 0) return options.ctx_override;
    return static_cast<double>(workload.prompt_len) + static_cast<double>(workload.gen_len) / 2.0;
}

bool plan_preferred(double objective_a, double cpu_bytes_a, const Policy& a, double objective_b,
                    double cpu_bytes_b, const Policy& b) {
    auto rank = [](double objective, double cpu_bytes, const Policy& p) {
        return std::make_tuple(objective, cpu_bytes, p.batch, p.micro_batch,
                               static_cast<int>(p.attn_on_gpu), static_cast<int>(p.ffn_on_gpu),
                               p.weights_on_gpu, p.kv_on_gpu);
    };
    return rank(objective_a, cpu_bytes_a, a) < rank(objective_b, cpu_bytes_b, b);
}

namespace {

struct Candidate {
    bool valid = false;
    Policy policy;
    double objective = std::numeric_limits<double>::infinity();
    double cpu_bytes = std::numeric_limits<double>::infinity();
    double layer_total = 0;
};

// Sized overflow of the closest-to-fitting infeasible policy, for the
// NoFeasiblePolicy diagnostic.
struct TightestMiss {
    double overflow = std::numeric_limits<double>::infinity();
    bool gpu_side = true;
    double need = 0, have = 0;
};

void merge_miss(TightestMiss& into, const TightestMiss& from) {
    // Total order so the diagnostic is identical for any merge order.
    const auto rank = [](const TightestMiss& m) {
        return std::make_tuple(m.overflow, m.gpu_side ? 0 : 1, m.need);
    };
    if (rank(from) < rank(into)) into = from;
}

}  // namespace

PlanResult search_policy(const HardwareSpec& hw, const ModelSpec& model,
                         const WorkloadSpec& workload, const SearchGrid& grid,
                         const SearchOptions& options) {
    if (grid.micro_batch_values.empty() || grid.micro_batch_counts.empty() ||
        grid.weight_ratio_values.empty() || grid.attn_on_gpu_values.empty() ||
        grid.ffn_on_gpu_values.empty()) {
        throw std::invalid_argument("search grid must be non-empty in every dimension");
    }

    // Flat index space decoded on the fly; the attention placement and the
    // KV ratio form one ragged axis (r_c is only searched when A_g = 1).
    std::vector<std::pair<bool, double>> attn_kv_options;
    for (bool attn_gpu : grid.attn_on_gpu_values) {
        if (attn_gpu) {
            for (double kv_ratio : grid.kv_ratio_values) {
                attn_kv_options.emplace_back(true, kv_ratio);
            }
        } else {
            attn_kv_options.emplace_back(false, 0.0);
        }
    }
    const std::int64_t n_mu = static_cast<std::int64_t>(grid.micro_batch_values.size());
    const std::int64_t n_counts = static_cast<std::int64_t>(grid.micro_batch_counts.size());
    const std::int64_t n_attn_kv = static_cast<std::int64_t>(attn_kv_options.size());
    const std::int64_t n_ffn = static_cast<std::int64_t>(grid.ffn_on_gpu_values.size());
    const std::int64_t n_ratio = static_cast<std::int64_t>(grid.weight_ratio_values.size());
    const std::int64_t total = n_mu * n_counts * n_attn_kv * n_ffn * n_ratio;

    auto decode = [&](std::int64_t index) {
        Policy p;
        p.weights_on_gpu = grid.weight_ratio_values[index % n_ratio];
        index /= n_ratio;
        p.ffn_on_gpu = grid.ffn_on_gpu_values[index % n_ffn];
        index /= n_ffn;
        const auto& [attn_gpu, kv_ratio] = attn_kv_options[index % n_attn_kv];
        p.attn_on_gpu = attn_gpu;
        p.kv_on_gpu = kv_ratio;
        index /= n_attn_kv;
        p.micro_batch = grid.micro_batch_values[index % n_mu];
        p.batch = p.micro_batch * grid.micro_batch_counts[index / n_mu];
        return p;
    };

    const double ctx = steady_context(workload, options);
    Candidate best;
    TightestMiss miss;

#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        Candidate local_best;
        TightestMiss local_miss;
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
        for (std::int64_t i = 0; i < total; ++i) {
            const Policy p = decode(i);
            const MemoryFootprint fp = memory_footprint(hw, model, workload, p);
            if (!fp.feasible) {
                TightestMiss m;
                const double gpu_over = fp.gpu_bytes - hw.gpu_mem_bytes;
                const double cpu_over = fp.cpu_bytes - hw.cpu_mem_bytes;
                if (gpu_over >= cpu_over) {
                    m = {gpu_over, true, fp.gpu_bytes, hw.gpu_mem_bytes};
                } else {
                    m = {cpu_over, false, fp.cpu_bytes, hw.cpu_mem_bytes};
                }
                merge_miss(local_miss, m);
                continue;
            }
            const LatencyBreakdown lat = layer_latency_unchecked(hw, model, p, ctx);
            const double objective = options.objective == SearchObjective::TokensPerSecond
                                         ? lat.layer_total / static_cast<double>(p.batch)
                                         : lat.layer_total;
            if (!local_best.valid ||
                plan_preferred(objective, fp.cpu_bytes, p, local_best.objective,
                               local_best.cpu_bytes, local_best.policy)) {
                local_best = {true, p, objective, fp.cpu_bytes, lat.layer_total};
            }
        }
#ifdef _OPENMP
#pragma omp critical(lightplan_search_merge)
#endif
        {
            if (local_best.valid &&
                (!best.valid || plan_preferred(local_best.objective, local_best.cpu_bytes,
                                               local_best.policy, best.objective, best.cpu_bytes,
                                               best.policy))) {
                best = local_best;
            }
            merge_miss(miss, local_miss);
        }
    }

    if (!best.valid) {
        std::ostringstream msg;
        msg << "no feasible policy in the grid; tightest violated constraint: "
            << (miss.gpu_side ? "gpu" : "cpu") << " memory needs " << miss.need << " bytes of "
            << miss.have << " available";
        throw NoFeasiblePolicyError(msg.str());
    }

    PlanResult result = estimate_throughput(hw, model, workload, best.policy);
    result.breakdown = layer_latency(hw, model, workload, best.policy, ctx);
    result.objective = best.objective;
    return result;
}

}  // namespace lightplan
