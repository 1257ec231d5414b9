// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Usage: acceptance <lightplan-cli> <fixtures-dir>

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "batch_reference.hpp"
#include "fixtures.hpp"
#include "latency_oracle.hpp"
#include "lightplan/batcher.hpp"
#include "lightplan/hrm.hpp"
#include "lightplan/pipesim.hpp"
#include "lightplan/planner.hpp"
#include "search_reference.hpp"

namespace fs = std::filesystem;
using namespace lightplan;

namespace {

std::string g_cli;
std::string g_fixtures;
fs::path g_scratch;

struct Outcome {
    bool pass = true;
    std::string detail;
    double elapsed_s = 0;
};

void fail(Outcome& outcome, const std::string& why) {
    outcome.pass = false;
    if (!outcome.detail.empty()) outcome.detail += "; ";
    outcome.detail += why;
}

void check_runtime(Outcome& outcome, double limit_s) {
    if (outcome.elapsed_s >= limit_s) {
        fail(outcome, "runtime " + std::to_string(outcome.elapsed_s) + "s exceeds " +
                          std::to_string(limit_s) + "s");
    }
}

HardwareSpec random_hw(std::mt19937& rng) {
    std::uniform_real_distribution<double> mag(0.1, 1000.0);
    HardwareSpec hw;
    hw.gpu_mem_bytes = hw.cpu_mem_bytes = 1e18;
    hw.cpu_bw = mag(rng);
    hw.gpu_bw = hw.cpu_bw * (1.0 + mag(rng));
    hw.link_bw = mag(rng);
    hw.cpu_flops = mag(rng);
    hw.gpu_flops = hw.cpu_flops * (1.0 + mag(rng));
    return hw;
}

ModelSpec random_model(std::mt19937& rng) {
    std::uniform_int_distribution<int> small(1, 8);
    ModelSpec m;
    m.layers = 1 + small(rng);
    m.kv_heads = small(rng);
    m.q_heads = m.kv_heads * small(rng);
    m.hidden_dim = m.q_heads * 2 * small(rng);
    m.ffn_dim = m.hidden_dim * small(rng);
    m.experts = small(rng);
    m.top_k = 1 + (small(rng) - 1) % m.experts;
    m.weight_dtype_bytes = 2;
    m.kv_dtype_bytes = 2;
    return m;
}

// ---------------------------------------------------------------------------
// 1. HRM algebra
// ---------------------------------------------------------------------------
Outcome hrm_algebra() {
    Outcome outcome;
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> intensity(0.0, 500.0);
    for (int i = 0; i < 10000 && outcome.pass; ++i) {
        const HardwareSpec hw = random_hw(rng);
        const double gi = intensity(rng);
        const double ci = intensity(rng);
        const double cross = attainable_cross(gi, ci, hw);
        if (cross > hw.gpu_flops || cross > hw.gpu_bw * gi || cross > hw.link_bw * ci) {
            fail(outcome, "attainable_cross exceeded a roof");
        }
        const double p1 = turning_point_p1(ci, hw);
        const double p1_direct = std::min(hw.cpu_flops, hw.cpu_bw * ci) / hw.link_bw;
        const double p2 = turning_point_p2(gi, hw);
        const double p2_direct = std::min(hw.gpu_flops, hw.gpu_bw * gi) / hw.link_bw;
        if (std::abs(p1 - p1_direct) > 1e-12 * std::max(1.0, std::abs(p1_direct)) ||
            std::abs(p2 - p2_direct) > 1e-12 * std::max(1.0, std::abs(p2_direct))) {
            fail(outcome, "turning point mismatch vs direct evaluation");
        }
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 2. Intensity laws
// ---------------------------------------------------------------------------
Outcome intensity_laws() {
    Outcome outcome;
    std::mt19937 rng(202);
    std::uniform_int_distribution<int> mu_dist(1, 1024);
    std::uniform_int_distribution<int> ctx_dist(1, 8192);
    for (int i = 0; i < 1000 && outcome.pass; ++i) {
        const ModelSpec m = random_model(rng);
        const double ctx = ctx_dist(rng);
        const double mu = mu_dist(rng);
        const OpProfile a = attention_decode_profile(m, mu, ctx);
        const OpProfile b = attention_decode_profile(m, 2.0 * mu, ctx);
        const OpProfile c = attention_decode_profile(m, 3.0 * mu, ctx);
        if (a.cpu_intensity() != b.cpu_intensity() || a.cpu_intensity() != c.cpu_intensity()) {
            fail(outcome, "attention intensity changed with micro-batch size");
        }
        double previous = 0.0;
        for (double scale : {1.0, 2.0, 4.0, 16.0, 64.0, 256.0}) {
            const double link = moe_ffn_profile(m, mu * scale, 0.0).link_intensity();
            if (link < previous) fail(outcome, "ffn link intensity decreased in mu");
            previous = link;
        }
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 3. Memory anchor
// ---------------------------------------------------------------------------
Outcome memory_anchor() {
    Outcome outcome;
    const ModelSpec m = testing::mixtral_8x22b_model();
    const double expert_bytes = static_cast<double>(m.layers) * layer_weight_bytes(m).experts;
    if (expert_bytes != 270582939648.0) {
        fail(outcome, "expert byte product is not the exact expected value");
    }
    if (!(expert_bytes > 256e9)) fail(outcome, "expert FFN bytes do not exceed 256 GB");
    const MemoryTotals totals = memory_totals(m, {512, 64}, 1);
    if (!(totals.weight_bytes > expert_bytes)) {
        fail(outcome, "total weights do not dominate the expert weights");
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 4. Latency oracle
// ---------------------------------------------------------------------------
Outcome latency_oracle() {
    Outcome outcome;
    const auto hw = testing::toy_hardware();
    const auto model = testing::toy_model();
    const auto workload = testing::toy_workload();
    const auto policy = testing::toy_policy();

    const LatencyBreakdown lat = layer_latency(hw, model, workload, policy, 10.0);
    if (lat.link_upload != 1792.0) fail(outcome, "comm != 1792");
    if (lat.cpu_attention != 256.0) fail(outcome, "t_attn_c != 256");
    if (lat.layer_total != 1792.0) fail(outcome, "t_layer != 1792");

    const auto oracle = testing::oracle_layer_latency(hw, model, policy, 10.0);
    if (lat.link_upload != oracle.comm || lat.cpu_attention != oracle.t_attn_c ||
        lat.layer_total != oracle.t_layer) {
        fail(outcome, "library breakdown disagrees with the independent recomputation");
    }
    if (std::abs(lat.gpu_total() - oracle.t_gpu) > 1e-12 * oracle.t_gpu) {
        fail(outcome, "t_gpu disagrees with the independent recomputation");
    }
    if (std::abs(lat.gpu_total() - 153.6) > 1e-12 * 153.6) {
        fail(outcome, "t_gpu != 153.6 within 1e-12");
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 5. Optimizer soundness
// ---------------------------------------------------------------------------
Outcome optimizer_soundness() {
    Outcome outcome;
    std::mt19937 rng(505);
    std::uniform_int_distribution<int> small(1, 6);
    std::uniform_real_distribution<double> mag(1.0, 50.0);
    int grids_compared = 0;

    for (int trial = 0; trial < 40 && grids_compared < 22; ++trial) {
        ModelSpec model = random_model(rng);
        model.layers = 2 + small(rng);
        WorkloadSpec workload{8 * small(rng), 2 * small(rng)};
        HardwareSpec hw;
        hw.cpu_bw = mag(rng);
        hw.gpu_bw = hw.cpu_bw * (1 + mag(rng));
        hw.link_bw = hw.cpu_bw / (1 + mag(rng) / 10);
        hw.cpu_flops = mag(rng);
        hw.gpu_flops = hw.cpu_flops * (1 + mag(rng));
        const MemoryTotals totals = memory_totals(model, workload, 64);
        hw.gpu_mem_bytes =
            std::uniform_real_distribution<double>(0.2, 2.0)(rng) * totals.weight_bytes + 4096;
        hw.cpu_mem_bytes = (1.5 + mag(rng) / 10) * (totals.weight_bytes + totals.kv_cache_bytes);

        SearchGrid grid;
        for (std::int64_t mu : {1, 2, 4, 8, 16, 32}) {
            if (small(rng) < 5) grid.micro_batch_values.push_back(mu);
        }
        if (grid.micro_batch_values.empty()) grid.micro_batch_values = {1, 4};
        const int max_n_ub = small(rng);
        for (std::int64_t n_ub = 1; n_ub <= max_n_ub; ++n_ub) {
            grid.micro_batch_counts.push_back(n_ub);
        }
        grid.weight_ratio_values = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
        grid.kv_ratio_values = {0.0, 0.25, 0.5, 0.75, 1.0};
        grid.attn_on_gpu_values = {false, true};
        grid.ffn_on_gpu_values = {false, true};
        if (grid.candidate_count() > 5000) continue;

        const auto reference = testing::brute_force_search(hw, model, workload, grid);
        if (!reference) continue;
        ++grids_compared;
        PlanResult plan;
        try {
            plan = search_policy(hw, model, workload, grid);
        } catch (const NoFeasiblePolicyError&) {
            fail(outcome, "search found nothing where brute force found a plan");
            continue;
        }
        const Policy& a = plan.policy;
        const Policy& b = reference->policy;
        if (plan.objective != reference->objective || a.batch != b.batch ||
            a.micro_batch != b.micro_batch || a.attn_on_gpu != b.attn_on_gpu ||
            a.ffn_on_gpu != b.ffn_on_gpu || a.weights_on_gpu != b.weights_on_gpu ||
            a.kv_on_gpu != b.kv_on_gpu) {
            fail(outcome, "search disagrees with brute force on grid " + std::to_string(trial));
        }
    }
    if (grids_compared < 20) {
        fail(outcome, "only " + std::to_string(grids_compared) + " grids compared");
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 6. Schedule dominance
// ---------------------------------------------------------------------------
sim::StepDurations random_durations(std::mt19937& rng) {
    std::uniform_real_distribution<double> compute(0.1, 3.0);
    std::uniform_real_distribution<double> small_io(0.01, 0.3);
    std::uniform_real_distribution<double> weights(0.5, 5.0);
    sim::StepDurations d;
    d.pre_attn = compute(rng);
    d.cpu_attn = compute(rng);
    d.post_attn = compute(rng);
    d.offload_qkv = small_io(rng);
    d.load_hidden = small_io(rng);
    d.weight_stage = small_io(rng);
    d.weight_upload = weights(rng);
    return d;
}

Outcome schedule_dominance() {
    Outcome outcome;

    sim::StepDurations traced;
    traced.pre_attn = 1;
    traced.cpu_attn = 3;
    traced.post_attn = 1;
    const auto traced_dag =
        sim::build_schedule([&](int) { return traced; }, sim::ScheduleKind::CgoPipe, 1, 1, 2);
    if (sim::simulate(traced_dag).makespan != 8.0) {
        fail(outcome, "hand-traced 8-unit example not matched exactly");
    }

    std::mt19937 rng(606);
    std::uniform_int_distribution<int> layers(1, 4);
    std::uniform_int_distribution<int> ubs(1, 4);
    for (int i = 0; i < 100; ++i) {
        const sim::StepDurations d = random_durations(rng);
        const int n_layers = layers(rng);
        const int n_ub = ubs(rng);
        auto makespan = [&](sim::ScheduleKind kind) {
            return sim::simulate(
                       sim::build_schedule([&](int) { return d; }, kind, n_layers, 1, n_ub))
                .makespan;
        };
        const double cgo = makespan(sim::ScheduleKind::CgoPipe);
        if (cgo > makespan(sim::ScheduleKind::S3) + 1e-9) {
            fail(outcome, "cgopipe lost to s3 on instance " + std::to_string(i));
        }
        if (cgo > makespan(sim::ScheduleKind::S2) + 1e-9) {
            fail(outcome, "cgopipe lost to s2 on instance " + std::to_string(i));
        }
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 7. Bound consistency
// ---------------------------------------------------------------------------
Outcome bound_consistency() {
    Outcome outcome;
    std::mt19937 rng(707);
    std::uniform_int_distribution<int> small(1, 5);
    std::uniform_real_distribution<double> mag(1.0, 40.0);
    int dominated_checked = 0;

    for (int trial = 0; trial < 50; ++trial) {
        ModelSpec model = random_model(rng);
        model.layers = 10;
        WorkloadSpec workload{8 * small(rng), 4};
        HardwareSpec hw;
        hw.gpu_mem_bytes = hw.cpu_mem_bytes = 1e18;
        hw.cpu_bw = mag(rng);
        hw.gpu_bw = hw.cpu_bw * (1 + mag(rng));
        hw.link_bw = hw.cpu_bw / (1 + mag(rng) / 5);
        hw.cpu_flops = mag(rng);
        hw.gpu_flops = hw.cpu_flops * (1 + mag(rng));

        Policy policy;
        policy.micro_batch = 1 << (small(rng) % 4);
        policy.batch = policy.micro_batch * (4 + small(rng) % 3);  // n_ub in 4..6
        policy.attn_on_gpu = false;
        policy.ffn_on_gpu = true;
        policy.weights_on_gpu = 0.05 * (small(rng) % 4);

        // Normalize rates so t_layer is O(1): the stated epsilon is absolute
        // in toy units.
        const double ctx = static_cast<double>(workload.prompt_len + 1);
        const double scale = layer_latency(hw, model, workload, policy, ctx).layer_total;
        hw.gpu_bw *= scale;
        hw.cpu_bw *= scale;
        hw.link_bw *= scale;
        hw.gpu_flops *= scale;
        hw.cpu_flops *= scale;

        const LatencyBreakdown lat = layer_latency(hw, model, workload, policy, ctx);
        const auto dag =
            sim::build_schedule(hw, model, workload, policy, sim::ScheduleKind::CgoPipe, 10, 1);
        const sim::SimMetrics m = sim::metrics(dag, sim::simulate(dag));

        if (m.steady_layer_time < lat.layer_total - 1e-9) {
            fail(outcome, "steady layer time fell below the analytic bound");
        }
        const double comm = lat.link_upload;
        const double cpu = lat.cpu_total();
        const double gpu = lat.gpu_total();
        const double top = std::max({comm, cpu, gpu});
        const double second = comm + cpu + gpu - top - std::min({comm, cpu, gpu});
        if (top >= 2.0 * second && policy.micro_batch_count() >= 4) {
            ++dominated_checked;
            // Pipeline fill overhead bound; the 1.25 headroom is pinned here.
            if (m.steady_layer_time > 1.25 * lat.layer_total) {
                fail(outcome, "steady layer time exceeded 1.25x on a dominated config");
            }
        }
    }
    if (dominated_checked < 10) {
        fail(outcome,
             "too few dominated configurations sampled: " + std::to_string(dominated_checked));
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 8. CPU-attention to KV-upload ratio
// ---------------------------------------------------------------------------
Outcome cpu_attention_ratio() {
    Outcome outcome;
    std::mt19937 rng(808);
    std::uniform_int_distribution<int> small(1, 6);
    std::uniform_real_distribution<double> mag(1.0, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        const ModelSpec model = random_model(rng);
        HardwareSpec hw;
        hw.gpu_mem_bytes = hw.cpu_mem_bytes = 1e18;
        hw.cpu_bw = mag(rng);
        hw.gpu_bw = hw.cpu_bw * 4;
        hw.link_bw = hw.cpu_bw / (2 + mag(rng) / 20);
        // Force attention to the CPU memory roof: flops/p_c <= bytes/b_c.
        hw.cpu_flops = 4.0 * static_cast<double>(model.q_heads) /
                       (2.0 * static_cast<double>(model.kv_heads) * model.kv_dtype_bytes) *
                       hw.cpu_bw * (1.5 + mag(rng) / 10);
        hw.gpu_flops = hw.cpu_flops * 2;

        const double ctx = 16 * small(rng);
        const double mu = 1 << (small(rng) % 5);
        const double n_ub = 1 + small(rng);

        const OpProfile attn = attention_decode_profile(model, mu * n_ub, ctx);
        const double cpu_attn_time = attn.cpu_bytes / hw.cpu_bw;
        if (attn.flops / hw.cpu_flops > cpu_attn_time + 1e-15) {
            fail(outcome, "generator failed to make attention memory-bound");
            continue;
        }

        Policy policy;
        policy.micro_batch = static_cast<std::int64_t>(mu);
        policy.batch = static_cast<std::int64_t>(mu * n_ub);
        policy.attn_on_gpu = true;
        policy.ffn_on_gpu = true;
        policy.weights_on_gpu = 0;
        policy.kv_on_gpu = 0;
        const double upload_time =
            n_ub * transfer_sizes(model, policy, ctx).kv_upload / hw.link_bw;

        const double expected = hw.cpu_bw / hw.link_bw;
        const double ratio = upload_time / cpu_attn_time;
        if (std::abs(ratio / expected - 1.0) > 1e-9) {
            fail(outcome, "upload/attention ratio deviates from b_c/b_cg");
        }
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 9. Batcher oracle
// ---------------------------------------------------------------------------
Outcome batcher_oracle() {
    Outcome outcome;

    {
        BatchParams params{2, 2, 1, 1000, true};
        const BatchPlan plan = batch_requests({{"a", 10}, {"b", 8}, {"c", 5}, {"d", 3}}, params);
        if (plan.micro_batches.size() != 2 || !plan.aborted.empty() ||
            plan.micro_batches[0][0].input_len != 8 || plan.micro_batches[0][1].input_len != 5 ||
            plan.micro_batches[1][0].input_len != 10 || plan.micro_batches[1][1].input_len != 3) {
            fail(outcome, "hand trace [10,8,5,3] mismatched");
        }
    }
    {
        BatchParams params{2, 2, 5, 20, false};
        const BatchPlan plan = batch_requests({{"a", 12}, {"b", 10}, {"c", 4}}, params);
        if (plan.aborted.size() != 1 || plan.aborted[0].input_len != 4) {
            fail(outcome, "hand trace [12,10,4] did not abort the overflowing request");
        }
    }

    std::mt19937 rng(909);
    std::uniform_int_distribution<int> queue_len(0, 400);
    std::uniform_int_distribution<std::int64_t> input_len(1, 4096);
    std::uniform_int_distribution<std::int64_t> n_ub(1, 8);
    std::uniform_int_distribution<std::int64_t> ubs(1, 64);
    std::uniform_int_distribution<std::int64_t> gen_len(1, 64);
    for (int trial = 0; trial < 1000 && outcome.pass; ++trial) {
        std::vector<Request> queue;
        const int count = queue_len(rng);
        for (int i = 0; i < count; ++i) {
            queue.push_back({"q" + std::to_string(i), input_len(rng)});
        }
        BatchParams params;
        params.n_ub = n_ub(rng);
        params.ubs = ubs(rng);
        params.gen_len = gen_len(rng);
        params.cache_size = params.gen_len + 1 + input_len(rng) * 2;
        params.flush_partials = false;

        const BatchPlan plan = batch_requests(queue, params);
        const BatchPlan replay = testing::replay_batching(queue, params.n_ub, params.ubs,
                                                          params.gen_len, params.cache_size);
        if (plan.micro_batches.size() != replay.micro_batches.size() ||
            plan.aborted.size() != replay.aborted.size()) {
            fail(outcome, "replay disagreement on trial " + std::to_string(trial));
            break;
        }
        for (std::size_t i = 0; i < plan.micro_batches.size() && outcome.pass; ++i) {
            if (plan.micro_batches[i].size() != replay.micro_batches[i].size()) {
                fail(outcome, "micro-batch size disagreement");
                break;
            }
            std::int64_t sum = 0;
            for (std::size_t j = 0; j < plan.micro_batches[i].size(); ++j) {
                if (plan.micro_batches[i][j].id != replay.micro_batches[i][j].id) {
                    fail(outcome, "micro-batch membership disagreement");
                    break;
                }
                sum += plan.micro_batches[i][j].input_len;
            }
            const std::int64_t occupants = static_cast<std::int64_t>(plan.micro_batches[i].size());
            if (sum + occupants * params.gen_len > params.cache_size) {
                fail(outcome, "emitted micro-batch violates the KV budget");
                break;
            }
        }
        for (std::size_t i = 0; i < plan.aborted.size() && outcome.pass; ++i) {
            if (plan.aborted[i].id != replay.aborted[i].id) {
                fail(outcome, "aborted list disagreement");
            }
        }
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 10. Sweep direction (weights offload grows with link bandwidth)
// ---------------------------------------------------------------------------
Outcome sweep_direction() {
    Outcome outcome;
    ConfigResult cfg = parse_config_file(g_fixtures + "/sweep_a100.cfg");
    if (!cfg.ok()) {
        fail(outcome, "cannot load sweep fixture");
        return outcome;
    }

    // Declared grid: the weights-placement slice of the search space (GPU
    // attention and FFN with the KV cache resident); r_w and the batch
    // shape stay free. The fixture header documents the hardware story.
    SearchGrid grid = SearchGrid::defaults();
    grid.attn_on_gpu_values = {true};
    grid.ffn_on_gpu_values = {true};
    grid.kv_ratio_values = {1.0};

    double previous = 2.0;
    double first = -1, last = -1;
    for (double link_bw = 100e9; link_bw <= 500e9 + 1.0; link_bw += 100e9) {
        HardwareSpec hw = cfg.config->hardware;
        hw.link_bw = link_bw;
        PlanResult plan;
        try {
            plan = search_policy(hw, cfg.config->model, cfg.config->workload, grid);
        } catch (const NoFeasiblePolicyError&) {
            fail(outcome, "sweep point infeasible");
            return outcome;
        }
        if (plan.policy.weights_on_gpu > previous + 1e-12) {
            fail(outcome, "optimal r_w increased with link bandwidth");
        }
        previous = plan.policy.weights_on_gpu;
        if (first < 0) first = previous;
        last = previous;
    }
    if (!(last < first)) {
        fail(outcome, "r_w never actually decreased across the sweep");
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// 11. CLI determinism
// ---------------------------------------------------------------------------
int run_cli(const std::string& args, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const std::string cmd = g_cli + " " + args + " --out " + out_dir.string() + " > " +
                            (out_dir / "stdout.txt").string() + " 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome cli_determinism() {
    Outcome outcome;
    const std::vector<std::string> scenarios = {
        "latency --config " + g_fixtures + "/toy.cfg --ctx 10",
        "plan --config " + g_fixtures + "/toy.cfg --mu-list 1,2,4,8 --max-n-ub 4",
        "simulate --schedule cgopipe --layers 4 --config " + g_fixtures + "/toy.cfg",
        "simulate --schedule s3 --layers 4 --config " + g_fixtures + "/toy.cfg --format csv",
        "simulate --schedule s2 --layers 3 --steps 2 --config " + g_fixtures + "/toy.cfg",
        "roofline --config " + g_fixtures + "/toy.cfg --op ffn --mu 1,4,16",
        "roofline --config " + g_fixtures + "/toy.cfg --op attn --mu 1,4 --ctx 512",
        "batch --requests " + g_fixtures +
            "/requests_small.csv --n-ub 2 --ubs 2 --gen-len 8 --cache-size 2048",
        "sweep --config " + g_fixtures + "/toy.cfg --vary b_cg=2:8:4 --mu-list 1,4 --max-n-ub 2",
    };

    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const fs::path dir_a = g_scratch / ("det_a_" + std::to_string(i));
        const fs::path dir_b = g_scratch / ("det_b_" + std::to_string(i));
        const int status_a = run_cli(scenarios[i], dir_a);
        const int status_b = run_cli(scenarios[i], dir_b);
        if (status_a != 0 || status_b != 0) {
            fail(outcome, "scenario " + std::to_string(i) + " exited nonzero");
            continue;
        }
        int artifacts = 0;
        for (const auto& entry : fs::directory_iterator(dir_a)) {
            const std::string name = entry.path().filename().string();
            if (name == "stdout.txt") continue;  // contains the out dir path
            ++artifacts;
            if (slurp(entry.path()) != slurp(dir_b / name)) {
                fail(outcome, "artifact " + name + " differs between runs of scenario " +
                                  std::to_string(i));
            }
        }
        if (artifacts == 0) fail(outcome, "scenario " + std::to_string(i) + " wrote nothing");
    }
    return outcome;
}

struct Criterion {
    const char* name;
    double runtime_limit_s;  // 0 = no limit stated
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <lightplan-cli> <fixtures-dir>\n");
        return 2;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];
    g_scratch = fs::temp_directory_path() / ("lightplan_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(g_scratch);

    const std::vector<Criterion> criteria = {
        {"01 hrm-algebra", 1.0, hrm_algebra},
        {"02 intensity-laws", 1.0, intensity_laws},
        {"03 memory-anchor", 0.0, memory_anchor},
        {"04 latency-oracle", 0.0, latency_oracle},
        {"05 optimizer-soundness", 30.0, optimizer_soundness},
        {"06 schedule-dominance", 10.0, schedule_dominance},
        {"07 bound-consistency", 10.0, bound_consistency},
        {"08 cpu-attention-ratio", 0.0, cpu_attention_ratio},
        {"09 batcher-oracle", 5.0, batcher_oracle},
        {"10 sweep-direction", 0.0, sweep_direction},
        {"11 cli-determinism", 0.0, cli_determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome = criterion.run();
        outcome.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (criterion.runtime_limit_s > 0) check_runtime(outcome, criterion.runtime_limit_s);
        if (outcome.pass) {
            std::printf("PASS  criterion %-24s (%.2f s)\n", criterion.name, outcome.elapsed_s);
        } else {
            ++failures;
            std::printf("FAIL  criterion %-24s (%.2f s): %s\n", criterion.name, outcome.elapsed_s,
                        outcome.detail.c_str());
        }
    }

    std::error_code ec;
    fs::remove_all(g_scratch, ec);

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
