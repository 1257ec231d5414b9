// Times the parallel policy search against the serial reference enumeration
// on the same grid and verifies both return the identical plan.

#include <chrono>
#include <optional>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lightplan/config.hpp"
#include "lightplan/planner.hpp"
#include "search_reference.hpp"

using namespace lightplan;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    HardwareSpec hw;
    hw.gpu_mem_bytes = 16e9;
    hw.cpu_mem_bytes = 192e9;
    hw.gpu_bw = 300e9;
    hw.cpu_bw = 50e9;
    hw.link_bw = 8e9;
    hw.gpu_flops = 65e12;
    hw.cpu_flops = 1.5e12;

    ModelSpec model;
    model.layers = 32;
    model.hidden_dim = 4096;
    model.ffn_dim = 14336;
    model.q_heads = 32;
    model.kv_heads = 8;
    model.experts = 8;
    model.top_k = 2;
    model.weight_dtype_bytes = 2;
    model.kv_dtype_bytes = 2;

    WorkloadSpec workload;
    workload.prompt_len = 512;
    workload.gen_len = 32;

    if (argc > 1) {
        ConfigResult cfg = parse_config_file(argv[1]);
        if (!cfg.ok()) {
            std::fprintf(stderr, "cannot load %s\n", argv[1]);
            return 1;
        }
        hw = cfg.config->hardware;
        model = cfg.config->model;
        workload = cfg.config->workload;
    }

    const SearchGrid grid = SearchGrid::defaults();
    std::printf("grid candidates: %zu\n", grid.candidate_count());

    constexpr int kReps = 5;
    double serial_s = 1e30;
    std::optional<testing::ReferenceResult> reference;
    for (int rep = 0; rep < kReps; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        reference = testing::brute_force_search(hw, model, workload, grid);
        serial_s = std::min(serial_s, seconds_since(t0));
    }
    if (!reference) {
        std::printf("no feasible policy on this fixture\n");
        return 1;
    }
    std::printf("serial reference : %8.3f s  objective %.9g\n", serial_s, reference->objective);

    double parallel_s = 1e30;
    PlanResult parallel;
    for (int rep = 0; rep < kReps; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        parallel = search_policy(hw, model, workload, grid);
        parallel_s = std::min(parallel_s, seconds_since(t0));
    }
#ifdef _OPENMP
    std::printf("parallel search  : %8.3f s  objective %.9g  (%d threads, %.2fx)\n", parallel_s,
                parallel.objective, omp_get_max_threads(), serial_s / parallel_s);
#else
    std::printf("parallel search  : %8.3f s  objective %.9g  (built without OpenMP)\n",
                parallel_s, parallel.objective);
#endif

    const Policy& a = reference->policy;
    const Policy& b = parallel.policy;
    const bool same = a.batch == b.batch && a.micro_batch == b.micro_batch &&
                      a.attn_on_gpu == b.attn_on_gpu && a.ffn_on_gpu == b.ffn_on_gpu &&
                      a.weights_on_gpu == b.weights_on_gpu && a.kv_on_gpu == b.kv_on_gpu &&
                      reference->objective == parallel.objective;
    std::printf("plans identical  : %s\n", same ? "yes" : "NO");
    std::printf("best policy      : N=%lld mu=%lld A_g=%d F_g=%d r_w=%.2f r_c=%.2f\n",
                static_cast<long long>(b.batch), static_cast<long long>(b.micro_batch),
                b.attn_on_gpu ? 1 : 0, b.ffn_on_gpu ? 1 : 0, b.weights_on_gpu, b.kv_on_gpu);
    return same ? 0 : 1;
}
