#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lightplan/config.hpp"

namespace lightplan::sim {

struct UnsupportedCombinationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CycleDetectedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyTimelineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TaskKind {
    PreAttn,         // layer norm + QKV projection, GPU
    OffloadQkv,      // D1, device-to-host
    CpuAttn,         // attention softmax part on CPU
    LoadHidden,      // D2, host-to-device
    PostAttn,        // O projection + MoE FFN, GPU
    WeightToPinned,  // weight page CPU DRAM -> pinned buffer
    WeightToGpu,     // weight page pinned -> GPU, shares h2d
    KvLoad,          // D4, host-to-device
    GpuAttn,         // attention on GPU
};

enum class Resource { Gpu, Cpu, HostToDevice, DeviceToHost, CpuToPinned };
inline constexpr int kResourceCount = 5;

const char* to_string(TaskKind kind);
const char* to_string(Resource resource);

struct Task {
    TaskKind kind;
    int step = 1;        // decode step, 1-based
    int layer = 1;       // layer within the step, 1-based
    int microbatch = 0;  // 1-based; 0 when not applicable
    int page = 0;        // 1-based page within the layer; 0 when not applicable
    Resource resource;
    double duration = 0;
    // Task indices this one waits on. Lookahead launches may wait on
    // transfers issued later in the stream, so an index can exceed the
    // task's own position; the combined graph stays acyclic.
    std::vector<int> deps;
};

enum class ScheduleKind { CgoPipe, S2, S3, S4 };

ScheduleKind parse_schedule_kind(const std::string& name);
const char* to_string(ScheduleKind kind);

struct ScheduleDag {
    ScheduleKind kind;
    int layers = 0;
    int steps = 0;
    int micro_batches = 0;
    std::vector<Task> tasks;  // issue order; a topological order of deps
};

// Durations for one decode step's tasks. Weight transfer values cover the
// whole layer; CGOPipe splits them evenly over micro_batches pages.
struct StepDurations {
    double pre_attn = 0;
    double offload_qkv = 0;
    double cpu_attn = 0;
    double load_hidden = 0;
    double post_attn = 0;
    double weight_stage = 0;   // whole layer, CPU DRAM -> pinned
    double weight_upload = 0;  // whole layer, pinned -> GPU
    double kv_load = 0;
    double gpu_attn = 0;
};

using DurationProvider = std::function<StepDurations(int step)>;

// Structural builder with injected durations; micro_batches is n_ub.
ScheduleDag build_schedule(const DurationProvider& durations, ScheduleKind kind, int layers,
                           int steps, int micro_batches);

// Durations derived from the analytic cost model: per-kernel times are the
// per-layer roofline terms split evenly across micro-batches, so a layer's
// aggregate load per resource matches the planner's terms; context grows by
// one token per decode step. CGOPipe/S2/S3 require CPU attention (A_g = 0)
// and GPU FFN; S4 requires GPU attention. Anything else throws
// UnsupportedCombinationError.
ScheduleDag build_schedule(const HardwareSpec& hw, const ModelSpec& model,
                           const WorkloadSpec& workload, const Policy& policy, ScheduleKind kind,
                           int layers, int steps);

struct TimelineEntry {
    int task = 0;  // index into ScheduleDag::tasks
    double start = 0;
    double end = 0;
};

struct Timeline {
    std::vector<TimelineEntry> entries;  // aligned with tasks, issue order
    double makespan = 0;
    std::array<double, kResourceCount> busy{};  // per-resource busy time
};

// Deterministic list scheduling: each resource serves its tasks strictly in
// issue order (stream semantics); a task starts once its dependencies and
// the previous task on its resource have finished. Throws
// CycleDetectedError if deps plus the per-resource chains contain a cycle.
Timeline simulate(const ScheduleDag& dag);

struct SimMetrics {
    double makespan = 0;
    std::array<double, kResourceCount> utilization{};
    double steady_layer_time = 0;
};

// steady_layer_time is the median gap between completion times of
// consecutive global layers, taken over interior layers to exclude the
// pipeline fill and drain. Throws EmptyTimelineError on an empty timeline;
// an all-zero-duration timeline yields makespan 0 with utilization 0.
SimMetrics metrics(const ScheduleDag& dag, const Timeline& timeline);

// Post-hoc invariant check: entries match durations, no two entries overlap
// on one resource, and every dependency finishes before its dependent
// starts. Returns an empty string when all hold.
std::string verify_timeline(const ScheduleDag& dag, const Timeline& timeline);

// Timeline JSON per the published schema; CSV flattens the same columns.
std::string timeline_json(const ScheduleDag& dag, const Timeline& timeline,
                          const std::string& manifest_json);
std::string timeline_csv(const ScheduleDag& dag, const Timeline& timeline);

}  // namespace lightplan::sim
