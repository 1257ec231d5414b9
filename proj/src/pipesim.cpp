#include "lightplan/pipesim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "lightplan/emit.hpp"
#include "lightplan/opcost.hpp"

namespace lightplan::sim {

const char* to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::PreAttn: return "pre_attn";
        case TaskKind::OffloadQkv: return "offload_qkv";
        case TaskKind::CpuAttn: return "cpu_attn";
        case TaskKind::LoadHidden: return "load_hidden";
        case TaskKind::PostAttn: return "post_attn";
        case TaskKind::WeightToPinned: return "weight_to_pinned";
        case TaskKind::WeightToGpu: return "weight_to_gpu";
        case TaskKind::KvLoad: return "kv_load";
        case TaskKind::GpuAttn: return "gpu_attn";
    }
    return "unknown";
}

const char* to_string(Resource resource) {
    switch (resource) {
        case Resource::Gpu: return "gpu";
        case Resource::Cpu: return "cpu";
        case Resource::HostToDevice: return "h2d";
        case Resource::DeviceToHost: return "d2h";
        case Resource::CpuToPinned: return "ctopin";
    }
    return "unknown";
}

ScheduleKind parse_schedule_kind(const std::string& name) {
    if (name == "cgopipe") return ScheduleKind::CgoPipe;
    if (name == "s2") return ScheduleKind::S2;
    if (name == "s3") return ScheduleKind::S3;
    if (name == "s4") return ScheduleKind::S4;
    throw std::invalid_argument("unknown schedule kind: " + name);
}

const char* to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::CgoPipe: return "cgopipe";
        case ScheduleKind::S2: return "s2";
        case ScheduleKind::S3: return "s3";
        case ScheduleKind::S4: return "s4";
    }
    return "unknown";
}

namespace {

// Builders index work by global micro-batch slot q = (g-1)*M + j, where g
// runs over layers of all decode steps in sequence and j over micro-batches
// of one layer. Weight pages use the same global indexing. Launch-ahead and
// page staging wrap across layer and step boundaries in slot order, so the
// per-step prologue of the steady loop is just the unrolled wrap.
class DagBuilder {
  public:
    DagBuilder(const DurationProvider& durations, ScheduleKind kind, int layers, int steps,
               int micro_batches)
        : durations_(durations), layers_(layers), steps_(steps), m_(micro_batches) {
        if (layers < 1 || steps < 1 || micro_batches < 1) {
            throw std::invalid_argument("layers, steps and micro-batch count must be >= 1");
        }
        global_layers_ = layers * steps;
        slots_ = static_cast<long>(global_layers_) * m_;
        step_cache_.resize(steps + 1);
        for (int s = 1; s <= steps; ++s) step_cache_[s] = durations(s);
        dag_.kind = kind;
        dag_.layers = layers;
        dag_.steps = steps;
        dag_.micro_batches = micro_batches;
        pre_.assign(slots_ + 1, -1);
        off_.assign(slots_ + 1, -1);
        cpu_.assign(slots_ + 1, -1);
        loadh_.assign(slots_ + 1, -1);
        post_.assign(slots_ + 1, -1);
        kv_.assign(slots_ + 1, -1);
        gattn_.assign(slots_ + 1, -1);
        page_up_.assign(slots_ + 1, -1);
        layer_up_.assign(global_layers_ + 1, -1);
        page_pin_.assign(slots_ + 1, -1);
        layer_pin_.assign(global_layers_ + 1, -1);
    }

    ScheduleDag build() {
        switch (dag_.kind) {
            case ScheduleKind::CgoPipe: build_cgopipe(); break;
            case ScheduleKind::S2: build_s2(); break;
            case ScheduleKind::S3: build_s3(); break;
            case ScheduleKind::S4: build_s4(); break;
        }
        attach_weight_gates();
        return std::move(dag_);
    }

  private:
    int layer_of(long q) const { return static_cast<int>((q - 1) / m_) + 1; }  // global layer
    int mb_of(long q) const { return static_cast<int>((q - 1) % m_) + 1; }
    int step_of_layer(int g) const { return (g - 1) / layers_ + 1; }
    int layer_in_step(int g) const { return (g - 1) % layers_ + 1; }

    const StepDurations& durs(int g) const { return step_cache_[step_of_layer(g)]; }

    int add(TaskKind kind, Resource resource, int g, int mb, int page, double duration,
            std::vector<int> deps) {
        Task task;
        task.kind = kind;
        task.step = step_of_layer(g);
        task.layer = layer_in_step(g);
        task.microbatch = mb;
        task.page = page;
        task.resource = resource;
        task.duration = duration;
        task.deps = std::move(deps);
        dag_.tasks.push_back(std::move(task));
        return static_cast<int>(dag_.tasks.size()) - 1;
    }

    // Every GPU task of a layer gates on that layer's complete weight
    // transfer: MoE routing may touch any expert, so no partial-weight
    // start. Lookahead launches reference transfers issued later in the
    // stream, so these edges are attached after the whole list exists.
    void attach_weight_gates() {
        for (std::size_t i = 0; i < dag_.tasks.size(); ++i) {
            Task& task = dag_.tasks[i];
            if (task.kind != TaskKind::PreAttn && task.kind != TaskKind::PostAttn &&
                task.kind != TaskKind::GpuAttn) {
                continue;
            }
            const int g = (task.step - 1) * layers_ + task.layer;
            if (layer_up_[g] >= 0) {
                task.deps.push_back(layer_up_[g]);
                continue;
            }
            for (long p = static_cast<long>(g - 1) * m_ + 1; p <= static_cast<long>(g) * m_;
                 ++p) {
                if (page_up_[p] >= 0) task.deps.push_back(page_up_[p]);
            }
        }
    }

    void emit_page_pin(long p) {
        if (p < 1 || p > slots_) return;
        const int g = layer_of(p);
        page_pin_[p] = add(TaskKind::WeightToPinned, Resource::CpuToPinned, g, 0, mb_of(p),
                           durs(g).weight_stage / m_, {});
    }

    void emit_page_up(long p) {
        if (p < 1 || p > slots_) return;
        const int g = layer_of(p);
        page_up_[p] = add(TaskKind::WeightToGpu, Resource::HostToDevice, g, 0, mb_of(p),
                          durs(g).weight_upload / m_, {page_pin_[p]});
    }

    void emit_layer_pin(int g) {
        if (g < 1 || g > global_layers_) return;
        layer_pin_[g] =
            add(TaskKind::WeightToPinned, Resource::CpuToPinned, g, 0, 0, durs(g).weight_stage, {});
    }

    void emit_layer_up(int g) {
        if (g < 1 || g > global_layers_) return;
        layer_up_[g] = add(TaskKind::WeightToGpu, Resource::HostToDevice, g, 0, 0,
                           durs(g).weight_upload, {layer_pin_[g]});
    }

    void emit_pre_chain(long q) {
        if (q < 1 || q > slots_) return;
        const int g = layer_of(q);
        const int j = mb_of(q);
        std::vector<int> deps;  // residual stream: layer g-1's output for this micro-batch
        if (q > m_ && post_[q - m_] >= 0) deps.push_back(post_[q - m_]);
        pre_[q] = add(TaskKind::PreAttn, Resource::Gpu, g, j, 0, durs(g).pre_attn, std::move(deps));
        off_[q] = add(TaskKind::OffloadQkv, Resource::DeviceToHost, g, j, 0, durs(g).offload_qkv,
                      {pre_[q]});
        cpu_[q] = add(TaskKind::CpuAttn, Resource::Cpu, g, j, 0, durs(g).cpu_attn, {off_[q]});
    }

    void emit_loadh_post(long q) {
        const int g = layer_of(q);
        const int j = mb_of(q);
        loadh_[q] =
            add(TaskKind::LoadHidden, Resource::HostToDevice, g, j, 0, durs(g).load_hidden, {cpu_[q]});
        post_[q] = add(TaskKind::PostAttn, Resource::Gpu, g, j, 0, durs(g).post_attn, {loadh_[q]});
    }

    void build_cgopipe() {
        const long ahead = std::min<long>(2, m_);
        for (long p = 1; p <= m_ && p <= slots_; ++p) {  // layer 1 loads up front
            emit_page_pin(p);
            emit_page_up(p);
        }
        for (long a = 1; a <= ahead; ++a) {
            emit_pre_chain(a);
            emit_page_pin(m_ + a);
        }
        for (long q = 1; q <= slots_; ++q) {
            emit_loadh_post_interleaved(q);
        }
    }

    void emit_loadh_post_interleaved(long q) {
        const long ahead = std::min<long>(2, m_);
        const int g = layer_of(q);
        const int j = mb_of(q);
        loadh_[q] =
            add(TaskKind::LoadHidden, Resource::HostToDevice, g, j, 0, durs(g).load_hidden, {cpu_[q]});
        emit_page_up(q + m_);
        post_[q] = add(TaskKind::PostAttn, Resource::Gpu, g, j, 0, durs(g).post_attn, {loadh_[q]});
        emit_pre_chain(q + ahead);
        emit_page_pin(q + m_ + ahead);
    }

    void build_s2() {
        const long ahead = std::min<long>(2, m_);
        emit_layer_pin(1);
        emit_layer_up(1);
        for (long a = 1; a <= ahead; ++a) emit_pre_chain(a);
        emit_layer_pin(2);
        for (long q = 1; q <= slots_; ++q) {
            const int g = layer_of(q);
            emit_loadh_post(q);
            if (mb_of(q) == m_) emit_layer_up(g + 1);
            emit_pre_chain(q + ahead);
            if (mb_of(q) == m_) emit_layer_pin(g + 2);
        }
    }

    void build_s3() {
        emit_layer_pin(1);
        emit_layer_up(1);
        for (long q = 1; q <= slots_; ++q) {
            const int g = layer_of(q);
            emit_pre_chain(q);
            emit_loadh_post(q);
            if (mb_of(q) == m_) {
                emit_layer_pin(g + 1);
                emit_layer_up(g + 1);
            }
        }
    }

    void build_s4() {
        emit_layer_pin(1);
        emit_layer_up(1);
        emit_kv(1);
        for (long q = 1; q <= slots_; ++q) {
            const int g = layer_of(q);
            const int j = mb_of(q);
            std::vector<int> deps;
            if (q > m_) deps.push_back(post_[q - m_]);
            pre_[q] = add(TaskKind::PreAttn, Resource::Gpu, g, j, 0, durs(g).pre_attn,
                          std::move(deps));
            emit_kv(q + 1);
            gattn_[q] = add(TaskKind::GpuAttn, Resource::Gpu, g, j, 0, durs(g).gpu_attn,
                            {pre_[q], kv_[q]});
            post_[q] = add(TaskKind::PostAttn, Resource::Gpu, g, j, 0, durs(g).post_attn,
                           {gattn_[q]});
            if (j == m_) {
                emit_layer_pin(g + 1);
                emit_layer_up(g + 1);
            }
        }
    }

    void emit_kv(long q) {
        if (q < 1 || q > slots_) return;
        const int g = layer_of(q);
        kv_[q] = add(TaskKind::KvLoad, Resource::HostToDevice, g, mb_of(q), 0, durs(g).kv_load, {});
    }

    const DurationProvider& durations_;
    int layers_, steps_, m_;
    int global_layers_ = 0;
    long slots_ = 0;
    std::vector<StepDurations> step_cache_;
    ScheduleDag dag_;
    std::vector<int> pre_, off_, cpu_, loadh_, post_, kv_, gattn_;
    std::vector<int> page_up_, page_pin_;
    std::vector<int> layer_up_, layer_pin_;
};

}  // namespace

ScheduleDag build_schedule(const DurationProvider& durations, ScheduleKind kind, int layers,
                           int steps, int micro_batches) {
    return DagBuilder(durations, kind, layers, steps, micro_batches).build();
}

ScheduleDag build_schedule(const HardwareSpec& hw, const ModelSpec& model,
                           const WorkloadSpec& workload, const Policy& policy, ScheduleKind kind,
                           int layers, int steps) {
    if (kind == ScheduleKind::S4) {
        if (!policy.attn_on_gpu) {
            throw UnsupportedCombinationError("s4 schedules GPU attention and requires A_g = 1");
        }
    } else if (policy.attn_on_gpu) {
        throw UnsupportedCombinationError(std::string(to_string(kind)) +
                                          " schedules CPU attention and requires A_g = 0"
                                          " (with A_g = 1, use s4)");
    }
    if (!policy.ffn_on_gpu) {
        throw UnsupportedCombinationError(
            "pipeline schedules place the MoE FFN on the GPU and require F_g = 1");
    }

    const int n_ub = static_cast<int>(policy.micro_batch_count());
    const double batch = static_cast<double>(policy.batch);

    auto durations = [=](int step) {
        const double ctx = static_cast<double>(workload.prompt_len + step);
        const OpProfile attn = attention_decode_profile(model, batch, ctx);
        const OpProfile ffn = moe_ffn_profile(model, batch, policy.weights_on_gpu);
        const ProjectionProfiles proj = projection_profiles(model, batch);
        const TransferSizes sizes = transfer_sizes(model, policy, ctx);

        auto rt = [](double bytes, double bw, double flops, double peak) {
            return std::max(bytes / bw, flops / peak);
        };

        StepDurations d;
        d.pre_attn = rt(proj.qkv.gpu_bytes, hw.gpu_bw, proj.qkv.flops, hw.gpu_flops) / n_ub;
        d.post_attn = (rt(proj.output.gpu_bytes, hw.gpu_bw, proj.output.flops, hw.gpu_flops) +
                       rt(ffn.gpu_bytes, hw.gpu_bw, ffn.flops, hw.gpu_flops)) /
                      n_ub;
        if (policy.attn_on_gpu) {
            d.gpu_attn = rt(attn.gpu_bytes, hw.gpu_bw, attn.flops, hw.gpu_flops) / n_ub;
        } else {
            d.cpu_attn = rt(attn.cpu_bytes, hw.cpu_bw, attn.flops, hw.cpu_flops) / n_ub;
        }
        d.offload_qkv = sizes.qkv_offload / hw.link_bw;
        d.load_hidden = sizes.hidden_upload / hw.link_bw;
        d.weight_upload = sizes.weight_stream / hw.link_bw;
        d.weight_stage = sizes.weight_stream / hw.cpu_bw;
        d.kv_load = sizes.kv_upload / hw.link_bw;
        return d;
    };
    return build_schedule(durations, kind, layers, steps, n_ub);
}

Timeline simulate(const ScheduleDag& dag) {
    const std::size_t n = dag.tasks.size();
    Timeline timeline;
    timeline.entries.resize(n);

    // Successor lists over dependency edges plus the per-resource chains
    // (strict issue-order service per resource, i.e. stream semantics).
    std::vector<std::vector<int>> succ(n);
    std::vector<int> pending(n, 0);
    std::array<int, kResourceCount> last_on_resource;
    last_on_resource.fill(-1);

    for (std::size_t i = 0; i < n; ++i) {
        const Task& task = dag.tasks[i];
        for (int dep : task.deps) {
            if (dep < 0 || static_cast<std::size_t>(dep) >= n) {
                throw CycleDetectedError("dependency index out of range");
            }
            succ[dep].push_back(static_cast<int>(i));
            ++pending[i];
        }
        const int r = static_cast<int>(task.resource);
        if (last_on_resource[r] >= 0) {
            succ[last_on_resource[r]].push_back(static_cast<int>(i));
            ++pending[i];
        }
        last_on_resource[r] = static_cast<int>(i);
    }

    std::vector<double> ready_time(n, 0.0);
    std::queue<int> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (pending[i] == 0) ready.push(static_cast<int>(i));
    }

    std::size_t done = 0;
    while (!ready.empty()) {
        const int i = ready.front();
        ready.pop();
        ++done;
        const Task& task = dag.tasks[i];
        TimelineEntry& entry = timeline.entries[i];
        entry.task = i;
        entry.start = ready_time[i];
        entry.end = entry.start + task.duration;
        timeline.makespan = std::max(timeline.makespan, entry.end);
        timeline.busy[static_cast<int>(task.resource)] += task.duration;
        for (int next : succ[i]) {
            ready_time[next] = std::max(ready_time[next], entry.end);
            if (--pending[next] == 0) ready.push(next);
        }
    }
    if (done != n) {
        throw CycleDetectedError("task graph has a cycle through deps or resource order");
    }
    return timeline;
}

SimMetrics metrics(const ScheduleDag& dag, const Timeline& timeline) {
    if (dag.tasks.empty() || timeline.entries.empty()) {
        throw EmptyTimelineError("timeline has no tasks");
    }

    SimMetrics m;
    m.makespan = timeline.makespan;
    for (int r = 0; r < kResourceCount; ++r) {
        m.utilization[r] = m.makespan > 0 ? timeline.busy[r] / m.makespan : 0.0;
    }

    const int global_layers = dag.layers * dag.steps;
    std::vector<double> layer_end(global_layers + 1, 0.0);
    for (std::size_t i = 0; i < dag.tasks.size(); ++i) {
        const Task& task = dag.tasks[i];
        const int g = (task.step - 1) * dag.layers + task.layer;
        layer_end[g] = std::max(layer_end[g], timeline.entries[i].end);
    }

    // Median inter-layer gap over interior layers; the first two layers
    // carry the pipeline fill and the last one the drain.
    std::vector<double> gaps;
    for (int g = 3; g + 1 <= global_layers; ++g) {
        gaps.push_back(layer_end[g] - layer_end[g - 1]);
    }
    if (gaps.empty()) {
        m.steady_layer_time = m.makespan / global_layers;
    } else {
        std::sort(gaps.begin(), gaps.end());
        const std::size_t mid = gaps.size() / 2;
        m.steady_layer_time =
            gaps.size() % 2 == 1 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
    }
    return m;
}

std::string verify_timeline(const ScheduleDag& dag, const Timeline& timeline) {
    constexpr double kTol = 1e-9;
    if (timeline.entries.size() != dag.tasks.size()) return "entry count mismatch";

    std::ostringstream err;
    for (std::size_t i = 0; i < dag.tasks.size(); ++i) {
        const Task& task = dag.tasks[i];
        const TimelineEntry& entry = timeline.entries[i];
        if (std::abs((entry.end - entry.start) - task.duration) > kTol) {
            err << "task " << i << ": span != duration";
            return err.str();
        }
        for (int dep : task.deps) {
            if (timeline.entries[dep].end > entry.start + kTol) {
                err << "task " << i << ": starts before dependency " << dep << " ends";
                return err.str();
            }
        }
    }

    std::array<std::vector<int>, kResourceCount> by_resource;
    for (std::size_t i = 0; i < dag.tasks.size(); ++i) {
        by_resource[static_cast<int>(dag.tasks[i].resource)].push_back(static_cast<int>(i));
    }
    for (auto& tasks : by_resource) {
        std::sort(tasks.begin(), tasks.end(), [&](int a, int b) {
            return timeline.entries[a].start < timeline.entries[b].start;
        });
        for (std::size_t i = 1; i < tasks.size(); ++i) {
            if (timeline.entries[tasks[i]].start + kTol < timeline.entries[tasks[i - 1]].end) {
                err << "tasks " << tasks[i - 1] << " and " << tasks[i]
                    << " overlap on resource "
                    << to_string(dag.tasks[tasks[i]].resource);
                return err.str();
            }
        }
    }
    return "";
}

std::string timeline_json(const ScheduleDag& dag, const Timeline& timeline,
                          const std::string& manifest_json) {
    SimMetrics m = metrics(dag, timeline);
    std::ostringstream out;
    out << "{\"manifest\":" << manifest_json;
    out << ",\"schedule\":\"" << to_string(dag.kind) << "\"";
    out << ",\"tasks\":[";
    for (std::size_t i = 0; i < dag.tasks.size(); ++i) {
        const Task& task = dag.tasks[i];
        const TimelineEntry& entry = timeline.entries[i];
        if (i > 0) out << ",";
        out << "{\"kind\":\"" << to_string(task.kind) << "\",\"step\":" << task.step
            << ",\"layer\":" << task.layer << ",\"microbatch\":" << task.microbatch
            << ",\"page\":" << task.page << ",\"resource\":\"" << to_string(task.resource)
            << "\",\"start\":" << fmt_g9(entry.start) << ",\"end\":" << fmt_g9(entry.end) << "}";
    }
    out << "],\"makespan\":" << fmt_g9(m.makespan);
    out << ",\"utilization\":{";
    const Resource order[] = {Resource::Gpu, Resource::Cpu, Resource::HostToDevice,
                              Resource::DeviceToHost, Resource::CpuToPinned};
    for (int r = 0; r < kResourceCount; ++r) {
        if (r > 0) out << ",";
        out << "\"" << to_string(order[r]) << "\":"
            << fmt_g9(m.utilization[static_cast<int>(order[r])]);
    }
    out << "},\"steady_layer_time\":" << fmt_g9(m.steady_layer_time) << "}";
    return out.str();
}

std::string timeline_csv(const ScheduleDag& dag, const Timeline& timeline) {
    std::ostringstream out;
    out << "kind,step,layer,microbatch,page,resource,start,end\n";
    for (std::size_t i = 0; i < dag.tasks.size(); ++i) {
        const Task& task = dag.tasks[i];
        const TimelineEntry& entry = timeline.entries[i];
        out << to_string(task.kind) << ',' << task.step << ',' << task.layer << ','
            << task.microbatch << ',' << task.page << ',' << to_string(task.resource) << ','
            << fmt_g9(entry.start) << ',' << fmt_g9(entry.end) << '\n';
    }
    return out.str();
}

}  // namespace lightplan::sim
