#include "lightplan/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lightplan/batcher.hpp"
#include "lightplan/config.hpp"
#include "lightplan/emit.hpp"
#include "lightplan/hrm.hpp"
#include "lightplan/opcost.hpp"
#include "lightplan/pipesim.hpp"
#include "lightplan/planner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lightplan {

namespace {

struct CliError {
    int status;
    std::string message;
};

std::string manifest_json(const std::string& command,
                          const std::vector<std::pair<std::string, std::string>>& inputs,
                          const std::vector<std::string>& outputs) {
    JsonWriter w;
    w.begin_object();
    w.key("command").value(command);
    for (const auto& [key, value] : inputs) w.key(key).value(value);
    w.key("version").value(kToolVersion);
    w.key("outputs").begin_array();
    for (const auto& out : outputs) w.value(out);
    w.end_array();
    w.end_object();
    return w.str();
}

void write_file(const std::string& out_dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{2, "cannot write " + path};
    out << content;
    std::cout << "wrote " << path << "\n";
}

ParsedConfig load_config(const std::string& path) {
    ConfigResult result = parse_config_file(path);
    if (result.parse_error) {
        std::ostringstream msg;
        msg << path;
        if (result.parse_error->line > 0) msg << ":" << result.parse_error->line;
        msg << ": " << result.parse_error->message;
        throw CliError{2, msg.str()};
    }
    if (!result.validation_issues.empty()) {
        throw CliError{2, path + ": " + format_issues(result.validation_issues)};
    }
    return *result.config;
}

Policy require_policy(const ParsedConfig& cfg, const std::string& path) {
    if (!cfg.policy) {
        throw CliError{2, path + ": this command needs a [policy] section in the config"};
    }
    return *cfg.policy;
}

void emit_policy(JsonWriter& w, const Policy& p) {
    w.key("policy").begin_object();
    w.key("N").value(p.batch);
    w.key("mu").value(p.micro_batch);
    w.key("A_g").value(static_cast<std::int64_t>(p.attn_on_gpu ? 1 : 0));
    w.key("F_g").value(static_cast<std::int64_t>(p.ffn_on_gpu ? 1 : 0));
    w.key("r_w").value(p.weights_on_gpu);
    w.key("r_c").value(p.kv_on_gpu);
    w.end_object();
}

void emit_plan_body(JsonWriter& w, const PlanResult& plan) {
    emit_policy(w, plan.policy);
    w.key("latency").begin_object();
    w.key("comm").value(plan.breakdown.link_upload);
    w.key("t_cpu").value(plan.breakdown.cpu_total());
    w.key("t_gpu").value(plan.breakdown.gpu_total());
    w.key("t_layer").value(plan.breakdown.layer_total);
    w.end_object();
    w.key("memory").begin_object();
    w.key("gpu_bytes").value(plan.memory.gpu_bytes);
    w.key("cpu_bytes").value(plan.memory.cpu_bytes);
    w.key("feasible").value(plan.memory.feasible);
    w.end_object();
    w.key("throughput").begin_object();
    w.key("decode").value(plan.decode_throughput);
    w.key("generation").value(plan.generation_throughput);
    w.end_object();
    w.key("objective").value(plan.objective);
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc{} || ptr != item.data() + item.size() || value < 1) {
            throw CliError{2, "expected a comma-separated list of positive integers, got '" +
                                  text + "'"};
        }
        values.push_back(value);
    }
    return values;
}

// --vary b_cg=100G:500G:5  ->  5 evenly spaced samples inclusive.
struct VarySpec {
    std::string field;
    std::vector<double> values;
};

double parse_suffixed(const std::string& text) {
    std::string body = text;
    double scale = 1.0;
    if (!body.empty()) {
        switch (std::toupper(body.back())) {
            case 'K': scale = 1e3; body.pop_back(); break;
            case 'M': scale = 1e6; body.pop_back(); break;
            case 'G': scale = 1e9; body.pop_back(); break;
            case 'T': scale = 1e12; body.pop_back(); break;
            default: break;
        }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc{} || ptr != body.data() + body.size()) {
        throw CliError{2, "cannot parse numeric value '" + text + "'"};
    }
    return value * scale;
}

VarySpec parse_vary(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw CliError{2, "--vary expects field=start:end:count"};
    VarySpec vary;
    vary.field = spec.substr(0, eq);
    const std::string rest = spec.substr(eq + 1);
    std::vector<std::string> parts;
    std::stringstream in(rest);
    std::string item;
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw CliError{2, "--vary expects field=start:end:count"};
    const double start = parse_suffixed(parts[0]);
    const double end = parse_suffixed(parts[1]);
    int count = 0;
    auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
    if (ec != std::errc{} || ptr != parts[2].data() + parts[2].size() || count < 1) {
        throw CliError{2, "--vary count must be a positive integer, got '" + parts[2] + "'"};
    }
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        vary.values.push_back(start + t * (end - start));
    }
    return vary;
}

HardwareSpec apply_vary(const HardwareSpec& base, const std::string& field, double value) {
    HardwareSpec hw = base;
    if (field == "m_g") hw.gpu_mem_bytes = value;
    else if (field == "m_c") hw.cpu_mem_bytes = value;
    else if (field == "b_g") hw.gpu_bw = value;
    else if (field == "b_c") hw.cpu_bw = value;
    else if (field == "b_cg") hw.link_bw = value;
    else if (field == "p_g") hw.gpu_flops = value;
    else if (field == "p_c") hw.cpu_flops = value;
    else if (field == "cpu_scale") {
        hw.cpu_mem_bytes = base.cpu_mem_bytes * value;
        hw.cpu_bw = base.cpu_bw * value;
        hw.cpu_flops = base.cpu_flops * value;
    } else {
        throw CliError{2, "--vary field must be a hardware field or cpu_scale, got " + field};
    }
    return hw;
}

SearchGrid grid_from_flags(const std::string& mu_list, int max_n_ub) {
    SearchGrid grid = SearchGrid::defaults();
    if (!mu_list.empty()) grid.micro_batch_values = parse_int_list(mu_list);
    if (max_n_ub > 0) {
        grid.micro_batch_counts.clear();
        for (std::int64_t n_ub = 1; n_ub <= max_n_ub; ++n_ub) {
            grid.micro_batch_counts.push_back(n_ub);
        }
    }
    return grid;
}

std::vector<Request> load_requests(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{2, "cannot open requests file: " + path};
    std::vector<Request> requests;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (trimmed.empty()) continue;
        if (trimmed.front() == '{') {
            nlohmann::json row = nlohmann::json::parse(trimmed, nullptr, false);
            if (row.is_discarded() || !row.contains("id") || !row.contains("input_len")) {
                throw CliError{2, path + ":" + std::to_string(line_no) +
                                      ": expected {\"id\":..., \"input_len\":...}"};
            }
            Request req;
            req.id = row["id"].is_string() ? row["id"].get<std::string>() : row["id"].dump();
            req.input_len = row["input_len"].get<std::int64_t>();
            requests.push_back(std::move(req));
        } else {
            const auto comma = trimmed.find(',');
            if (comma == std::string::npos) {
                throw CliError{2, path + ":" + std::to_string(line_no) +
                                      ": expected `id,input_len`"};
            }
            Request req;
            req.id = trimmed.substr(0, comma);
            const std::string len = trimmed.substr(comma + 1);
            auto [ptr, ec] = std::from_chars(len.data(), len.data() + len.size(), req.input_len);
            if (ec != std::errc{} || ptr != len.data() + len.size()) {
                throw CliError{2, path + ":" + std::to_string(line_no) +
                                      ": input_len must be an integer, got '" + len + "'"};
            }
            requests.push_back(std::move(req));
        }
    }
    return requests;
}

SearchObjective parse_objective(const std::string& name) {
    if (name == "tokens-per-sec") return SearchObjective::TokensPerSecond;
    if (name == "layer-latency") return SearchObjective::LayerLatency;
    throw CliError{2, "--objective must be tokens-per-sec or layer-latency"};
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_plan(const std::string& config_path, const std::string& out_dir,
             const std::string& objective_name, double ctx, const std::string& mu_list,
             int max_n_ub, int tp) {
    ParsedConfig cfg = load_config(config_path);
    const HardwareSpec hw = apply_tensor_parallelism(cfg.hardware, tp);
    SearchOptions options;
    options.objective = parse_objective(objective_name);
    options.ctx_override = ctx;
    const SearchGrid grid = grid_from_flags(mu_list, max_n_ub);

    PlanResult plan;
    try {
        plan = search_policy(hw, cfg.model, cfg.workload, grid, options);
    } catch (const NoFeasiblePolicyError& e) {
        throw CliError{3, e.what()};
    }

    JsonWriter w;
    w.begin_object();
    w.key("manifest");
    w.begin_object();
    w.key("command").value("plan");
    w.key("config").value(config_path);
    w.key("objective").value(objective_name);
    w.key("version").value(kToolVersion);
    w.end_object();
    emit_plan_body(w, plan);
    w.end_object();
    write_file(out_dir, "plan.json", w.str() + "\n");
    return 0;
}

int cmd_latency(const std::string& config_path, const std::string& out_dir, double ctx, int tp) {
    ParsedConfig cfg = load_config(config_path);
    const HardwareSpec hw = apply_tensor_parallelism(cfg.hardware, tp);
    const Policy policy = require_policy(cfg, config_path);
    if (ctx <= 0) {
        ctx = static_cast<double>(cfg.workload.prompt_len) +
              static_cast<double>(cfg.workload.gen_len) / 2.0;
    }

    PlanResult plan;
    try {
        plan = estimate_throughput(hw, cfg.model, cfg.workload, policy);
        plan.breakdown = layer_latency(hw, cfg.model, cfg.workload, policy, ctx);
    } catch (const InfeasiblePolicyError& e) {
        throw CliError{2, e.what()};
    }

    JsonWriter w;
    w.begin_object();
    w.key("manifest");
    w.begin_object();
    w.key("command").value("latency");
    w.key("config").value(config_path);
    w.key("ctx").value(ctx);
    w.key("version").value(kToolVersion);
    w.end_object();
    emit_plan_body(w, plan);
    w.end_object();
    write_file(out_dir, "latency.json", w.str() + "\n");
    return 0;
}

int cmd_roofline(const std::string& config_path, const std::string& out_dir,
                 const std::string& op, const std::string& mu_list, const std::string& ctx_list,
                 double r_w) {
    ParsedConfig cfg = load_config(config_path);
    std::vector<std::int64_t> ctx_values = parse_int_list(ctx_list);
    if (ctx_values.empty()) {
        ctx_values.push_back(cfg.workload.prompt_len + cfg.workload.gen_len / 2);
    }
    std::vector<std::int64_t> mu_values = parse_int_list(mu_list);
    if (mu_values.empty()) throw CliError{2, "--mu list must not be empty"};

    std::vector<OpProfile> profiles;
    std::vector<std::string> names;
    for (std::int64_t mu : mu_values) {
        if (op == "attn") {
            for (std::int64_t ctx : ctx_values) {
                profiles.push_back(attention_decode_profile(cfg.model, static_cast<double>(mu),
                                                            static_cast<double>(ctx)));
                std::ostringstream name;
                name << "attn_mu" << mu << "_ctx" << ctx;
                names.push_back(name.str());
            }
        } else if (op == "ffn") {
            profiles.push_back(moe_ffn_profile(cfg.model, static_cast<double>(mu), r_w));
            std::ostringstream name;
            name << "ffn_mu" << mu;
            names.push_back(name.str());
        } else {
            throw CliError{2, "--op must be attn or ffn"};
        }
    }

    const std::string manifest =
        manifest_json("roofline", {{"config", config_path}, {"op", op}}, {"roofline.csv"});
    std::string content = "# manifest: " + manifest + "\n";
    content += roofline_csv(roofline_series(profiles, names, cfg.hardware));
    write_file(out_dir, "roofline.csv", content);
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::string& schedule, int layers, int steps, const std::string& format,
                 int tp) {
    ParsedConfig cfg = load_config(config_path);
    const HardwareSpec hw = apply_tensor_parallelism(cfg.hardware, tp);
    const Policy policy = require_policy(cfg, config_path);
    if (layers <= 0) layers = static_cast<int>(cfg.model.layers);
    if (steps <= 0) steps = 1;

    sim::ScheduleDag dag;
    try {
        dag = sim::build_schedule(hw, cfg.model, cfg.workload, policy,
                                  sim::parse_schedule_kind(schedule), layers, steps);
    } catch (const std::invalid_argument& e) {
        throw CliError{2, e.what()};
    } catch (const sim::UnsupportedCombinationError& e) {
        throw CliError{2, e.what()};
    }
    const sim::Timeline timeline = sim::simulate(dag);

    const std::string manifest = manifest_json(
        "simulate", {{"config", config_path}, {"schedule", schedule}},
        {format == "csv" ? "timeline.csv" : "timeline.json"});
    if (format == "csv") {
        write_file(out_dir, "timeline.csv",
                   "# manifest: " + manifest + "\n" + sim::timeline_csv(dag, timeline));
    } else {
        write_file(out_dir, "timeline.json", sim::timeline_json(dag, timeline, manifest) + "\n");
    }
    return 0;
}

int cmd_batch(const std::string& requests_path, const std::string& out_dir, std::int64_t n_ub,
              std::int64_t ubs, std::int64_t gen_len, std::int64_t cache_size, bool no_flush) {
    BatchParams params;
    params.n_ub = n_ub;
    params.ubs = ubs;
    params.gen_len = gen_len;
    params.cache_size = cache_size;
    params.flush_partials = !no_flush;

    BatchPlan plan;
    try {
        plan = batch_requests(load_requests(requests_path), params);
    } catch (const InvalidBatchParametersError& e) {
        throw CliError{2, e.what()};
    }

    JsonWriter w;
    w.begin_object();
    w.key("manifest");
    w.begin_object();
    w.key("command").value("batch");
    w.key("requests").value(requests_path);
    w.key("version").value(kToolVersion);
    w.end_object();
    w.key("micro_batches").begin_array();
    for (const auto& mb : plan.micro_batches) {
        w.begin_array();
        for (const auto& req : mb) w.value(req.id);
        w.end_array();
    }
    w.end_array();
    w.key("aborted").begin_array();
    for (const auto& req : plan.aborted) w.value(req.id);
    w.end_array();
    w.key("sums").begin_array();
    for (const auto& mb : plan.micro_batches) {
        std::int64_t sum = 0;
        for (const auto& req : mb) sum += req.input_len;
        w.value(sum);
    }
    w.end_array();
    w.end_object();
    write_file(out_dir, "batch.json", w.str() + "\n");
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::vector<std::string>& vary_flags, const std::string& objective_name,
              const std::string& mu_list, int max_n_ub, const std::string& format) {
    ParsedConfig cfg = load_config(config_path);
    if (vary_flags.empty()) throw CliError{2, "sweep needs at least one --vary"};
    std::vector<VarySpec> varies;
    for (const auto& flag : vary_flags) varies.push_back(parse_vary(flag));

    SearchOptions options;
    options.objective = parse_objective(objective_name);
    const SearchGrid grid = grid_from_flags(mu_list, max_n_ub);

    struct Row {
        std::vector<double> varied;
        bool feasible = false;
        PlanResult plan;
    };
    std::vector<Row> rows;

    // Nested loops over the vary axes in the order given, last axis fastest.
    std::vector<std::size_t> index(varies.size(), 0);
    while (true) {
        Row row;
        HardwareSpec hw = cfg.hardware;
        for (std::size_t a = 0; a < varies.size(); ++a) {
            const double value = varies[a].values[index[a]];
            row.varied.push_back(value);
            hw = apply_vary(hw, varies[a].field, value);
        }
        try {
            row.plan = search_policy(hw, cfg.model, cfg.workload, grid, options);
            row.feasible = true;
        } catch (const NoFeasiblePolicyError&) {
            row.feasible = false;
        }
        rows.push_back(std::move(row));

        std::size_t axis = varies.size();
        while (axis > 0) {
            --axis;
            if (++index[axis] < varies[axis].values.size()) break;
            index[axis] = 0;
            if (axis == 0) goto done;
        }
    }
done:

    std::vector<std::string> axis_names;
    for (const auto& v : varies) axis_names.push_back(v.field);
    const std::string manifest = manifest_json(
        "sweep", {{"config", config_path}, {"objective", objective_name}},
        {format == "json" ? "sweep.json" : "sweep.csv"});

    if (format == "json") {
        std::ostringstream out;
        out << "{\"manifest\":" << manifest << ",\"rows\":[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Row& row = rows[i];
            if (i > 0) out << ",";
            out << "{";
            for (std::size_t a = 0; a < axis_names.size(); ++a) {
                out << "\"" << axis_names[a] << "\":" << fmt_g9(row.varied[a]) << ",";
            }
            out << "\"feasible\":" << (row.feasible ? "true" : "false");
            if (row.feasible) {
                JsonWriter w;
                w.begin_object();
                emit_plan_body(w, row.plan);
                w.end_object();
                out << ",\"result\":" << w.str();
            }
            out << "}";
        }
        out << "]}\n";
        write_file(out_dir, "sweep.json", out.str());
    } else {
        std::ostringstream out;
        out << "# manifest: " << manifest << "\n";
        for (const auto& name : axis_names) out << name << ',';
        out << "feasible,N,mu,A_g,F_g,r_w,r_c,objective,t_layer,decode_throughput,"
               "generation_throughput\n";
        for (const Row& row : rows) {
            for (double value : row.varied) out << fmt_g9(value) << ',';
            if (row.feasible) {
                const Policy& p = row.plan.policy;
                out << "1," << p.batch << ',' << p.micro_batch << ',' << (p.attn_on_gpu ? 1 : 0)
                    << ',' << (p.ffn_on_gpu ? 1 : 0) << ',' << fmt_g9(p.weights_on_gpu) << ','
                    << fmt_g9(p.kv_on_gpu) << ',' << fmt_g9(row.plan.objective) << ','
                    << fmt_g9(row.plan.breakdown.layer_total) << ','
                    << fmt_g9(row.plan.decode_throughput) << ','
                    << fmt_g9(row.plan.generation_throughput) << '\n';
            } else {
                out << "0,,,,,,,,,,\n";
            }
        }
        write_file(out_dir, "sweep.csv", out.str());
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("LIGHTPLAN_THREADS")) {
        const int threads = std::atoi(env);
        if (threads > 0) omp_set_num_threads(threads);
    }
#endif

    CLI::App app{"Planning and simulation toolkit for memory-constrained MoE inference"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "json";
    int tp = 1;

    auto add_common = [&](CLI::App* cmd, bool with_config = true) {
        if (with_config) cmd->add_option("--config", config_path, "config file")->required();
        cmd->add_option("--out", out_dir, "output directory (default .)");
        cmd->add_option("--format", format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--tp", tp, "tensor-parallel degree (scales GPU memory/bw/compute)")
            ->check(CLI::PositiveNumber);
    };

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "search the policy space for the best plan");
    std::string objective = "tokens-per-sec", mu_list;
    double ctx = -1.0;
    int max_n_ub = -1;
    add_common(plan_cmd);
    plan_cmd->add_option("--objective", objective, "tokens-per-sec|layer-latency");
    plan_cmd->add_option("--ctx", ctx, "context length for the steady-state objective");
    plan_cmd->add_option("--mu-list", mu_list, "comma-separated micro-batch sizes");
    plan_cmd->add_option("--max-n-ub", max_n_ub, "cap on the micro-batch count");

    // latency
    auto* latency_cmd = app.add_subcommand("latency", "per-layer latency for the config's policy");
    add_common(latency_cmd);
    latency_cmd->add_option("--ctx", ctx, "context length (default s + n/2)");

    // roofline
    auto* roof_cmd = app.add_subcommand("roofline", "export roofline series for an operator");
    std::string op = "ffn", roof_mu = "1,2,4,8,16,32,64,128", roof_ctx;
    double roof_rw = 0.0;
    add_common(roof_cmd);
    roof_cmd->add_option("--op", op, "attn|ffn");
    roof_cmd->add_option("--mu", roof_mu, "comma-separated micro-batch sizes");
    roof_cmd->add_option("--ctx", roof_ctx, "comma-separated KV context lengths (default s + n/2)");
    roof_cmd->add_option("--r-w", roof_rw, "resident weight share for the ffn profile");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "simulate a pipeline schedule");
    std::string schedule = "cgopipe";
    int layers = -1, steps = 1;
    add_common(sim_cmd);
    sim_cmd->add_option("--schedule", schedule, "cgopipe|s2|s3|s4");
    sim_cmd->add_option("--layers", layers, "layers to simulate (default model l)");
    sim_cmd->add_option("--steps", steps, "decode steps to simulate (default 1)");

    // batch
    auto* batch_cmd = app.add_subcommand("batch", "partition requests into micro-batches");
    std::string requests_path;
    std::int64_t n_ub = 1, ubs = 1, gen_len = 1, cache_size = 2;
    bool no_flush = false;
    batch_cmd->add_option("--requests", requests_path, "id,input_len CSV or JSON lines")
        ->required();
    batch_cmd->add_option("--out", out_dir, "output directory (default .)");
    batch_cmd->add_option("--n-ub", n_ub, "number of micro-batches")->required();
    batch_cmd->add_option("--ubs", ubs, "requests per micro-batch")->required();
    batch_cmd->add_option("--gen-len", gen_len, "generation length per request")->required();
    batch_cmd->add_option("--cache-size", cache_size, "KV token budget per micro-batch")
        ->required();
    batch_cmd->add_flag("--no-flush", no_flush, "do not emit leftover partial micro-batches");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "re-plan across a hardware grid");
    std::vector<std::string> vary_flags;
    add_common(sweep_cmd);
    sweep_cmd->add_option("--vary", vary_flags, "field=start:end:count (repeatable)")
        ->required();
    sweep_cmd->add_option("--objective", objective, "tokens-per-sec|layer-latency");
    sweep_cmd->add_option("--mu-list", mu_list, "comma-separated micro-batch sizes");
    sweep_cmd->add_option("--max-n-ub", max_n_ub, "cap on the micro-batch count");

    std::vector<std::string> args = argv;  // CLI11 wants reversed argv
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (plan_cmd->parsed()) {
            return cmd_plan(config_path, out_dir, objective, ctx, mu_list, max_n_ub, tp);
        }
        if (latency_cmd->parsed()) return cmd_latency(config_path, out_dir, ctx, tp);
        if (roof_cmd->parsed()) {
            return cmd_roofline(config_path, out_dir, op, roof_mu, roof_ctx, roof_rw);
        }
        if (sim_cmd->parsed()) {
            return cmd_simulate(config_path, out_dir, schedule, layers, steps, format, tp);
        }
        if (batch_cmd->parsed()) {
            return cmd_batch(requests_path, out_dir, n_ub, ubs, gen_len, cache_size, no_flush);
        }
        if (sweep_cmd->parsed()) {
            // A sweep is a policy table; CSV unless JSON was asked for.
            const std::string sweep_format =
                sweep_cmd->count("--format") > 0 ? format : "csv";
            return cmd_sweep(config_path, out_dir, vary_flags, objective, mu_list, max_n_ub,
                             sweep_format);
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace lightplan
