#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lightplan {

// Two-level memory hierarchy: a GPU coupled with its HBM and a CPU coupled
// with host DRAM, joined by a full-duplex link (each direction at link_bw).
struct HardwareSpec {
    double gpu_mem_bytes = 0;   // m_g
    double cpu_mem_bytes = 0;   // m_c
    double gpu_bw = 0;          // b_g, bytes/sec
    double cpu_bw = 0;          // b_c, bytes/sec
    double link_bw = 0;         // b_cg, bytes/sec per direction
    double gpu_flops = 0;       // p_g, FLOP/sec
    double cpu_flops = 0;       // p_c, FLOP/sec
};

// Transformer-MoE shape constants. Dtype widths are bytes per element and
// may be fractional (e.g. 0.5 for int4).
struct ModelSpec {
    std::int64_t layers = 0;        // l
    std::int64_t hidden_dim = 0;    // h1
    std::int64_t ffn_dim = 0;       // h2
    std::int64_t q_heads = 0;       // n_q
    std::int64_t kv_heads = 0;      // n_kv
    std::int64_t experts = 0;       // n_e
    std::int64_t top_k = 0;         // k
    double weight_dtype_bytes = 0;  // dt_w
    double kv_dtype_bytes = 0;      // dt_kv

    std::int64_t head_dim() const { return q_heads > 0 ? hidden_dim / q_heads : 0; }
};

struct WorkloadSpec {
    std::int64_t prompt_len = 0;  // s, average prompt length in tokens
    std::int64_t gen_len = 0;     // n, tokens generated per request
};

// The 6-tuple searched by the planner. batch is the total token count per
// model pass; micro_batch is the slice processed by one GPU kernel launch.
struct Policy {
    std::int64_t batch = 1;        // N
    std::int64_t micro_batch = 1;  // mu
    bool attn_on_gpu = false;      // A_g
    bool ffn_on_gpu = true;        // F_g
    double weights_on_gpu = 0.0;   // r_w in [0,1]
    double kv_on_gpu = 0.0;        // r_c in [0,1], must be 0 when attn_on_gpu is false

    std::int64_t micro_batch_count() const {
        return micro_batch > 0 ? batch / micro_batch : 0;
    }
};

enum class IssueCode {
    NonPositiveField,
    DivisibilityViolation,
    PolicyInconsistency,
    RangeViolation,
    OrderingViolation,
};

struct ValidationIssue {
    IssueCode code;
    std::string field;
    std::string message;
};

const char* to_string(IssueCode code);

// Each returns one issue per violated invariant; empty means valid.
std::vector<ValidationIssue> validate(const HardwareSpec& hw);
std::vector<ValidationIssue> validate(const ModelSpec& model);
std::vector<ValidationIssue> validate(const WorkloadSpec& workload);
std::vector<ValidationIssue> validate(const Policy& policy);

std::string format_issues(const std::vector<ValidationIssue>& issues);

// ---------------------------------------------------------------------------
// Config file format: line-oriented `key = value` under bracketed sections
// [hardware], [model], [workload] and an optional [policy]. Keys are the
// short symbol names (m_g, b_cg, h1, n_kv, N, mu, r_w, ...). Memory and
// bandwidth values accept K|M|G|T suffixes (powers of 1000); FLOP rates
// accept GFLOPS|TFLOPS. `#` starts a comment.
// ---------------------------------------------------------------------------

struct ParsedConfig {
    HardwareSpec hardware;
    ModelSpec model;
    WorkloadSpec workload;
    std::optional<Policy> policy;
};

struct ConfigParseError {
    int line = 0;  // 1-based; 0 when not tied to a specific line
    std::string message;
};

// Parses and validates; on failure exactly one of the error fields is set.
struct ConfigResult {
    std::optional<ParsedConfig> config;
    std::optional<ConfigParseError> parse_error;
    std::vector<ValidationIssue> validation_issues;

    bool ok() const { return config.has_value(); }
};

ConfigResult parse_config_text(const std::string& text);
ConfigResult parse_config_file(const std::string& path);

// Serialization uses shortest-round-trip formatting so parse(serialize(x))
// reproduces every field bit-exactly.
std::string serialize_config(const ParsedConfig& config);

}  // namespace lightplan
