#include "lightplan/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace lightplan {

const char* to_string(IssueCode code) {
    switch (code) {
        case IssueCode::NonPositiveField: return "NonPositiveField";
        case IssueCode::DivisibilityViolation: return "DivisibilityViolation";
        case IssueCode::PolicyInconsistency: return "PolicyInconsistency";
        case IssueCode::RangeViolation: return "RangeViolation";
        case IssueCode::OrderingViolation: return "OrderingViolation";
    }
    return "UnknownIssue";
}

namespace {

void require_positive(std::vector<ValidationIssue>& out, double value, const char* field) {
    if (!(value > 0) || !std::isfinite(value)) {
        out.push_back({IssueCode::NonPositiveField, field,
                       std::string(field) + " must be strictly positive"});
    }
}

void require_positive(std::vector<ValidationIssue>& out, std::int64_t value, const char* field) {
    if (value <= 0) {
        out.push_back({IssueCode::NonPositiveField, field,
                       std::string(field) + " must be strictly positive"});
    }
}

}  // namespace

std::vector<ValidationIssue> validate(const HardwareSpec& hw) {
    std::vector<ValidationIssue> issues;
    require_positive(issues, hw.gpu_mem_bytes, "hardware.m_g");
    require_positive(issues, hw.cpu_mem_bytes, "hardware.m_c");
    require_positive(issues, hw.gpu_bw, "hardware.b_g");
    require_positive(issues, hw.cpu_bw, "hardware.b_c");
    require_positive(issues, hw.link_bw, "hardware.b_cg");
    require_positive(issues, hw.gpu_flops, "hardware.p_g");
    require_positive(issues, hw.cpu_flops, "hardware.p_c");
    if (issues.empty()) {
        if (hw.gpu_flops < hw.cpu_flops) {
            issues.push_back({IssueCode::OrderingViolation, "hardware.p_g",
                              "p_g must be >= p_c (GPU sits above CPU in the hierarchy)"});
        }
        if (hw.gpu_bw < hw.cpu_bw) {
            issues.push_back({IssueCode::OrderingViolation, "hardware.b_g",
                              "b_g must be >= b_c (GPU sits above CPU in the hierarchy)"});
        }
    }
    return issues;
}

std::vector<ValidationIssue> validate(const ModelSpec& model) {
    std::vector<ValidationIssue> issues;
    require_positive(issues, model.layers, "model.l");
    require_positive(issues, model.hidden_dim, "model.h1");
    require_positive(issues, model.ffn_dim, "model.h2");
    require_positive(issues, model.q_heads, "model.n_q");
    require_positive(issues, model.kv_heads, "model.n_kv");
    require_positive(issues, model.experts, "model.n_e");
    require_positive(issues, model.top_k, "model.k");
    require_positive(issues, model.weight_dtype_bytes, "model.dt_w");
    require_positive(issues, model.kv_dtype_bytes, "model.dt_kv");
    if (!issues.empty()) return issues;

    if (model.q_heads % model.kv_heads != 0) {
        issues.push_back({IssueCode::DivisibilityViolation, "model.n_q",
                          "n_q must be divisible by n_kv"});
    }
    if (model.hidden_dim % model.q_heads != 0) {
        issues.push_back({IssueCode::DivisibilityViolation, "model.h1",
                          "h1 must be divisible by n_q"});
    }
    if (model.top_k > model.experts) {
        issues.push_back({IssueCode::RangeViolation, "model.k",
                          "k must satisfy 1 <= k <= n_e"});
    }
    return issues;
}

std::vector<ValidationIssue> validate(const WorkloadSpec& workload) {
    std::vector<ValidationIssue> issues;
    require_positive(issues, workload.prompt_len, "workload.s");
    require_positive(issues, workload.gen_len, "workload.n");
    return issues;
}

std::vector<ValidationIssue> validate(const Policy& policy) {
    std::vector<ValidationIssue> issues;
    require_positive(issues, policy.micro_batch, "policy.mu");
    require_positive(issues, policy.batch, "policy.N");
    if (!issues.empty()) return issues;

    if (policy.batch < policy.micro_batch) {
        issues.push_back({IssueCode::RangeViolation, "policy.N", "N must be >= mu"});
    } else if (policy.batch % policy.micro_batch != 0) {
        issues.push_back({IssueCode::DivisibilityViolation, "policy.N",
                          "N must be divisible by mu"});
    }
    if (policy.weights_on_gpu < 0.0 || policy.weights_on_gpu > 1.0) {
        issues.push_back({IssueCode::RangeViolation, "policy.r_w", "r_w must lie in [0,1]"});
    }
    if (policy.kv_on_gpu < 0.0 || policy.kv_on_gpu > 1.0) {
        issues.push_back({IssueCode::RangeViolation, "policy.r_c", "r_c must lie in [0,1]"});
    }
    if (!policy.attn_on_gpu && policy.kv_on_gpu > 0.0) {
        issues.push_back({IssueCode::PolicyInconsistency, "policy.r_c",
                          "r_c must be 0 when A_g = 0 (CPU attention keeps all KV on CPU)"});
    }
    return issues;
}

std::string format_issues(const std::vector<ValidationIssue>& issues) {
    std::ostringstream out;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i > 0) out << "; ";
        out << to_string(issues[i].code) << ": " << issues[i].message;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

enum class Unit { Bytes, BytesPerSec, Flops, Count, Scalar, Flag };

struct KeySpec {
    const char* section;
    const char* key;
    Unit unit;
};

// The full key table; unknown keys are hard errors.
constexpr KeySpec kKeys[] = {
    {"hardware", "m_g", Unit::Bytes},
    {"hardware", "m_c", Unit::Bytes},
    {"hardware", "b_g", Unit::BytesPerSec},
    {"hardware", "b_c", Unit::BytesPerSec},
    {"hardware", "b_cg", Unit::BytesPerSec},
    {"hardware", "p_g", Unit::Flops},
    {"hardware", "p_c", Unit::Flops},
    {"model", "l", Unit::Count},
    {"model", "h1", Unit::Count},
    {"model", "h2", Unit::Count},
    {"model", "n_q", Unit::Count},
    {"model", "n_kv", Unit::Count},
    {"model", "n_e", Unit::Count},
    {"model", "k", Unit::Count},
    {"model", "dt_w", Unit::Scalar},
    {"model", "dt_kv", Unit::Scalar},
    {"workload", "s", Unit::Count},
    {"workload", "n", Unit::Count},
    {"policy", "N", Unit::Count},
    {"policy", "mu", Unit::Count},
    {"policy", "A_g", Unit::Flag},
    {"policy", "F_g", Unit::Flag},
    {"policy", "r_w", Unit::Scalar},
    {"policy", "r_c", Unit::Scalar},
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, Unit unit, double& out, std::string& err) {
    std::string body = text;
    double scale = 1.0;

    auto ends_with = [&](const char* suffix) {
        std::size_t len = std::char_traits<char>::length(suffix);
        return body.size() > len &&
               std::equal(body.end() - len, body.end(), suffix,
                          [](char a, char b) { return std::toupper(a) == b; });
    };
    auto strip = [&](std::size_t n) { body = body.substr(0, body.size() - n); };

    if (unit == Unit::Flops) {
        if (ends_with("TFLOPS")) { scale = 1e12; strip(6); }
        else if (ends_with("GFLOPS")) { scale = 1e9; strip(6); }
    } else if (unit == Unit::Bytes || unit == Unit::BytesPerSec) {
        if (ends_with("K")) { scale = 1e3; strip(1); }
        else if (ends_with("M")) { scale = 1e6; strip(1); }
        else if (ends_with("G")) { scale = 1e9; strip(1); }
        else if (ends_with("T")) { scale = 1e12; strip(1); }
    }

    body = trim(body);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc{} || ptr != body.data() + body.size()) {
        err = "cannot parse numeric value '" + text + "'";
        return false;
    }
    out = value * scale;
    return true;
}

bool assign_field(ParsedConfig& cfg, const std::string& section, const std::string& key,
                  double value, std::string& err) {
    auto as_count = [&](std::int64_t& dst) {
        if (value != std::floor(value)) {
            err = key + " must be an integer";
            return false;
        }
        dst = static_cast<std::int64_t>(value);
        return true;
    };
    auto as_flag = [&](bool& dst) {
        if (value != 0.0 && value != 1.0) {
            err = key + " must be 0 or 1";
            return false;
        }
        dst = value != 0.0;
        return true;
    };

    if (section == "hardware") {
        HardwareSpec& h = cfg.hardware;
        if (key == "m_g") h.gpu_mem_bytes = value;
        else if (key == "m_c") h.cpu_mem_bytes = value;
        else if (key == "b_g") h.gpu_bw = value;
        else if (key == "b_c") h.cpu_bw = value;
        else if (key == "b_cg") h.link_bw = value;
        else if (key == "p_g") h.gpu_flops = value;
        else if (key == "p_c") h.cpu_flops = value;
        return true;
    }
    if (section == "model") {
        ModelSpec& m = cfg.model;
        if (key == "l") return as_count(m.layers);
        if (key == "h1") return as_count(m.hidden_dim);
        if (key == "h2") return as_count(m.ffn_dim);
        if (key == "n_q") return as_count(m.q_heads);
        if (key == "n_kv") return as_count(m.kv_heads);
        if (key == "n_e") return as_count(m.experts);
        if (key == "k") return as_count(m.top_k);
        if (key == "dt_w") { m.weight_dtype_bytes = value; return true; }
        if (key == "dt_kv") { m.kv_dtype_bytes = value; return true; }
    }
    if (section == "workload") {
        if (key == "s") return as_count(cfg.workload.prompt_len);
        if (key == "n") return as_count(cfg.workload.gen_len);
    }
    if (section == "policy") {
        Policy& p = *cfg.policy;
        if (key == "N") return as_count(p.batch);
        if (key == "mu") return as_count(p.micro_batch);
        if (key == "A_g") return as_flag(p.attn_on_gpu);
        if (key == "F_g") return as_flag(p.ffn_on_gpu);
        if (key == "r_w") { p.weights_on_gpu = value; return true; }
        if (key == "r_c") { p.kv_on_gpu = value; return true; }
    }
    err = "unhandled key";  // unreachable if kKeys and this switch agree
    return false;
}

}  // namespace

ConfigResult parse_config_text(const std::string& text) {
    ConfigResult result;
    ParsedConfig cfg;
    std::map<std::string, bool> sections_seen;
    std::map<std::string, int> keys_seen;  // "section.key" -> first line

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;

    auto fail = [&](int line, const std::string& message) {
        result.parse_error = ConfigParseError{line, message};
        return result;
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') return fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& k : kKeys) known = known || section == k.section;
            if (!known) return fail(line_no, "unknown section [" + section + "]");
            sections_seen[section] = true;
            if (section == "policy" && !cfg.policy) cfg.policy = Policy{};
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) return fail(line_no, "expected `key = value`");
        std::string key = trim(line.substr(0, eq));
        std::string value_text = trim(line.substr(eq + 1));
        if (section.empty()) return fail(line_no, "key `" + key + "` outside any section");

        const KeySpec* spec = nullptr;
        for (const auto& k : kKeys) {
            if (section == k.section && key == k.key) { spec = &k; break; }
        }
        if (!spec) return fail(line_no, "unknown key `" + key + "` in section [" + section + "]");

        std::string dotted = section + "." + key;
        if (auto it = keys_seen.find(dotted); it != keys_seen.end()) {
            return fail(line_no, "duplicate key `" + key + "` (first set on line " +
                                     std::to_string(it->second) + ")");
        }
        keys_seen[dotted] = line_no;

        double value = 0.0;
        std::string err;
        if (!parse_number(value_text, spec->unit, value, err)) return fail(line_no, err);
        if (!assign_field(cfg, section, key, value, err)) return fail(line_no, err);
    }

    for (const char* required : {"hardware", "model", "workload"}) {
        if (!sections_seen.count(required)) {
            return fail(0, std::string("missing required section [") + required + "]");
        }
    }
    for (const auto& k : kKeys) {
        std::string sec(k.section);
        if (sec == "policy" && !cfg.policy) continue;
        if (!keys_seen.count(sec + "." + k.key)) {
            return fail(0, "missing key `" + std::string(k.key) + "` in section [" + sec + "]");
        }
    }

    auto collect = [&](std::vector<ValidationIssue> issues) {
        for (auto& i : issues) result.validation_issues.push_back(std::move(i));
    };
    collect(validate(cfg.hardware));
    collect(validate(cfg.model));
    collect(validate(cfg.workload));
    if (cfg.policy) collect(validate(*cfg.policy));
    if (!result.validation_issues.empty()) return result;

    result.config = std::move(cfg);
    return result;
}

ConfigResult parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult result;
        result.parse_error = ConfigParseError{0, "cannot open config file: " + path};
        return result;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string num(std::int64_t v) { return std::to_string(v); }

}  // namespace

std::string serialize_config(const ParsedConfig& cfg) {
    std::ostringstream out;
    const HardwareSpec& h = cfg.hardware;
    out << "[hardware]\n";
    out << "m_g = " << num(h.gpu_mem_bytes) << "\n";
    out << "m_c = " << num(h.cpu_mem_bytes) << "\n";
    out << "b_g = " << num(h.gpu_bw) << "\n";
    out << "b_c = " << num(h.cpu_bw) << "\n";
    out << "b_cg = " << num(h.link_bw) << "\n";
    out << "p_g = " << num(h.gpu_flops) << "\n";
    out << "p_c = " << num(h.cpu_flops) << "\n";
    const ModelSpec& m = cfg.model;
    out << "\n[model]\n";
    out << "l = " << num(m.layers) << "\n";
    out << "h1 = " << num(m.hidden_dim) << "\n";
    out << "h2 = " << num(m.ffn_dim) << "\n";
    out << "n_q = " << num(m.q_heads) << "\n";
    out << "n_kv = " << num(m.kv_heads) << "\n";
    out << "n_e = " << num(m.experts) << "\n";
    out << "k = " << num(m.top_k) << "\n";
    out << "dt_w = " << num(m.weight_dtype_bytes) << "\n";
    out << "dt_kv = " << num(m.kv_dtype_bytes) << "\n";
    out << "\n[workload]\n";
    out << "s = " << num(cfg.workload.prompt_len) << "\n";
    out << "n = " << num(cfg.workload.gen_len) << "\n";
    if (cfg.policy) {
        const Policy& p = *cfg.policy;
        out << "\n[policy]\n";
        out << "N = " << num(p.batch) << "\n";
        out << "mu = " << num(p.micro_batch) << "\n";
        out << "A_g = " << (p.attn_on_gpu ? 1 : 0) << "\n";
        out << "F_g = " << (p.ffn_on_gpu ? 1 : 0) << "\n";
        out << "r_w = " << num(p.weights_on_gpu) << "\n";
        out << "r_c = " << num(p.kv_on_gpu) << "\n";
    }
    return out.str();
}

}  // namespace lightplan
