#include "lightplan/hrm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lightplan/emit.hpp"

namespace lightplan {

double attainable_local(MemoryLevel level, double intensity, const HardwareSpec& hw) {
    const double peak = level == MemoryLevel::Gpu ? hw.gpu_flops : hw.cpu_flops;
    const double bw = level == MemoryLevel::Gpu ? hw.gpu_bw : hw.cpu_bw;
    return std::min(peak, bw * intensity);
}

double attainable_cross(double gpu_intensity, double cpu_intensity, const HardwareSpec& hw) {
    return std::min({hw.gpu_flops, hw.gpu_bw * gpu_intensity, hw.link_bw * cpu_intensity});
}

double turning_point_p1(double cpu_intensity, const HardwareSpec& hw) {
    return std::min(hw.cpu_flops, hw.cpu_bw * cpu_intensity) / hw.link_bw;
}

double turning_point_p2(double gpu_intensity, const HardwareSpec& hw) {
    return std::min(hw.gpu_flops, hw.gpu_bw * gpu_intensity) / hw.link_bw;
}

double balance_gap(double gpu_intensity, double cpu_intensity, const HardwareSpec& hw) {
    return hw.gpu_bw * gpu_intensity - hw.link_bw * cpu_intensity;
}

const char* to_string(RoofKind kind) {
    switch (kind) {
        case RoofKind::ComputeGpu: return "compute_i";
        case RoofKind::ComputeCpu: return "compute_j";
        case RoofKind::MemGpu: return "mem_i";
        case RoofKind::MemCpu: return "mem_j";
        case RoofKind::MemLink: return "mem_ji";
        case RoofKind::OpPoint: return "op_point";
    }
    return "unknown";
}

std::vector<RooflinePoint> roofline_series(const std::vector<OpProfile>& profiles,
                                           const std::vector<std::string>& names,
                                           const HardwareSpec& hw, const RooflineGrid& grid) {
    if (profiles.empty()) {
        throw std::invalid_argument("roofline_series: no operator profiles given");
    }
    if (names.size() != profiles.size()) {
        throw std::invalid_argument("roofline_series: names/profiles size mismatch");
    }

    std::vector<RooflinePoint> points;

    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const OpProfile& p = profiles[i];
        if (p.gpu_bytes > 0) {
            const double intensity = p.gpu_intensity();
            points.push_back({names[i] + "@gpu", RoofKind::OpPoint, intensity,
                              attainable_local(MemoryLevel::Gpu, intensity, hw)});
        }
        if (p.cpu_bytes > 0) {
            const double intensity = p.cpu_intensity();
            points.push_back({names[i] + "@cpu", RoofKind::OpPoint, intensity,
                              attainable_local(MemoryLevel::Cpu, intensity, hw)});
        }
    }

    const double decades = std::log10(grid.max_intensity / grid.min_intensity);
    const int samples = std::max(2, static_cast<int>(std::round(decades * grid.points_per_decade)) + 1);
    for (int s = 0; s < samples; ++s) {
        const double t = static_cast<double>(s) / static_cast<double>(samples - 1);
        const double intensity = grid.min_intensity * std::pow(10.0, t * decades);
        points.push_back({"roof", RoofKind::ComputeGpu, intensity, hw.gpu_flops});
        points.push_back({"roof", RoofKind::ComputeCpu, intensity, hw.cpu_flops});
        points.push_back({"roof", RoofKind::MemGpu, intensity, hw.gpu_bw * intensity});
        points.push_back({"roof", RoofKind::MemCpu, intensity, hw.cpu_bw * intensity});
        points.push_back({"roof", RoofKind::MemLink, intensity, hw.link_bw * intensity});
    }
    return points;
}

std::string roofline_csv(const std::vector<RooflinePoint>& points) {
    std::ostringstream out;
    out << "series,kind,intensity,bound\n";
    for (const auto& p : points) {
        out << p.series << ',' << to_string(p.kind) << ',' << fmt_g9(p.intensity) << ','
            << fmt_g9(p.bound) << '\n';
    }
    return out.str();
}

}  // namespace lightplan
