#pragma once

#include <string>
#include <vector>

#include "lightplan/config.hpp"
#include "lightplan/opcost.hpp"

namespace lightplan {

// Hierarchical roofline over the two levels of this artifact: GPU (the
// upper level) and CPU (the lower level), joined by the CPU->GPU link.

enum class MemoryLevel { Gpu, Cpu };

// Classic single-level roofline: min(peak compute, peak bandwidth * I).
double attainable_local(MemoryLevel level, double intensity, const HardwareSpec& hw);

// Attainable FLOP/s on the GPU when the data lives on the CPU side:
// bounded by the GPU compute roof, the GPU memory roof at gpu_intensity,
// and the link roof at cpu_intensity.
double attainable_cross(double gpu_intensity, double cpu_intensity, const HardwareSpec& hw);

// First turning point: the CPU-side intensity below which moving the data
// up to the GPU cannot beat computing in place on the CPU.
double turning_point_p1(double cpu_intensity, const HardwareSpec& hw);

// Second turning point: the CPU-side intensity below which the computation
// is bound by the CPU->GPU link rather than anything GPU-local.
double turning_point_p2(double gpu_intensity, const HardwareSpec& hw);

// Signed gap b_g*I_gpu - b_cg*I_cpu; zero at the balance point where the
// GPU memory roof and the link roof bound equally.
double balance_gap(double gpu_intensity, double cpu_intensity, const HardwareSpec& hw);

// ---------------------------------------------------------------------------
// Roofline series export
// ---------------------------------------------------------------------------

enum class RoofKind {
    ComputeGpu,  // compute_i
    ComputeCpu,  // compute_j
    MemGpu,      // mem_i
    MemCpu,      // mem_j
    MemLink,     // mem_ji
    OpPoint,     // op_point
};

const char* to_string(RoofKind kind);

struct RooflinePoint {
    std::string series;
    RoofKind kind;
    double intensity = 0;
    double bound = 0;
};

struct RooflineGrid {
    double min_intensity = 1e-2;
    double max_intensity = 1e4;
    int points_per_decade = 64;
};

// For each profile, one op_point per memory level with positive bytes, plus
// the five roof curves sampled over a log-spaced intensity grid. `names`
// labels the op_point series and must match `profiles` in length.
// Throws std::invalid_argument on empty input.
std::vector<RooflinePoint> roofline_series(const std::vector<OpProfile>& profiles,
                                           const std::vector<std::string>& names,
                                           const HardwareSpec& hw,
                                           const RooflineGrid& grid = {});

// CSV rows `series,kind,intensity,bound`, 9 significant digits.
std::string roofline_csv(const std::vector<RooflinePoint>& points);

}  // namespace lightplan
