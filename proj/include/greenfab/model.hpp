#pragma once

#include <span>
#include <string>
#include <string_view>

#include "greenfab/error.hpp"

namespace greenfab {

// ---------------------------------------------------------------------------
// One accelerated kernel. Area and energy are stored normalized to the
// reconfigurable fabric running the same kernel (fabric = 1).
// ---------------------------------------------------------------------------
struct KernelProfile {
    std::string name;
    std::string domain;
    double area_norm = 1.0;    // DSA area / fabric area
    double energy_norm = 1.0;  // DSA energy / fabric energy, same work
    double utilization = 1.0;  // share of fabric PEs occupied, (0, 1]
    double memory_kb = 0.0;
    bool estimated = false;    // value not read directly from published data

    bool operator==(const KernelProfile&) const = default;
};

// Empty string when the kernel satisfies every invariant, otherwise the
// first violated invariant.
std::string kernel_violation(const KernelProfile& k);

// Throws InvalidKernel naming the kernel and the violated invariant.
void check_kernel(const KernelProfile& k);

enum class MeanKind { arithmetic, geometric, fitted };

std::string_view to_string(MeanKind kind);
MeanKind parse_mean_kind(std::string_view text);

struct AggregateRatios {
    double area = 1.0;
    double energy = 1.0;
    // Mean fabric utilization. Fitted aggregates do not determine it and
    // carry the conservative value 1.
    double utilization = 1.0;
    // Kernels averaged, or calibration points for fitted aggregates.
    int kernel_count = 1;
    MeanKind mean_kind = MeanKind::arithmetic;
};

enum class WeightSource { explicit_value, device_preset, breakdown };

struct FootprintWeights {
    double alpha_e2o = 0.5;
    WeightSource source = WeightSource::explicit_value;
};

// Throws InvalidWeights unless 0 <= alpha <= 1.
FootprintWeights make_weights(double alpha, WeightSource source = WeightSource::explicit_value);

struct DeviceBreakdown {
    std::string device;
    double production_pct = 0.0;
    double transport_pct = 0.0;
    double use_pct = 0.0;
    double eol_pct = 0.0;

    [[nodiscard]] double total() const {
        return production_pct + transport_pct + use_pct + eol_pct;
    }
    bool operator==(const DeviceBreakdown&) const = default;
};

inline constexpr double kBreakdownTolerancePct = 0.5;

std::string breakdown_violation(const DeviceBreakdown& b);

struct TechNodeRecord {
    std::string node_name;
    double rel_area_per_cell = 1.0;      // 28nm = 1
    double rel_embodied_per_cell = 1.0;  // 28nm = 1

    [[nodiscard]] bool is_anchor() const {
        return rel_area_per_cell == 1.0 && rel_embodied_per_cell == 1.0;
    }
    bool operator==(const TechNodeRecord&) const = default;
};

enum class DeviceClass { watch, smartphone, laptop, medium_desktop, high_end_desktop, console };

DeviceClass parse_device_class(std::string_view text);
std::string_view to_string(DeviceClass device);

struct AlphaBand {
    double low = 0.0;
    double high = 0.0;
    [[nodiscard]] double midpoint() const { return 0.5 * (low + high); }
};

// Mean area, energy and utilization of a non-empty kernel set.
AggregateRatios aggregate(std::span<const KernelProfile> kernels,
                          MeanKind kind = MeanKind::arithmetic);

// Weighted footprint of N DSAs with n active at a time:
//   alpha * N * A + (1 - alpha) * n * E,
// in units of one unscaled fabric.
double dsa_footprint(double dsa_count, int concurrency, const FootprintWeights& weights,
                     const AggregateRatios& agg);

// Fabric scaled by n' in both area and energy; the normalization anchor
// makes this simply n'.
double fabric_footprint(double scale);

// Everything except the use phase counts as embodied.
FootprintWeights alpha_from_breakdown(const DeviceBreakdown& b);

AlphaBand device_preset(DeviceClass device);
FootprintWeights device_weights(DeviceClass device);

// Embodied footprint per unit chip area, relative to the anchor node.
double embodied_intensity(const TechNodeRecord& rec);

}  // namespace greenfab
