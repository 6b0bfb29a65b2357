#include "greenfab/model.hpp"

#include <array>
#include <cmath>
#include <utility>

#include <fmt/format.h>

namespace greenfab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyKernelSet: return "EmptyKernelSet";
        case ErrorCode::InvalidKernel: return "InvalidKernel";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::ConcurrencyExceedsPopulation: return "ConcurrencyExceedsPopulation";
        case ErrorCode::InvalidScale: return "InvalidScale";
        case ErrorCode::InvalidBreakdown: return "InvalidBreakdown";
        case ErrorCode::UnknownDeviceClass: return "UnknownDeviceClass";
        case ErrorCode::InvalidTechNode: return "InvalidTechNode";
        case ErrorCode::AlphaPole: return "AlphaPole";
        case ErrorCode::DegenerateModel: return "DegenerateModel";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::SingularFit: return "SingularFit";
        case ErrorCode::InfeasibleFit: return "InfeasibleFit";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::UnknownKernel: return "UnknownKernel";
        case ErrorCode::NoFabricWorkload: return "NoFabricWorkload";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    }
    return "Unknown";
}

std::string kernel_violation(const KernelProfile& k) {
    if (!(std::isfinite(k.area_norm) && k.area_norm > 0.0)) return "area_norm must be > 0";
    if (!(std::isfinite(k.energy_norm) && k.energy_norm > 0.0)) return "energy_norm must be > 0";
    if (!(k.utilization > 0.0 && k.utilization <= 1.0)) return "utilization out of (0,1]";
    if (!(std::isfinite(k.memory_kb) && k.memory_kb >= 0.0)) return "memory_kb must be >= 0";
    return {};
}

void check_kernel(const KernelProfile& k) {
    if (auto why = kernel_violation(k); !why.empty()) {
        throw Error(ErrorCode::InvalidKernel, fmt::format("kernel '{}': {}", k.name, why));
    }
}

std::string_view to_string(MeanKind kind) {
    switch (kind) {
        case MeanKind::arithmetic: return "arithmetic";
        case MeanKind::geometric: return "geometric";
        case MeanKind::fitted: return "fitted";
    }
    return "arithmetic";
}

MeanKind parse_mean_kind(std::string_view text) {
    if (text == "arithmetic") return MeanKind::arithmetic;
    if (text == "geometric") return MeanKind::geometric;
    throw Error(ErrorCode::InvalidRange, fmt::format("unknown mean kind '{}'", text));
}

FootprintWeights make_weights(double alpha, WeightSource source) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidWeights,
                    fmt::format("alpha_e2o {} outside [0, 1]", alpha));
    }
    return {alpha, source};
}

std::string breakdown_violation(const DeviceBreakdown& b) {
    const std::array<std::pair<const char*, double>, 4> parts{{
        {"production_pct", b.production_pct},
        {"transport_pct", b.transport_pct},
        {"use_pct", b.use_pct},
        {"eol_pct", b.eol_pct},
    }};
    for (const auto& [label, value] : parts) {
        if (!(std::isfinite(value) && value >= 0.0)) return fmt::format("{} must be >= 0", label);
    }
    if (std::abs(b.total() - 100.0) > kBreakdownTolerancePct) {
        return fmt::format("percentages sum to {} (expected 100 +/- {})", b.total(),
                           kBreakdownTolerancePct);
    }
    return {};
}

namespace {

struct PresetEntry {
    DeviceClass device;
    std::string_view name;
    AlphaBand band;
};

// Embodied share of total lifetime footprint by device class.
constexpr std::array<PresetEntry, 6> kPresets{{
    {DeviceClass::watch, "watch", {0.80, 0.85}},
    {DeviceClass::smartphone, "smartphone", {0.80, 0.85}},
    {DeviceClass::laptop, "laptop", {0.70, 0.75}},
    {DeviceClass::medium_desktop, "medium_desktop", {0.55, 0.60}},
    {DeviceClass::high_end_desktop, "high_end_desktop", {0.20, 0.25}},
    {DeviceClass::console, "console", {0.20, 0.25}},
}};

}  // namespace

DeviceClass parse_device_class(std::string_view text) {
    for (const auto& p : kPresets) {
        if (p.name == text) return p.device;
    }
    throw Error(ErrorCode::UnknownDeviceClass, fmt::format("unknown device class '{}'", text));
}

std::string_view to_string(DeviceClass device) {
    for (const auto& p : kPresets) {
        if (p.device == device) return p.name;
    }
    return "unknown";
}

AggregateRatios aggregate(std::span<const KernelProfile> kernels, MeanKind kind) {
    if (kernels.empty()) throw Error(ErrorCode::EmptyKernelSet, "kernel set is empty");
    if (kind == MeanKind::fitted) {
        throw Error(ErrorCode::InvalidRange, "fitted aggregates come from fit_aggregates");
    }
    for (const auto& k : kernels) check_kernel(k);
    // Sums are taken about the first kernel so that a set of identical
    // kernels averages to exactly that kernel.
    const KernelProfile& pivot = kernels.front();
    const bool geo = kind == MeanKind::geometric;
    auto lift = [geo](double v) { return geo ? std::log(v) : v; };
    const double area0 = lift(pivot.area_norm);
    const double energy0 = lift(pivot.energy_norm);
    const double util0 = lift(pivot.utilization);
    double area = 0.0, energy = 0.0, util = 0.0;
    for (const auto& k : kernels) {
        area += lift(k.area_norm) - area0;
        energy += lift(k.energy_norm) - energy0;
        util += lift(k.utilization) - util0;
    }
    const double count = static_cast<double>(kernels.size());
    AggregateRatios out;
    out.kernel_count = static_cast<int>(kernels.size());
    out.mean_kind = kind;
    if (geo) {
        out.area = std::exp(area0 + area / count);
        out.energy = std::exp(energy0 + energy / count);
        out.utilization = std::exp(util0 + util / count);
    } else {
        out.area = area0 + area / count;
        out.energy = energy0 + energy / count;
        out.utilization = util0 + util / count;
    }
    return out;
}

double dsa_footprint(double dsa_count, int concurrency, const FootprintWeights& weights,
                     const AggregateRatios& agg) {
    if (concurrency < 1) {
        throw Error(ErrorCode::InvalidRange, "concurrency must be >= 1");
    }
    if (static_cast<double>(concurrency) > dsa_count) {
        throw Error(ErrorCode::ConcurrencyExceedsPopulation,
                    fmt::format("concurrency {} exceeds DSA population {}", concurrency,
                                dsa_count));
    }
    const double alpha = weights.alpha_e2o;
    return alpha * dsa_count * agg.area + (1.0 - alpha) * concurrency * agg.energy;
}

double fabric_footprint(double scale) {
    if (!(scale >= 1.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::InvalidScale, fmt::format("fabric scale {} must be >= 1", scale));
    }
    return scale;
}

FootprintWeights alpha_from_breakdown(const DeviceBreakdown& b) {
    if (auto why = breakdown_violation(b); !why.empty()) {
        throw Error(ErrorCode::InvalidBreakdown,
                    fmt::format("breakdown '{}': {}", b.device, why));
    }
    const double embodied = b.production_pct + b.transport_pct + b.eol_pct;
    return {embodied / b.total(), WeightSource::breakdown};
}

AlphaBand device_preset(DeviceClass device) {
    for (const auto& p : kPresets) {
        if (p.device == device) return p.band;
    }
    throw Error(ErrorCode::UnknownDeviceClass, "unknown device class");
}

FootprintWeights device_weights(DeviceClass device) {
    return {device_preset(device).midpoint(), WeightSource::device_preset};
}

double embodied_intensity(const TechNodeRecord& rec) {
    if (!(rec.rel_area_per_cell > 0.0 && rec.rel_embodied_per_cell > 0.0) ||
        !std::isfinite(rec.rel_area_per_cell) || !std::isfinite(rec.rel_embodied_per_cell)) {
        throw Error(ErrorCode::InvalidTechNode,
                    fmt::format("tech node '{}': ratios must be > 0", rec.node_name));
    }
    return rec.rel_embodied_per_cell / rec.rel_area_per_cell;
}

}  // namespace greenfab
