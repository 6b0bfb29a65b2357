#include "greenfab/scenarios.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace greenfab {

CaseId parse_case_id(std::string_view text) {
    if (text == "I" || text == "1") return CaseId::I;
    if (text == "II" || text == "2") return CaseId::II;
    if (text == "III" || text == "3") return CaseId::III;
    throw Error(ErrorCode::UnknownScenario, fmt::format("unknown scenario '{}'", text));
}

std::string_view to_string(CaseId id) {
    switch (id) {
        case CaseId::I: return "CASE-I";
        case CaseId::II: return "CASE-II";
        case CaseId::III: return "CASE-III";
    }
    return "CASE-?";
}

ScenarioSpec builtin_case(CaseId id) {
    ScenarioSpec spec;
    spec.name = std::string(to_string(id));
    switch (id) {
        case CaseId::I: break;
        case CaseId::II: spec.excluded_kernels = {"AESEncrypt"}; break;
        case CaseId::III: spec.excluded_kernels = {"AESEncrypt", "Viterbi"}; break;
    }
    return spec;
}

std::pair<CdcPoint, CdcPoint> calibration_points(CaseId id) {
    switch (id) {
        case CaseId::I: return {{0.3, 9.773}, {0.9, 4.01}};
        case CaseId::II: return {{0.3, 7.66}, {0.9, 3.29}};
        case CaseId::III: return {{0.3, 6.59}, {0.9, 2.93}};
    }
    throw Error(ErrorCode::UnknownScenario, "unknown scenario");
}

AggregateRatios calibrated_aggregates(CaseId id) {
    const auto [first, second] = calibration_points(id);
    return fit_aggregates(first, second, 1);
}

std::vector<KernelProfile> included_kernels(const ScenarioSpec& spec,
                                            std::span<const KernelProfile> kernels) {
    for (const auto& name : spec.excluded_kernels) {
        const bool known = std::any_of(kernels.begin(), kernels.end(),
                                       [&](const KernelProfile& k) { return k.name == name; });
        if (!known) {
            throw Error(ErrorCode::UnknownKernel,
                        fmt::format("scenario '{}' excludes unknown kernel '{}'", spec.name, name));
        }
    }
    std::vector<KernelProfile> out;
    for (const auto& k : kernels) {
        if (!spec.excluded_kernels.contains(k.name)) out.push_back(k);
    }
    if (out.empty()) {
        throw Error(ErrorCode::EmptyKernelSet,
                    fmt::format("scenario '{}' excludes every kernel", spec.name));
    }
    return out;
}

AggregateRatios scenario_aggregates(const ScenarioSpec& spec,
                                    std::span<const KernelProfile> kernels) {
    const auto included = included_kernels(spec, kernels);
    if (spec.calibrated) return *spec.calibrated;
    return aggregate(included, spec.mean_kind);
}

double scenario_scale(const ScenarioSpec& spec, std::span<const KernelProfile> kernels) {
    const auto included = included_kernels(spec, kernels);
    return scale_factor(spec.concurrency, spec.scale_mode, included);
}

SweepResult evaluate_cdc_table(const ScenarioSpec& spec, std::span<const KernelProfile> kernels,
                               std::span<const double> alphas) {
    const AggregateRatios agg = scenario_aggregates(spec, kernels);
    const double scale = scenario_scale(spec, kernels);
    SweepResult out = sweep_alpha(alphas, agg, spec.concurrency, scale);
    out.label = spec.name;
    return out;
}

namespace {

void check_population(const ScenarioSpec& spec) {
    if (spec.concurrency < 1) throw Error(ErrorCode::InvalidRange, "concurrency must be >= 1");
    if (spec.concurrency > spec.dsa_population) {
        throw Error(ErrorCode::ConcurrencyExceedsPopulation,
                    fmt::format("concurrency {} exceeds DSA population {}", spec.concurrency,
                                spec.dsa_population));
    }
}

ScaleMode average_mode_of(const ScenarioSpec& spec) {
    if (spec.scale_mode.kind == ScaleKind::average_utilization) return spec.scale_mode;
    return ScaleMode::average(spec.scale_mode.mean_utilization);
}

}  // namespace

SavingsResult savings_factor(const ScenarioSpec& spec, std::span<const KernelProfile> kernels) {
    check_population(spec);
    const auto included = included_kernels(spec, kernels);

    SavingsResult out;
    out.concurrency = spec.concurrency;
    out.dsa_population = spec.dsa_population;
    out.alpha = spec.weights.alpha_e2o;
    out.agg = spec.calibrated ? *spec.calibrated : aggregate(included, spec.mean_kind);
    out.dsa_footprint = dsa_footprint(spec.dsa_population, spec.concurrency, spec.weights, out.agg);
    out.scale_conservative = static_cast<double>(spec.concurrency);
    out.improvement_conservative = out.dsa_footprint / fabric_footprint(out.scale_conservative);
    if (spec.concurrency > 1) {
        const double scale = scale_factor(spec.concurrency, average_mode_of(spec), included);
        out.scale_avg_util = scale;
        out.improvement_avg_util = out.dsa_footprint / fabric_footprint(scale);
    }
    return out;
}

std::vector<SavingsResult> savings_table(const ScenarioSpec& spec,
                                         std::span<const KernelProfile> kernels, int n_lo,
                                         int n_hi) {
    if (n_lo < 1 || n_hi < n_lo) {
        throw Error(ErrorCode::InvalidRange,
                    fmt::format("concurrency range {}:{} must satisfy 1 <= lo <= hi", n_lo, n_hi));
    }
    std::vector<SavingsResult> rows;
    ScenarioSpec at = spec;
    for (int n = n_lo; n <= n_hi; ++n) {
        at.concurrency = n;
        rows.push_back(savings_factor(at, kernels));
    }
    return rows;
}

double retained_footprint(std::span<const KernelProfile> retained,
                          const FootprintWeights& weights) {
    const double alpha = weights.alpha_e2o;
    double total = 0.0;
    for (const auto& k : retained) total += alpha * k.area_norm + (1.0 - alpha) * k.energy_norm;
    return total;
}

double hybrid_ratio(double dsa_total, double fabric_scale, double retained_cost) {
    return dsa_total / (fabric_footprint(fabric_scale) + retained_cost);
}

HybridResult hybrid_retained_savings(const ScenarioSpec& spec,
                                     std::span<const KernelProfile> kernels,
                                     const std::set<std::string>& retained) {
    check_population(spec);
    const auto included = included_kernels(spec, kernels);
    if (static_cast<int>(retained.size()) >= spec.concurrency) {
        throw Error(ErrorCode::NoFabricWorkload,
                    fmt::format("{} retained DSAs leave no concurrent slot for the fabric (n = {})",
                                retained.size(), spec.concurrency));
    }

    std::vector<KernelProfile> kept;
    std::vector<KernelProfile> on_fabric;
    for (const auto& name : retained) {
        const bool present = std::any_of(included.begin(), included.end(),
                                         [&](const KernelProfile& k) { return k.name == name; });
        if (!present) {
            throw Error(ErrorCode::UnknownKernel,
                        fmt::format("retained kernel '{}' is not in scenario '{}'", name, spec.name));
        }
    }
    for (const auto& k : included) {
        (retained.contains(k.name) ? kept : on_fabric).push_back(k);
    }
    if (on_fabric.empty()) {
        throw Error(ErrorCode::NoFabricWorkload, "every kernel is retained as a DSA");
    }

    HybridResult out;
    const AggregateRatios agg = spec.calibrated ? *spec.calibrated : aggregate(included, spec.mean_kind);
    out.dsa_footprint = dsa_footprint(spec.dsa_population, spec.concurrency, spec.weights, agg);
    out.fabric_concurrency = spec.concurrency - static_cast<int>(retained.size());
    out.fabric_scale = scale_factor(out.fabric_concurrency, spec.scale_mode, on_fabric);
    out.retained_cost = retained_footprint(kept, spec.weights);
    out.improvement = hybrid_ratio(out.dsa_footprint, out.fabric_scale, out.retained_cost);
    return out;
}

}  // namespace greenfab
