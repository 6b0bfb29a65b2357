#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenfab/cdc.hpp"
#include "greenfab/concurrency.hpp"
#include "greenfab/model.hpp"

namespace greenfab {

enum class CaseId { I, II, III };

CaseId parse_case_id(std::string_view text);
std::string_view to_string(CaseId id);

// A replacement scenario: which kernels are up for replacement, how many run
// concurrently, and how the fabric is sized for them.
struct ScenarioSpec {
    std::string name;
    std::set<std::string> excluded_kernels;
    int concurrency = 1;
    ScaleMode scale_mode;
    int dsa_population = 40;
    FootprintWeights weights{0.7, WeightSource::explicit_value};
    MeanKind mean_kind = MeanKind::arithmetic;
    // Replaces the kernel means for area and energy when set.
    std::optional<AggregateRatios> calibrated;
};

// CASE-I: all DSAs; CASE-II: all minus AESEncrypt; CASE-III: all minus
// AESEncrypt and Viterbi. Serial execution, arithmetic means.
ScenarioSpec builtin_case(CaseId id);

// Published serial CDC endpoints (alpha = 0.3 and 0.9) for each case.
std::pair<CdcPoint, CdcPoint> calibration_points(CaseId id);

// Area/energy fitted to the published endpoints of the case.
AggregateRatios calibrated_aggregates(CaseId id);

std::vector<KernelProfile> included_kernels(const ScenarioSpec& spec,
                                            std::span<const KernelProfile> kernels);

AggregateRatios scenario_aggregates(const ScenarioSpec& spec,
                                    std::span<const KernelProfile> kernels);

double scenario_scale(const ScenarioSpec& spec, std::span<const KernelProfile> kernels);

// CDC per alpha, labelled with the scenario name.
SweepResult evaluate_cdc_table(const ScenarioSpec& spec, std::span<const KernelProfile> kernels,
                               std::span<const double> alphas);

struct SavingsResult {
    int concurrency = 1;
    int dsa_population = 40;
    double alpha = 0.7;
    AggregateRatios agg;
    double dsa_footprint = 0.0;
    double improvement_conservative = 0.0;
    std::optional<double> improvement_avg_util;  // absent for n = 1
    double scale_conservative = 1.0;
    std::optional<double> scale_avg_util;
};

// Footprint of N DSAs over the footprint of the fabric sized for n kernels,
// once with n' = n and once with the average-utilization n'.
SavingsResult savings_factor(const ScenarioSpec& spec, std::span<const KernelProfile> kernels);

std::vector<SavingsResult> savings_table(const ScenarioSpec& spec,
                                         std::span<const KernelProfile> kernels, int n_lo,
                                         int n_hi);

// alpha * A_i + (1 - alpha) * E_i summed over dedicated DSAs kept beside the
// fabric.
double retained_footprint(std::span<const KernelProfile> retained,
                          const FootprintWeights& weights);

double hybrid_ratio(double dsa_total, double fabric_scale, double retained_cost);

struct HybridResult {
    double improvement = 0.0;
    double dsa_footprint = 0.0;
    double fabric_scale = 1.0;
    double retained_cost = 0.0;
    int fabric_concurrency = 1;
};

// Keeps `retained` kernels as dedicated DSAs, each taking one concurrent
// slot, and sizes the fabric for the remaining n - |retained| kernels.
HybridResult hybrid_retained_savings(const ScenarioSpec& spec,
                                     std::span<const KernelProfile> kernels,
                                     const std::set<std::string>& retained);

}  // namespace greenfab
