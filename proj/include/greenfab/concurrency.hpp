#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "greenfab/model.hpp"

namespace greenfab {

enum class ScaleKind { conservative, average_utilization };

std::string_view to_string(ScaleKind kind);
ScaleKind parse_scale_kind(std::string_view text);

// How the fabric grows to host n concurrent kernels.
//   conservative         n' = n
//   average_utilization  n' = max(1, n * u_mean)
// `explicit_scale` overrides both; `mean_utilization` replaces the mean
// computed from the kernel set.
struct ScaleMode {
    ScaleKind kind = ScaleKind::conservative;
    std::optional<double> explicit_scale;
    std::optional<double> mean_utilization;

    static ScaleMode conservative() { return {}; }
    static ScaleMode average(std::optional<double> mean = std::nullopt) {
        return {ScaleKind::average_utilization, std::nullopt, mean};
    }
    static ScaleMode fixed(double scale);
};

struct GridSpec {
    int rows = 8;
    int cols = 8;
    [[nodiscard]] int pe_count() const { return rows * cols; }
};

double average_utilization(std::span<const KernelProfile> kernels);

double scale_factor(int concurrency, const ScaleMode& mode,
                    std::span<const KernelProfile> kernels = {});

struct PackingResult {
    bool feasible = false;
    int budget = 0;
    std::vector<int> allocation;  // PEs per kernel, input order
    int allocated = 0;            // sum of allocation
};

// ceil(u_i * P) PEs per kernel against a budget of floor(n' * P).
PackingResult packing_feasible(std::span<const KernelProfile> selected, const GridSpec& grid,
                               double scale);

}  // namespace greenfab
