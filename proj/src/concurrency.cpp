#include "greenfab/concurrency.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace greenfab {

namespace {

// Absorbs representation error in products such as (93/P) * P.
constexpr double kPackingSlack = 1e-9;

}  // namespace

std::string_view to_string(ScaleKind kind) {
    return kind == ScaleKind::conservative ? "conservative" : "avg";
}

ScaleKind parse_scale_kind(std::string_view text) {
    if (text == "conservative") return ScaleKind::conservative;
    if (text == "avg" || text == "average" || text == "average_utilization") {
        return ScaleKind::average_utilization;
    }
    throw Error(ErrorCode::InvalidRange, fmt::format("unknown utilization mode '{}'", text));
}

ScaleMode ScaleMode::fixed(double scale) {
    if (!(scale >= 1.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::InvalidScale, fmt::format("explicit scale {} must be >= 1", scale));
    }
    ScaleMode mode;
    mode.explicit_scale = scale;
    return mode;
}

double average_utilization(std::span<const KernelProfile> kernels) {
    if (kernels.empty()) throw Error(ErrorCode::EmptyKernelSet, "kernel set is empty");
    double sum = 0.0;
    for (const auto& k : kernels) {
        check_kernel(k);
        sum += k.utilization;
    }
    return sum / static_cast<double>(kernels.size());
}

double scale_factor(int concurrency, const ScaleMode& mode,
                    std::span<const KernelProfile> kernels) {
    if (concurrency < 1) throw Error(ErrorCode::InvalidRange, "concurrency must be >= 1");
    if (mode.explicit_scale) {
        if (!(*mode.explicit_scale >= 1.0)) {
            throw Error(ErrorCode::InvalidScale, "explicit scale must be >= 1");
        }
        return *mode.explicit_scale;
    }
    if (mode.kind == ScaleKind::conservative) return static_cast<double>(concurrency);

    double mean = 0.0;
    if (mode.mean_utilization) {
        mean = *mode.mean_utilization;
        if (!(mean > 0.0 && mean <= 1.0)) {
            throw Error(ErrorCode::InvalidRange,
                        fmt::format("mean utilization {} out of (0,1]", mean));
        }
    } else {
        mean = average_utilization(kernels);
    }
    // The fabric always fits at least one whole kernel.
    return std::max(1.0, concurrency * mean);
}

PackingResult packing_feasible(std::span<const KernelProfile> selected, const GridSpec& grid,
                               double scale) {
    if (grid.rows < 1 || grid.cols < 1) throw Error(ErrorCode::InvalidRange, "grid must be >= 1x1");
    if (!(scale >= 1.0)) throw Error(ErrorCode::InvalidScale, "fabric scale must be >= 1");
    if (selected.empty()) throw Error(ErrorCode::EmptyKernelSet, "no kernels to pack");

    const int pes = grid.pe_count();
    PackingResult out;
    out.budget = static_cast<int>(std::floor(scale * pes + kPackingSlack));
    out.allocation.reserve(selected.size());
    for (const auto& k : selected) {
        check_kernel(k);
        const int need = static_cast<int>(std::ceil(k.utilization * pes - kPackingSlack));
        out.allocation.push_back(need);
        out.allocated += need;
    }
    out.feasible = out.allocated <= out.budget;
    return out;
}

}  // namespace greenfab
