#include "greenfab/cdc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace greenfab {

namespace {

constexpr std::size_t kMaxSweepSamples = 1'000'000;

void check_query(const CdcQuery& q) {
    const double alpha = q.weights.alpha_e2o;
    if (alpha == 0.0) {
        throw Error(ErrorCode::AlphaPole, "alpha_e2o = 0 is a pole of the CDC model");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidWeights, fmt::format("alpha_e2o {} outside (0, 1]", alpha));
    }
    if (!(q.agg.area > 0.0) || !std::isfinite(q.agg.area)) {
        throw Error(ErrorCode::InvalidRange, fmt::format("area ratio {} must be > 0", q.agg.area));
    }
    if (!(q.agg.energy >= 0.0) || !std::isfinite(q.agg.energy)) {
        throw Error(ErrorCode::InvalidRange,
                    fmt::format("energy ratio {} must be >= 0", q.agg.energy));
    }
    if (q.concurrency < 1) throw Error(ErrorCode::InvalidRange, "concurrency must be >= 1");
    if (!(q.scale >= 1.0) || !std::isfinite(q.scale)) {
        throw Error(ErrorCode::InvalidScale, fmt::format("fabric scale {} must be >= 1", q.scale));
    }
}

double cdc_numerator(const CdcQuery& q) {
    return q.scale - (1.0 - q.weights.alpha_e2o) * q.concurrency * q.agg.energy;
}

void check_alpha_axis(std::span<const double> alphas) {
    if (alphas.empty()) throw Error(ErrorCode::InvalidRange, "alpha axis is empty");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0 && alphas[i] <= 1.0)) {
            throw Error(ErrorCode::InvalidRange,
                        fmt::format("alpha {} outside (0, 1]", alphas[i]));
        }
        if (i > 0 && !(alphas[i] > alphas[i - 1])) {
            throw Error(ErrorCode::InvalidRange, "alpha axis must be strictly increasing");
        }
    }
}

}  // namespace

CdcQuery make_query(double alpha, double area, double energy, int concurrency) {
    return make_query(alpha, area, energy, concurrency, static_cast<double>(concurrency));
}

CdcQuery make_query(double alpha, double area, double energy, int concurrency, double scale) {
    CdcQuery q;
    q.weights = {alpha, WeightSource::explicit_value};
    q.agg.area = area;
    q.agg.energy = energy;
    q.concurrency = concurrency;
    q.scale = scale;
    return q;
}

double cdc(const CdcQuery& query) {
    check_query(query);
    const double numerator = cdc_numerator(query);
    if (!(numerator > 0.0)) {
        throw Error(ErrorCode::DegenerateModel,
                    fmt::format("fabric is never greener: operational DSA term {} >= n' {}",
                                query.scale - numerator, query.scale));
    }
    return numerator / (query.weights.alpha_e2o * query.agg.area);
}

double cdc_alpha_derivative(const CdcQuery& query) {
    check_query(query);
    const double alpha = query.weights.alpha_e2o;
    return (query.concurrency * query.agg.energy - query.scale) /
           (alpha * alpha * query.agg.area);
}

double cdc_limit_embodied(const AggregateRatios& agg, int concurrency) {
    if (!(agg.area > 0.0)) throw Error(ErrorCode::InvalidRange, "area ratio must be > 0");
    if (concurrency < 1) throw Error(ErrorCode::InvalidRange, "concurrency must be >= 1");
    return concurrency / agg.area;
}

bool is_fabric_greener(std::int64_t dsa_count, const CdcQuery& query) {
    const double alpha = query.weights.alpha_e2o;
    const double dsas = alpha * static_cast<double>(dsa_count) * query.agg.area +
                        (1.0 - alpha) * query.concurrency * query.agg.energy;
    return dsas > query.scale;
}

std::int64_t min_dsas_to_replace(const CdcQuery& query) {
    const double threshold = cdc(query);
    if (threshold >= static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2)) {
        throw Error(ErrorCode::DegenerateModel, "critical DSA count exceeds integer range");
    }
    auto count = static_cast<std::int64_t>(std::floor(threshold)) + 1;
    // floor(CDC) + 1 can be off by one when CDC lands within rounding of an
    // integer; settle it against the footprint inequality itself.
    while (!is_fabric_greener(count, query)) ++count;
    while (count > 1 && is_fabric_greener(count - 1, query)) --count;
    return count;
}

std::vector<double> expand_range(const AlphaRange& range) {
    if (!(range.step > 0.0) || !std::isfinite(range.step)) {
        throw Error(ErrorCode::InvalidRange, "step must be > 0");
    }
    if (!(range.lo > 0.0 && range.lo <= range.hi && range.hi <= 1.0)) {
        throw Error(ErrorCode::InvalidRange,
                    fmt::format("range [{}, {}] must satisfy 0 < lo <= hi <= 1", range.lo,
                                range.hi));
    }
    const double span = range.hi - range.lo;
    const double steps = std::floor(span / range.step + 1e-9);
    if (steps + 1 > static_cast<double>(kMaxSweepSamples)) {
        throw Error(ErrorCode::InvalidRange, "range produces too many samples");
    }
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(steps) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(std::min(range.lo + static_cast<double>(i) * range.step, range.hi));
    }
    // the clamp above can produce a duplicate endpoint
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SweepResult sweep_alpha(const AlphaRange& range, const AggregateRatios& agg, int concurrency,
                        double scale) {
    const auto alphas = expand_range(range);
    return sweep_alpha(alphas, agg, concurrency, scale);
}

SweepResult sweep_alpha(std::span<const double> alphas, const AggregateRatios& agg,
                        int concurrency, double scale) {
    check_alpha_axis(alphas);
    SweepResult out;
    out.axis_name = "alpha_e2o";
    out.label = fmt::format("A={},E={}", agg.area, agg.energy);
    out.metadata = {{"area", agg.area},
                    {"energy", agg.energy},
                    {"n", static_cast<double>(concurrency)},
                    {"scale", scale}};
    out.samples.reserve(alphas.size());
    for (double alpha : alphas) {
        CdcQuery q{{alpha, WeightSource::explicit_value}, agg, concurrency, scale};
        out.samples.push_back({alpha, cdc(q)});
    }
    return out;
}

std::vector<SweepResult> sweep_grid(std::span<const double> alphas,
                                    std::span<const double> areas,
                                    std::span<const double> energies, int concurrency,
                                    double scale) {
    if (alphas.empty() || areas.empty() || energies.empty()) {
        throw Error(ErrorCode::InvalidRange, "sweep grid axes must be non-empty");
    }
    std::vector<double> sorted(alphas.begin(), alphas.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<SweepResult> curves;
    curves.reserve(areas.size() * energies.size());
    for (double area : areas) {
        for (double energy : energies) {
            AggregateRatios agg;
            agg.area = area;
            agg.energy = energy;
            curves.push_back(sweep_alpha(sorted, agg, concurrency, scale));
        }
    }
    return curves;
}

AggregateRatios fit_aggregates(const CdcPoint& first, const CdcPoint& second, int concurrency) {
    return fit_aggregates(first, second, concurrency, static_cast<double>(concurrency));
}

AggregateRatios fit_aggregates(const CdcPoint& first, const CdcPoint& second, int concurrency,
                               double scale) {
    for (const auto& p : {first, second}) {
        if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
            throw Error(ErrorCode::InvalidRange, fmt::format("alpha {} outside (0, 1]", p.alpha));
        }
        if (!(p.cdc > 0.0) || !std::isfinite(p.cdc)) {
            throw Error(ErrorCode::InvalidRange, fmt::format("CDC {} must be > 0", p.cdc));
        }
    }
    if (concurrency < 1) throw Error(ErrorCode::InvalidRange, "concurrency must be >= 1");
    if (!(scale >= 1.0)) throw Error(ErrorCode::InvalidScale, "fabric scale must be >= 1");

    const double n = concurrency;
    // [ n'  -(1-a1) n ] [x]   [c1 a1]
    // [ n'  -(1-a2) n ] [y] = [c2 a2]
    const double a11 = scale, a12 = -(1.0 - first.alpha) * n;
    const double a21 = scale, a22 = -(1.0 - second.alpha) * n;
    const double b1 = first.cdc * first.alpha, b2 = second.cdc * second.alpha;
    const double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-12 * scale * n) {
        throw Error(ErrorCode::SingularFit, "calibration points need distinct alpha values");
    }
    const double x = (b1 * a22 - a12 * b2) / det;
    const double y = (a11 * b2 - b1 * a21) / det;
    if (!(x > 0.0)) {
        throw Error(ErrorCode::InfeasibleFit, "fitted area ratio is not positive");
    }
    AggregateRatios out;
    out.area = 1.0 / x;
    out.energy = y / x;
    out.utilization = 1.0;
    out.kernel_count = 2;
    out.mean_kind = MeanKind::fitted;
    if (!(out.energy > 0.0 && out.energy < 1.0)) {
        throw Error(ErrorCode::InfeasibleFit,
                    fmt::format("fitted energy ratio {} outside (0, 1)", out.energy));
    }
    return out;
}

double fit_scale(std::span<const CdcPoint> points, const AggregateRatios& agg, int concurrency) {
    if (points.empty()) throw Error(ErrorCode::InvalidRange, "no calibration points");
    double sum = 0.0;
    for (const auto& p : points) {
        if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
            throw Error(ErrorCode::InvalidRange, fmt::format("alpha {} outside (0, 1]", p.alpha));
        }
        sum += p.cdc * p.alpha * agg.area + (1.0 - p.alpha) * concurrency * agg.energy;
    }
    const double scale = sum / static_cast<double>(points.size());
    if (!(scale >= 1.0)) {
        throw Error(ErrorCode::InfeasibleFit, fmt::format("fitted scale {} below 1", scale));
    }
    return scale;
}

}  // namespace greenfab
