#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greenfab/model.hpp"

namespace greenfab {

// Inputs to a critical-DSA-count evaluation. `scale` is the fabric scaling
// factor n' needed to host `concurrency` kernels at iso-performance.
struct CdcQuery {
    FootprintWeights weights;
    AggregateRatios agg;
    int concurrency = 1;
    double scale = 1.0;
};

// Serial or conservative query: n' = n.
CdcQuery make_query(double alpha, double area, double energy, int concurrency = 1);
CdcQuery make_query(double alpha, double area, double energy, int concurrency, double scale);

// Real-valued DSA count at which the sea of DSAs and the fabric have equal
// footprint:
//   CDC = (n' - (1 - alpha) * n * E) / (alpha * A)
// With n' = n this is n * (E/A + (1 - E) / (alpha * A)).
double cdc(const CdcQuery& query);

// Analytic dCDC/dalpha = (n*E - n') / (alpha^2 * A).
double cdc_alpha_derivative(const CdcQuery& query);

// Embodied-dominated limit (alpha -> 1): n / A.
double cdc_limit_embodied(const AggregateRatios& agg, int concurrency);

// Smallest integer N with N > CDC.
std::int64_t min_dsas_to_replace(const CdcQuery& query);

// True iff N DSAs have a strictly larger footprint than the scaled fabric.
bool is_fabric_greener(std::int64_t dsa_count, const CdcQuery& query);

struct AlphaRange {
    double lo = 0.1;
    double hi = 1.0;
    double step = 0.1;
};

// Expands lo, lo+step, ... up to hi (inclusive within rounding).
std::vector<double> expand_range(const AlphaRange& range);

struct SweepSample {
    double parameter = 0.0;
    double value = 0.0;
};

struct SweepResult {
    std::string axis_name;
    std::string label;
    std::vector<SweepSample> samples;
    std::vector<std::pair<std::string, double>> metadata;
};

SweepResult sweep_alpha(const AlphaRange& range, const AggregateRatios& agg, int concurrency,
                        double scale);
SweepResult sweep_alpha(std::span<const double> alphas, const AggregateRatios& agg,
                        int concurrency, double scale);

// One curve per (area, energy) pair, areas outer, energies inner.
std::vector<SweepResult> sweep_grid(std::span<const double> alphas,
                                    std::span<const double> areas,
                                    std::span<const double> energies, int concurrency,
                                    double scale);

struct CdcPoint {
    double alpha = 0.0;
    double cdc = 0.0;
};

// Recovers (A, E) from two published (alpha, CDC) points by solving the
// linear system in x = 1/A, y = E/A:
//   n' * x - (1 - alpha_i) * n * y = CDC_i * alpha_i
AggregateRatios fit_aggregates(const CdcPoint& first, const CdcPoint& second,
                               int concurrency = 1);
AggregateRatios fit_aggregates(const CdcPoint& first, const CdcPoint& second,
                               int concurrency, double scale);

// Least-squares n' for known aggregates from one or more (alpha, CDC) points.
double fit_scale(std::span<const CdcPoint> points, const AggregateRatios& agg, int concurrency);

}  // namespace greenfab
