// Reproduction checks against reference values. Prints one
// PASS/FAIL line per criterion and exits non-zero if any fails.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "greenfab/cdc.hpp"
#include "greenfab/cli.hpp"
#include "greenfab/concurrency.hpp"
#include "greenfab/dataset.hpp"
#include "greenfab/report.hpp"
#include "greenfab/scenarios.hpp"

using namespace greenfab;

namespace {

struct Check {
    bool ok = true;
    std::string worst;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) worst = what;
        ok = ok && cond;
    }
    // relative error against a reference value
    void near(double got, double want, double rel_tol, const std::string& what) {
        const double rel = std::abs(got - want) / std::abs(want);
        expect(rel <= rel_tol, fmt::format("{}: got {:.4f}, want {} ({:.2f}%)", what, got, want, 100 * rel));
    }
};

const std::vector<KernelProfile>& kernels() {
    static const auto ds = builtin_paper_dataset();
    return ds.kernels;
}

const std::array<double, 4> kAlphas{0.3, 0.5, 0.7, 0.9};

// Reference serial CDC per case.
const std::array<std::array<double, 4>, 3> kSerialCdc{{
    {9.773, 6.32, 4.84, 4.01},
    {7.66, 5.04, 3.91, 3.29},
    {6.59, 4.21, 3.39, 2.93},
}};

// CASE-I concurrent CDC, n = 2, 3, 4.
const std::array<std::array<double, 4>, 3> kConcurrentCdc{{
    {10.34286399, 7.119223161, 5.737662805, 4.970129273},
    {15.51429599, 10.67883474, 8.606494207, 7.45519391},
    {20.68572799, 14.23844632, 11.47532561, 9.940258547},
}};

Check criterion_worked_cases() {
    Check c;
    struct Row {
        double alpha;
        int n;
        const char* want;
    };
    for (const Row& r : {Row{0.25, 1, "8.43"}, Row{0.8, 1, "3.32"}, Row{0.25, 3, "25.29"},
                         Row{0.8, 3, "9.96"}}) {
        const double v = cdc(make_query(r.alpha, 0.35, 0.35, r.n));
        const auto shown = format_fixed(v, kCdcDecimals);
        c.expect(shown == r.want, fmt::format("alpha={} n={}: {} != {}", r.alpha, r.n, shown, r.want));
    }
    return c;
}

Check criterion_calibrated_fig7() {
    Check c;
    const auto agg = fit_aggregates({0.3, 9.773}, {0.9, 4.01});
    c.expect(std::abs(agg.area - 0.2687) <= 0.001, fmt::format("A = {}", agg.area));
    c.expect(std::abs(agg.energy - 0.3032) <= 0.001, fmt::format("E = {}", agg.energy));
    auto spec = builtin_case(CaseId::I);
    spec.calibrated = agg;
    const auto table = evaluate_cdc_table(spec, kernels(), kAlphas);
    const std::array<double, 4> want{9.77, 6.32, 4.84, 4.01};
    for (std::size_t j = 0; j < 4; ++j) {
        c.near(table.samples[j].value, want[j], 0.005, fmt::format("CASE-I alpha={}", kAlphas[j]));
    }
    return c;
}

Check criterion_arithmetic_fig7() {
    Check c;
    for (int i = 0; i < 3; ++i) {
        const auto spec = builtin_case(static_cast<CaseId>(i));
        const auto table = evaluate_cdc_table(spec, kernels(), kAlphas);
        for (std::size_t j = 0; j < 4; ++j) {
            c.near(table.samples[j].value, kSerialCdc[i][j], 0.10,
                   fmt::format("{} alpha={}", spec.name, kAlphas[j]));
        }
    }
    return c;
}

Check criterion_table4() {
    Check c;
    auto spec = builtin_case(CaseId::I);
    spec.calibrated = calibrated_aggregates(CaseId::I);
    spec.dsa_population = 40;
    spec.weights = make_weights(0.7);
    spec.scale_mode = ScaleMode::average(0.63);
    const auto rows = savings_table(spec, kernels(), 1, 5);
    const std::array<double, 5> conservative{7.60, 3.84, 2.59, 1.97, 1.59};
    const std::array<double, 4> avg{6.10, 4.12, 3.12, 2.53};
    for (int n = 1; n <= 5; ++n) {
        const auto& r = rows[n - 1];
        c.near(r.improvement_conservative, conservative[n - 1], 0.02, fmt::format("n={} n'=n", n));
        if (n == 1) {
            c.expect(!r.improvement_avg_util.has_value(), "n=1 avg-util cell present");
        } else {
            c.expect(r.improvement_avg_util.has_value(), fmt::format("n={} avg-util missing", n));
            if (r.improvement_avg_util) c.near(*r.improvement_avg_util, avg[n - 2], 0.02, fmt::format("n={} avg", n));
        }
    }
    return c;
}

Check criterion_fig8() {
    Check c;
    const auto agg = calibrated_aggregates(CaseId::I);
    struct Spot {
        int n;
        std::size_t alpha_idx;
    };
    const std::array<Spot, 3> spots{{{2, 0}, {3, 3}, {4, 0}}};
    for (const auto& s : spots) {
        const auto& series = kConcurrentCdc[s.n - 2];
        std::vector<CdcPoint> pts;
        for (std::size_t j = 0; j < 4; ++j) pts.push_back({kAlphas[j], series[j]});
        const double fitted = fit_scale(pts, agg, s.n);
        const double alpha = kAlphas[s.alpha_idx];
        const double want = series[s.alpha_idx];
        c.near(cdc(CdcQuery{make_weights(alpha), agg, s.n, fitted}), want, 0.03,
               fmt::format("n={} alpha={} fitted n'={:.4f}", s.n, alpha, fitted));
        const double closed = scale_factor(s.n, ScaleMode::average(0.64));
        c.near(cdc(CdcQuery{make_weights(alpha), agg, s.n, closed}), want, 0.05,
               fmt::format("n={} alpha={} n'=0.64n", s.n, alpha));
    }
    return c;
}

Check criterion_hybrid() {
    Check c;
    auto spec = builtin_case(CaseId::I);
    spec.calibrated = calibrated_aggregates(CaseId::I);
    spec.concurrency = 4;
    spec.dsa_population = 40;
    spec.weights = make_weights(0.7);
    spec.scale_mode = ScaleMode::average();
    const auto r = hybrid_retained_savings(spec, kernels(), {"AESEncrypt"});
    c.near(r.improvement, 4.05, 0.05, "retain AESEncrypt n=4");
    return c;
}

Check criterion_properties() {
    Check c;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        const int n = 1 + static_cast<int>(unit(rng) * 6);
        const double scale = in(1.0, n);
        // E < n'/n keeps the numerator positive
        const double alpha = in(0.05, 0.95), area = in(0.02, 1.5), energy = in(0.01, 0.98) * scale / n;
        const auto q = make_query(alpha, area, energy, n, scale);
        const double v = cdc(q);

        const double residual = alpha * v * area + (1 - alpha) * n * energy - scale;
        c.expect(std::abs(residual) < 1e-9, fmt::format("fixed-point residual {}", residual));

        auto up = q;
        up.weights.alpha_e2o += 1e-3;
        c.expect(cdc(up) < v, "not decreasing in alpha");
        up = q;
        up.agg.area += 1e-3;
        c.expect(cdc(up) < v, "not decreasing in A");
        up = q;
        up.agg.energy += 1e-3;
        c.expect(cdc(up) < v, "not decreasing in E");

        const double lim = cdc(make_query(1.0, area, energy, n));
        c.expect(std::abs(lim - n / area) <= 1e-12 * std::max(1.0, lim), "alpha=1 limit");

        const double conc = cdc(make_query(alpha, area, energy, n));
        const double serial = cdc(make_query(alpha, area, energy, 1));
        c.expect(std::abs(conc - n * serial) <= 1e-12 * std::max(1.0, conc), "n x serial");

        std::int64_t scan = 1;
        while (!is_fabric_greener(scan, q)) ++scan;
        c.expect(min_dsas_to_replace(q) == scan, "linear-scan oracle");

        const double a1 = in(0.1, 0.5), a2 = in(0.6, 1.0);
        const auto fit = fit_aggregates({a1, cdc(make_query(a1, area, energy, n))},
                                        {a2, cdc(make_query(a2, area, energy, n))}, n);
        c.expect(std::abs(fit.area - area) < 1e-9 && std::abs(fit.energy - energy) < 1e-9,
                 "fit round-trip");

        ScenarioSpec spec = builtin_case(static_cast<CaseId>(i % 3));
        spec.concurrency = 2 + i % 7;
        spec.weights = make_weights(alpha);
        spec.scale_mode = ScaleMode::average(in(0.2, 1.0));
        const auto s = savings_factor(spec, kernels());
        const double ratio = *s.improvement_avg_util / s.improvement_conservative;
        const double expect = s.concurrency / *s.scale_avg_util;
        // both quotients share one numerator; the ratio agrees to rounding
        c.expect(std::abs(ratio - expect) <= 1e-14 * expect, "avg/conservative != n/n'");
    }
    return c;
}

int run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    cli::Context ctx{out, err, std::nullopt};
    return cli::run(args, ctx);
}

Check criterion_dataset_io() {
    Check c;
    const auto ds = builtin_paper_dataset();
    c.expect(validate_dataset(ds).empty(), "builtin has violations");
    for (auto f : {DataFormat::csv, DataFormat::json}) {
        c.expect(load_dataset(serialize_dataset(ds, f), f) == ds, "round-trip mismatch");
    }
    const auto agg = aggregate(ds.kernels);
    c.expect(std::abs(agg.area - 0.275) < 1e-12 && std::abs(agg.energy - 0.34375) < 1e-12 &&
                 std::abs(agg.utilization - 0.64) < 1e-12,
             "pinned means");

    const std::string dir = GREENFAB_FIXTURE_DIR;
    struct Fixture {
        const char* file;
        ErrorCode code;
        const char* message;
    };
    const std::array<Fixture, 8> fixtures{{
        {"util_out_of_range.csv", ErrorCode::ValidationError, "utilization out of (0,1]"},
        {"duplicate_name.csv", ErrorCode::ValidationError, "duplicate kernel name 'GeMM'"},
        {"zero_area.csv", ErrorCode::ValidationError, "area_norm"},
        {"small_fabric_memory.csv", ErrorCode::ValidationError, "fabric memory below largest kernel"},
        {"bad_number.csv", ErrorCode::ParseError, "line 3, column 23"},
        {"empty.csv", ErrorCode::EmptyInput, "empty"},
        {"future_version.json", ErrorCode::UnsupportedVersion, "version 99"},
        {"truncated.json", ErrorCode::ParseError, "line "},
    }};
    for (const auto& f : fixtures) {
        const std::string path = dir + "/" + f.file;
        try {
            load_dataset(read_file(path), format_from_path(path));
            c.expect(false, fmt::format("{} loaded", f.file));
        } catch (const Error& e) {
            c.expect(e.code() == f.code && std::string(e.what()).find(f.message) != std::string::npos,
                     fmt::format("{}: {} '{}'", f.file, to_string(e.code()), e.what()));
        }
        c.expect(run_cli({"dataset", "validate", path}) == cli::kExitDataError,
                 fmt::format("{}: CLI exit code", f.file));
    }

    try {
        load_breakdowns(read_file(dir + "/breakdown_bad_sum.csv"), DataFormat::csv);
        c.expect(false, "bad breakdown loaded");
    } catch (const Error& e) {
        c.expect(e.code() == ErrorCode::ValidationError, "breakdown error code");
    }
    for (const char* f : {"tech_missing_anchor.csv", "tech_negative.csv"}) {
        try {
            load_tech_nodes(read_file(dir + "/" + f), DataFormat::csv);
            c.expect(false, fmt::format("{} loaded", f));
        } catch (const Error& e) {
            c.expect(e.code() == ErrorCode::ValidationError, fmt::format("{} error code", f));
        }
    }
    c.expect(run_cli({"alpha", "--breakdowns", dir + "/breakdown_bad_sum.csv"}) == cli::kExitDataError,
             "breakdown CLI exit code");
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "worked CDC cases to 2 decimals", criterion_worked_cases},
        {2, "calibrated fit and CASE-I CDC within 0.5%", criterion_calibrated_fig7},
        {3, "arithmetic-mean CDC tables within 10%", criterion_arithmetic_fig7},
        {4, "savings table within 2%, n=1 avg cell absent", criterion_table4},
        {5, "concurrent CDC within 3% (fitted n') and 5% (0.64n)", criterion_fig8},
        {6, "hybrid retained AESEncrypt within 5%", criterion_hybrid},
        {7, "property suite over 1000 random inputs", criterion_properties},
        {8, "dataset and IO suite", criterion_dataset_io},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check result;
        try {
            result = cr.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.worst = fmt::format("exception: {}", e.what());
        }
        if (result.ok) {
            fmt::print("[PASS] criterion {}: {}\n", cr.id, cr.name);
        } else {
            ++failed;
            fmt::print("[FAIL] criterion {}: {} -- {}\n", cr.id, cr.name, result.worst);
        }
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
