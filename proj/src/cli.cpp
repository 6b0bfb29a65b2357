#include "greenfab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "greenfab/cdc.hpp"
#include "greenfab/concurrency.hpp"
#include "greenfab/dataset.hpp"
#include "greenfab/model.hpp"
#include "greenfab/report.hpp"
#include "greenfab/scenarios.hpp"

namespace greenfab::cli {

namespace {

// Bad flags or flag values; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string format = "table";
    std::string out_path;
    std::string plot_path;
};

struct Emission {
    std::string data;
    std::optional<std::string> svg;
};

std::string strip(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto at = s.find(sep, start);
        parts.push_back(strip(s.substr(start, at == std::string_view::npos ? s.size() - start : at - start)));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return parts;
}

double to_double(std::string_view text, std::string_view what) {
    const std::string t = strip(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t.front() == '+') ++first;
    auto [p, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || p != t.data() + t.size() || !std::isfinite(v)) {
        throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
    }
    return v;
}

int to_int(std::string_view text, std::string_view what) {
    const std::string t = strip(text);
    int v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || p != t.data() + t.size()) {
        throw UsageError(fmt::format("{}: '{}' is not an integer", what, text));
    }
    return v;
}

std::vector<double> to_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(to_double(part, what));
    return out;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw UsageError(message);
}

void check_alpha(double alpha, std::string_view flag) {
    if (alpha == 0.0) {
        throw UsageError(fmt::format("{} = 0 is a pole of the CDC model; use a value in (0, 1]", flag));
    }
    require(alpha > 0.0 && alpha <= 1.0, fmt::format("{} must lie in (0, 1]", flag));
}

std::pair<int, int> to_int_range(std::string_view text, std::string_view what) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) {
        const int n = to_int(parts[0], what);
        return {n, n};
    }
    require(parts.size() == 2, fmt::format("{}: expected LO:HI", what));
    return {to_int(parts[0], what), to_int(parts[1], what)};
}

// Dataset resolution: explicit path, else the environment default, else builtin.
struct LoadedDataset {
    KernelDataset data;
    std::string origin;
};

LoadedDataset resolve_dataset(const std::string& path, const Context& ctx) {
    std::string chosen = path;
    if (chosen.empty() && ctx.default_dataset && !ctx.default_dataset->empty()) {
        chosen = *ctx.default_dataset;
    }
    if (chosen.empty()) return {builtin_paper_dataset(), "builtin"};
    return {load_dataset(read_file(chosen), format_from_path(chosen)), chosen};
}

void note_estimates(RenderedReport& report, const KernelDataset& ds) {
    if (ds.has_estimates()) report.footnotes.emplace_back(kEstimatedFootnote);
}

struct ScaleFlags {
    std::string util_mode;
    double scale = 0.0;
    double util = 0.0;

    void add_to(CLI::App* cmd, const std::string& default_mode) {
        util_mode = default_mode;
        auto* s = cmd->add_option("--scale", scale, "explicit fabric scale n' (>= 1)");
        auto* m = cmd->add_option("--util-mode", util_mode, "avg | conservative")->capture_default_str();
        cmd->add_option("--util", util, "mean fabric utilization override, (0, 1]");
        s->excludes(m);
        m->excludes(s);
        scale_opt = s;
        util_opt = cmd->get_option("--util");
    }

    ScaleMode mode() const {
        ScaleMode out;
        try {
            out.kind = parse_scale_kind(util_mode);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        if (scale_opt->count() > 0) {
            require(scale >= 1.0, "--scale must be >= 1");
            out.explicit_scale = scale;
        }
        if (util_opt->count() > 0) {
            require(util > 0.0 && util <= 1.0, "--util must lie in (0, 1]");
            out.mean_utilization = util;
        }
        return out;
    }

    bool needs_kernels() const {
        const ScaleMode m = mode();
        return !m.explicit_scale && m.kind == ScaleKind::average_utilization && !m.mean_utilization;
    }

    CLI::Option* scale_opt = nullptr;
    CLI::Option* util_opt = nullptr;
};

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct CdcCommand {
    double alpha = 0.0, area = 0.0, energy = 0.0;
    int n = 1;
    std::string dataset;
    ScaleFlags scale;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("cdc", "critical DSA count for one parameter set");
        cmd->add_option("--alpha", alpha, "embodied-to-operational weight, (0, 1]")->required();
        cmd->add_option("--area", area, "mean DSA area relative to the fabric")->required();
        cmd->add_option("--energy", energy, "mean DSA energy relative to the fabric")->required();
        cmd->add_option("--n", n, "concurrently active kernels");
        cmd->add_option("--dataset", dataset, "kernel dataset for average-utilization scaling");
        scale.add_to(cmd, "conservative");
    }

    Emission execute(const GlobalOptions& g, const Context& ctx) const {
        check_alpha(alpha, "--alpha");
        require(area > 0.0, "--area must be > 0");
        require(energy > 0.0, "--energy must be > 0");
        require(n >= 1, "--n must be >= 1");
        require(g.plot_path.empty(), "--plot is not supported for cdc; use sweep");
        const ScaleMode mode = scale.mode();

        RenderedReport report;
        report.title = "Critical DSA count";
        std::vector<KernelProfile> kernels;
        if (scale.needs_kernels()) {
            auto loaded = resolve_dataset(dataset, ctx);
            kernels = loaded.data.kernels;
            note_estimates(report, loaded.data);
        }
        const double n_prime = scale_factor(n, mode, kernels);
        const CdcQuery q = make_query(alpha, area, energy, n, n_prime);
        const double value = cdc(q);

        report.headers = {"alpha", "area", "energy", "n", "n'", "cdc", "min_dsas", "limit_n/A"};
        report.add_row({Cell::number(alpha, 2), Cell::number(area, 4), Cell::number(energy, 4),
                        Cell::integer(n), Cell::number(n_prime, kScaleDecimals),
                        Cell::number(value, kCdcDecimals), Cell::integer(min_dsas_to_replace(q)),
                        Cell::number(cdc_limit_embodied(q.agg, n), kCdcDecimals)});
        return {emit_table(report, parse_output_format(g.format)), std::nullopt};
    }
};

struct SweepCommand {
    std::string alpha_range;
    std::string areas = "0.35";
    std::string energies = "0.35";
    int n = 1;
    std::string dataset;
    ScaleFlags scale;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("sweep", "CDC versus alpha for a grid of area/energy");
        cmd->add_option("--alpha", alpha_range, "LO:HI:STEP")->required();
        cmd->add_option("--areas", areas, "comma-separated area ratios")->capture_default_str();
        cmd->add_option("--energies", energies, "comma-separated energy ratios")->capture_default_str();
        cmd->add_option("--n", n, "concurrently active kernels");
        cmd->add_option("--dataset", dataset, "kernel dataset for average-utilization scaling");
        scale.add_to(cmd, "conservative");
    }

    Emission execute(const GlobalOptions& g, const Context& ctx) const {
        const auto parts = split(alpha_range, ':');
        require(parts.size() == 3, "--alpha expects LO:HI:STEP");
        AlphaRange range{to_double(parts[0], "--alpha"), to_double(parts[1], "--alpha"),
                         to_double(parts[2], "--alpha")};
        check_alpha(range.lo, "--alpha LO");
        require(range.step > 0.0, "--alpha STEP must be > 0");
        require(range.lo <= range.hi && range.hi <= 1.0, "--alpha needs LO <= HI <= 1");
        const auto area_list = to_list(areas, "--areas");
        const auto energy_list = to_list(energies, "--energies");
        for (double a : area_list) require(a > 0.0, "--areas values must be > 0");
        for (double e : energy_list) require(e > 0.0, "--energies values must be > 0");
        require(n >= 1, "--n must be >= 1");
        const ScaleMode mode = scale.mode();

        std::vector<KernelProfile> kernels;
        std::vector<std::string> notes;
        if (scale.needs_kernels()) {
            auto loaded = resolve_dataset(dataset, ctx);
            kernels = loaded.data.kernels;
            if (loaded.data.has_estimates()) notes.emplace_back(kEstimatedFootnote);
        }
        const double n_prime = scale_factor(n, mode, kernels);
        const auto alphas = expand_range(range);
        const auto curves = sweep_grid(alphas, area_list, energy_list, n, n_prime);

        Emission em;
        const auto format = parse_output_format(g.format);
        if (format == OutputFormat::csv) {
            em.data = emit_curve_csv(curves);
            for (const auto& note : notes) em.data += "# " + note + "\n";
        } else {
            RenderedReport report;
            report.title = fmt::format("CDC sweep (n={}, n'={})", n, format_fixed(n_prime, kScaleDecimals));
            report.headers = {"series", "alpha", "cdc"};
            report.footnotes = notes;
            for (const auto& c : curves) {
                for (const auto& s : c.samples) {
                    report.add_row({Cell::label(c.label), Cell::number(s.parameter, 2),
                                    Cell::number(s.value, kCdcDecimals)});
                }
            }
            em.data = emit_table(report, format);
        }
        if (!g.plot_path.empty()) {
            em.svg = emit_svg_line_chart(curves, fmt::format("Critical DSA count vs alpha (n={})", n),
                                         "critical DSA count (dimensionless)");
        }
        return em;
    }
};

struct ScenarioFlags {
    std::string case_ids = "I";
    std::string dataset;
    bool calibrated = false;
    std::string mean = "arithmetic";

    void add_to(CLI::App* cmd, bool multi_case) {
        cmd->add_option("--case", case_ids,
                        multi_case ? "I, II, III or a comma-separated list" : "I, II or III")->capture_default_str();
        cmd->add_option("--dataset", dataset, "kernel dataset (CSV or JSON)");
        cmd->add_flag("--calibrated", calibrated, "use aggregates fitted to published CDC values");
        cmd->add_option("--mean", mean, "arithmetic | geometric")->capture_default_str();
    }

    std::vector<CaseId> cases() const {
        std::vector<CaseId> out;
        for (const auto& id : split(case_ids, ',')) {
            try {
                out.push_back(parse_case_id(id));
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
        }
        return out;
    }

    ScenarioSpec spec(CaseId id) const {
        ScenarioSpec s = builtin_case(id);
        try {
            s.mean_kind = parse_mean_kind(mean);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        if (calibrated) s.calibrated = calibrated_aggregates(id);
        return s;
    }
};

struct ScenarioCommand {
    ScenarioFlags flags;
    std::string alphas;
    int n = 1;
    ScaleFlags scale;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("scenario", "CDC table for replacement scenarios");
        flags.add_to(cmd, true);
        cmd->add_option("--alphas", alphas, "comma-separated alpha values")->required();
        cmd->add_option("--n", n, "concurrently active kernels");
        scale.add_to(cmd, "conservative");
    }

    Emission execute(const GlobalOptions& g, const Context& ctx) const {
        const auto cases = flags.cases();
        auto alpha_list = to_list(alphas, "--alphas");
        for (double a : alpha_list) check_alpha(a, "--alphas");
        std::sort(alpha_list.begin(), alpha_list.end());
        require(std::adjacent_find(alpha_list.begin(), alpha_list.end()) == alpha_list.end(),
                "--alphas must not repeat");
        require(n >= 1, "--n must be >= 1");
        const ScaleMode mode = scale.mode();
        const auto loaded = resolve_dataset(flags.dataset, ctx);

        RenderedReport report;
        report.title = fmt::format("Critical DSA count by scenario (n={}{})", n,
                                   flags.calibrated ? ", calibrated" : "");
        report.headers = {"case", "alpha", "area", "energy", "n'", "cdc", "min_dsas"};
        note_estimates(report, loaded.data);

        BarChart chart;
        chart.title = fmt::format("Critical DSA count by scenario (n={})", n);
        chart.y_label = "critical DSA count (dimensionless)";
        for (double a : alpha_list) chart.series_labels.push_back(fmt::format("alpha={}", a));
        chart.values.assign(alpha_list.size(), {});

        for (CaseId id : cases) {
            ScenarioSpec spec = flags.spec(id);
            spec.concurrency = n;
            spec.scale_mode = mode;
            const auto table = evaluate_cdc_table(spec, loaded.data.kernels, alpha_list);
            const auto agg = scenario_aggregates(spec, loaded.data.kernels);
            const double n_prime = scenario_scale(spec, loaded.data.kernels);
            chart.group_labels.push_back(spec.name);
            for (std::size_t i = 0; i < table.samples.size(); ++i) {
                const auto& s = table.samples[i];
                CdcQuery q{{s.parameter, WeightSource::explicit_value}, agg, n, n_prime};
                report.add_row({Cell::label(spec.name), Cell::number(s.parameter, 2),
                                Cell::number(agg.area, 4), Cell::number(agg.energy, 4),
                                Cell::number(n_prime, kScaleDecimals),
                                Cell::number(s.value, kCdcDecimals),
                                Cell::integer(min_dsas_to_replace(q))});
                chart.values[i].push_back(s.value);
            }
        }
        Emission em{emit_table(report, parse_output_format(g.format)), std::nullopt};
        if (!g.plot_path.empty()) em.svg = emit_svg_grouped_bar(chart);
        return em;
    }
};

struct SavingsCommand {
    ScenarioFlags flags;
    int dsas = 40;
    double alpha = 0.7;
    std::string n_range;
    double util = 0.0;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("savings", "footprint improvement of fabric over DSAs");
        flags.add_to(cmd, false);
        cmd->add_option("--dsas", dsas, "DSA population N")->capture_default_str();
        cmd->add_option("--alpha", alpha, "embodied-to-operational weight")->capture_default_str();
        cmd->add_option("--n", n_range, "concurrency LO:HI or a single value")->required();
        util_opt = cmd->add_option("--util", util, "mean fabric utilization override, (0, 1]");
    }

    Emission execute(const GlobalOptions& g, const Context& ctx) const {
        const auto cases = flags.cases();
        require(cases.size() == 1, "savings takes a single --case");
        require(alpha >= 0.0 && alpha <= 1.0, "--alpha must lie in [0, 1]");
        require(dsas >= 1, "--dsas must be >= 1");
        const auto [lo, hi] = to_int_range(n_range, "--n");
        require(lo >= 1 && lo <= hi, "--n needs 1 <= LO <= HI");
        require(hi <= dsas, "--n may not exceed --dsas");
        ScenarioSpec spec = flags.spec(cases.front());
        spec.dsa_population = dsas;
        spec.weights = make_weights(alpha);
        spec.scale_mode = ScaleMode::average();
        if (util_opt->count() > 0) {
            require(util > 0.0 && util <= 1.0, "--util must lie in (0, 1]");
            spec.scale_mode.mean_utilization = util;
        }
        const auto loaded = resolve_dataset(flags.dataset, ctx);
        const auto rows = savings_table(spec, loaded.data.kernels, lo, hi);

        RenderedReport report;
        report.title = fmt::format("Footprint improvement, {} DSAs, alpha={}{}", dsas, alpha,
                                   flags.calibrated ? ", calibrated" : "");
        report.headers = {"n", "n'", "avg_util", "full_util"};
        if (!spec.scale_mode.mean_utilization) note_estimates(report, loaded.data);

        BarChart chart;
        chart.title = report.title;
        chart.y_label = "footprint improvement (x)";
        chart.series_labels = {"avg util (n' < n)", "100% util (n' = n)"};
        chart.values.assign(2, {});
        for (const auto& r : rows) {
            report.add_row({Cell::integer(r.concurrency),
                            r.scale_avg_util ? Cell::number(*r.scale_avg_util, kScaleDecimals)
                                             : Cell::missing(),
                            r.improvement_avg_util
                                ? Cell::number(*r.improvement_avg_util, kSavingsDecimals)
                                : Cell::missing(),
                            Cell::number(r.improvement_conservative, kSavingsDecimals)});
            chart.group_labels.push_back(fmt::format("n={}", r.concurrency));
            chart.values[0].push_back(r.improvement_avg_util.value_or(
                std::numeric_limits<double>::quiet_NaN()));
            chart.values[1].push_back(r.improvement_conservative);
        }
        Emission em{emit_table(report, parse_output_format(g.format)), std::nullopt};
        if (!g.plot_path.empty()) em.svg = emit_svg_grouped_bar(chart);
        return em;
    }

    CLI::Option* util_opt = nullptr;
};

struct HybridCommand {
    ScenarioFlags flags;
    std::string retain;
    int n = 0;
    int dsas = 40;
    double alpha = 0.7;
    ScaleFlags scale;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("hybrid", "keep some DSAs beside a smaller fabric");
        flags.add_to(cmd, false);
        cmd->add_option("--retain", retain, "comma-separated kernel names kept as DSAs")->required();
        cmd->add_option("--n", n, "concurrently active kernels")->required();
        cmd->add_option("--dsas", dsas, "DSA population N")->capture_default_str();
        cmd->add_option("--alpha", alpha, "embodied-to-operational weight")->capture_default_str();
        scale.add_to(cmd, "avg");
    }

    Emission execute(const GlobalOptions& g, const Context& ctx) const {
        const auto cases = flags.cases();
        require(cases.size() == 1, "hybrid takes a single --case");
        require(alpha >= 0.0 && alpha <= 1.0, "--alpha must lie in [0, 1]");
        require(n >= 1 && n <= dsas, "--n must lie in [1, --dsas]");
        require(g.plot_path.empty(), "--plot is not supported for hybrid");
        std::set<std::string> kept;
        for (const auto& name : split(retain, ',')) {
            if (!name.empty()) kept.insert(name);
        }
        ScenarioSpec spec = flags.spec(cases.front());
        spec.concurrency = n;
        spec.dsa_population = dsas;
        spec.weights = make_weights(alpha);
        spec.scale_mode = scale.mode();
        const auto loaded = resolve_dataset(flags.dataset, ctx);
        const auto result = hybrid_retained_savings(spec, loaded.data.kernels, kept);

        std::string names;
        for (const auto& k : kept) names += (names.empty() ? "" : "+") + k;
        RenderedReport report;
        report.title = fmt::format("Hybrid: fabric plus retained DSAs, {} DSAs, alpha={}", dsas, alpha);
        report.headers = {"retained", "n", "fabric_n", "n'", "retained_cost", "improvement"};
        note_estimates(report, loaded.data);
        report.add_row({Cell::label(names.empty() ? "-" : names), Cell::integer(n),
                        Cell::integer(result.fabric_concurrency),
                        Cell::number(result.fabric_scale, kScaleDecimals),
                        Cell::number(result.retained_cost, 4),
                        Cell::number(result.improvement, kSavingsDecimals)});
        return {emit_table(report, parse_output_format(g.format)), std::nullopt};
    }
};

struct AlphaCommand {
    std::string breakdown;
    std::string device;
    std::string breakdowns_path;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("alpha", "embodied-to-operational weight of a device");
        auto* b = cmd->add_option("--breakdown", breakdown,
                                  "production=P,transport=T,use=U,eol=E percentages");
        auto* d = cmd->add_option("--device", device,
                                  "watch | smartphone | laptop | medium_desktop | "
                                  "high_end_desktop | console");
        auto* f = cmd->add_option("--breakdowns", breakdowns_path, "CSV/JSON file of breakdowns");
        b->excludes(d)->excludes(f);
        d->excludes(f);
        cmd->require_option(1);
    }

    static DeviceBreakdown parse_breakdown(std::string_view text) {
        DeviceBreakdown b;
        b.device = "cli";
        std::set<std::string> seen;
        for (const auto& item : split(text, ',')) {
            const auto eq = item.find('=');
            require(eq != std::string::npos, fmt::format("--breakdown item '{}' is not K=V", item));
            std::string key = strip(item.substr(0, eq));
            if (key.ends_with("_pct")) key.resize(key.size() - 4);
            const double v = to_double(item.substr(eq + 1), "--breakdown");
            if (key == "production") b.production_pct = v;
            else if (key == "transport") b.transport_pct = v;
            else if (key == "use") b.use_pct = v;
            else if (key == "eol") b.eol_pct = v;
            else throw UsageError(fmt::format("--breakdown: unknown phase '{}'", key));
            require(seen.insert(key).second, fmt::format("--breakdown: '{}' given twice", key));
        }
        return b;
    }

    Emission execute(const GlobalOptions& g, const Context&) const {
        require(g.plot_path.empty(), "--plot is not supported for alpha");
        RenderedReport report;
        report.title = "Embodied-to-operational weight";
        if (!device.empty()) {
            DeviceClass cls;
            try {
                cls = parse_device_class(device);
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            const AlphaBand band = device_preset(cls);
            report.headers = {"device", "alpha_low", "alpha_high", "alpha"};
            report.add_row({Cell::label(std::string(to_string(cls))), Cell::number(band.low, 3),
                            Cell::number(band.high, 3), Cell::number(band.midpoint(), 3)});
        } else {
            std::vector<DeviceBreakdown> items;
            if (!breakdown.empty()) {
                items.push_back(parse_breakdown(breakdown));
            } else {
                items = load_breakdowns(read_file(breakdowns_path), format_from_path(breakdowns_path));
            }
            report.headers = {"device", "embodied_pct", "use_pct", "alpha"};
            for (const auto& b : items) {
                const auto w = alpha_from_breakdown(b);
                report.add_row({Cell::label(b.device),
                                Cell::number(b.production_pct + b.transport_pct + b.eol_pct, 1),
                                Cell::number(b.use_pct, 1), Cell::number(w.alpha_e2o, 3)});
            }
        }
        return {emit_table(report, parse_output_format(g.format)), std::nullopt};
    }
};

struct CalibrateCommand {
    std::string points;
    int n = 1;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("calibrate", "fit area/energy ratios to two CDC points");
        cmd->add_option("--points", points, "A1:C1,A2:C2 (alpha:CDC pairs)")->required();
        cmd->add_option("--n", n, "concurrency of the published points (n' = n)");
    }

    Emission execute(const GlobalOptions& g, const Context&) const {
        require(g.plot_path.empty(), "--plot is not supported for calibrate");
        const auto pairs = split(points, ',');
        require(pairs.size() == 2, "--points expects exactly two alpha:CDC pairs");
        std::vector<CdcPoint> pts;
        for (const auto& p : pairs) {
            const auto ac = split(p, ':');
            require(ac.size() == 2, fmt::format("--points item '{}' is not alpha:CDC", p));
            pts.push_back({to_double(ac[0], "--points"), to_double(ac[1], "--points")});
            check_alpha(pts.back().alpha, "--points alpha");
            require(pts.back().cdc > 0.0, "--points CDC must be > 0");
        }
        require(n >= 1, "--n must be >= 1");
        const auto agg = fit_aggregates(pts[0], pts[1], n);
        RenderedReport report;
        report.title = "Calibrated aggregates";
        report.headers = {"area", "energy"};
        report.add_row({Cell::number(agg.area, 5), Cell::number(agg.energy, 5)});
        return {emit_table(report, parse_output_format(g.format)), std::nullopt};
    }
};

struct DatasetCommand {
    std::string action;
    std::string path;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("dataset", "validate or show a kernel dataset");
        cmd->add_option("action", action, "validate | show")
            ->required()
            ->check(CLI::IsMember({"validate", "show"}));
        cmd->add_option("path", path, "dataset file (CSV or JSON); builtin when omitted");
    }

    Emission execute(const GlobalOptions& g, const Context& ctx) const {
        require(g.plot_path.empty(), "--plot is not supported for dataset");
        const auto format = parse_output_format(g.format);
        const auto loaded = resolve_dataset(path, ctx);
        if (action == "validate") {
            RenderedReport report;
            report.title = fmt::format("Dataset '{}': {} kernels, no violations", loaded.origin,
                                       loaded.data.kernels.size());
            report.headers = {"record", "violation"};
            return {emit_table(report, format), std::nullopt};
        }
        if (format != OutputFormat::table) {
            return {serialize_dataset(loaded.data, format == OutputFormat::csv ? DataFormat::csv
                                                                               : DataFormat::json),
                    std::nullopt};
        }
        RenderedReport report;
        report.title = fmt::format("Dataset '{}'", loaded.origin);
        report.headers = {"name", "domain", "area", "energy", "util", "memory_kb", "estimated"};
        for (const auto& k : loaded.data.kernels) {
            report.add_row({Cell::label(k.name), Cell::label(k.domain), Cell::number(k.area_norm, 3),
                            Cell::number(k.energy_norm, 3), Cell::number(k.utilization, 2),
                            Cell::number(k.memory_kb, 1), Cell::label(k.estimated ? "yes" : "no")});
        }
        const auto agg = aggregate(loaded.data.kernels);
        report.add_row({Cell::label("mean"), Cell::label(""), Cell::number(agg.area, 5),
                        Cell::number(agg.energy, 5), Cell::number(agg.utilization, 2),
                        Cell::label(""), Cell::label("")});
        note_estimates(report, loaded.data);
        return {emit_table(report, format), std::nullopt};
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::EmptyInput, fmt::format("cannot write '{}'", path));
    out << content;
    if (!out) throw Error(ErrorCode::EmptyInput, fmt::format("failed writing '{}'", path));
}

bool is_usage_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::AlphaPole:
        case ErrorCode::InvalidRange:
        case ErrorCode::InvalidScale:
        case ErrorCode::InvalidWeights:
        case ErrorCode::UnknownDeviceClass:
        case ErrorCode::UnknownScenario:
        case ErrorCode::ConcurrencyExceedsPopulation:
            return true;
        default:
            return false;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, Context& ctx) {
    CLI::App app{"Sustainability model for replacing dedicated accelerators with a reconfigurable fabric",
                 "greenfab"};
    app.fallthrough();
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--format", global.format, "table | csv | json")->capture_default_str()
        ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--out", global.out_path, "write data output to a file");
    app.add_option("--plot", global.plot_path, "write an SVG chart");

    CdcCommand cdc_cmd;
    SweepCommand sweep_cmd;
    ScenarioCommand scenario_cmd;
    SavingsCommand savings_cmd;
    HybridCommand hybrid_cmd;
    AlphaCommand alpha_cmd;
    CalibrateCommand calibrate_cmd;
    DatasetCommand dataset_cmd;
    cdc_cmd.attach(app);
    sweep_cmd.attach(app);
    scenario_cmd.attach(app);
    savings_cmd.attach(app);
    hybrid_cmd.attach(app);
    alpha_cmd.attach(app);
    calibrate_cmd.attach(app);
    dataset_cmd.attach(app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, ctx.out, ctx.err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const std::map<std::string, std::function<Emission()>> dispatch{
        {"cdc", [&] { return cdc_cmd.execute(global, ctx); }},
        {"sweep", [&] { return sweep_cmd.execute(global, ctx); }},
        {"scenario", [&] { return scenario_cmd.execute(global, ctx); }},
        {"savings", [&] { return savings_cmd.execute(global, ctx); }},
        {"hybrid", [&] { return hybrid_cmd.execute(global, ctx); }},
        {"alpha", [&] { return alpha_cmd.execute(global, ctx); }},
        {"calibrate", [&] { return calibrate_cmd.execute(global, ctx); }},
        {"dataset", [&] { return dataset_cmd.execute(global, ctx); }},
    };

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        Emission em = dispatch.at(name)();
        if (global.out_path.empty()) {
            ctx.out << em.data;
        } else {
            write_file(global.out_path, em.data);
        }
        if (em.svg) write_file(global.plot_path, *em.svg);
        return kExitOk;
    } catch (const UsageError& e) {
        ctx.err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        ctx.err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return is_usage_code(e.code()) ? kExitUsage : kExitDataError;
    }
}

}  // namespace greenfab::cli
