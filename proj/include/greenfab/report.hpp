#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenfab/cdc.hpp"

namespace greenfab {

enum class OutputFormat { table, csv, json };

OutputFormat parse_output_format(std::string_view text);

// Display text plus, for numeric cells, the unrounded value.
struct Cell {
    std::string text;
    std::optional<double> value;

    static Cell label(std::string text) { return {std::move(text), std::nullopt}; }
    static Cell number(double v, int decimals);
    static Cell integer(long long v);
    static Cell missing() { return {"-", std::nullopt}; }
};

struct RenderedReport {
    std::string title;
    std::vector<std::string> headers;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> footnotes;

    // Throws ValidationError when a row width differs from the header.
    void add_row(std::vector<Cell> row);
};

inline constexpr int kCdcDecimals = 2;
inline constexpr int kSavingsDecimals = 2;
inline constexpr int kScaleDecimals = 1;

inline constexpr std::string_view kEstimatedFootnote =
    "estimated inputs: some kernel utilizations are estimates, not measured values";

std::string format_fixed(double value, int decimals);

// table: aligned text; csv: display column plus <name>_exact for numeric
// columns; json: raw values.
std::string emit_table(const RenderedReport& report, OutputFormat format);

// series,parameter,value rows at full precision.
std::string emit_curve_csv(std::span<const SweepResult> curves);

struct BarChart {
    std::string title;
    std::string y_label;
    std::vector<std::string> group_labels;
    std::vector<std::string> series_labels;
    std::vector<std::vector<double>> values;  // [series][group]
};

std::string emit_svg_line_chart(std::span<const SweepResult> curves, std::string_view title,
                                std::string_view y_label);
std::string emit_svg_grouped_bar(const BarChart& chart);

}  // namespace greenfab
