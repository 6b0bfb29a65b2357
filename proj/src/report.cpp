#include "greenfab/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include "json.hpp"

namespace greenfab {

OutputFormat parse_output_format(std::string_view text) {
    if (text == "table") return OutputFormat::table;
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw Error(ErrorCode::InvalidRange, fmt::format("unknown output format '{}'", text));
}

std::string format_fixed(double value, int decimals) {
    std::string out = fmt::format("{:.{}f}", value, decimals);
    if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

Cell Cell::number(double v, int decimals) { return {format_fixed(v, decimals), v}; }

Cell Cell::integer(long long v) { return {fmt::format("{}", v), static_cast<double>(v)}; }

void RenderedReport::add_row(std::vector<Cell> row) {
    if (row.size() != headers.size()) {
        throw Error(ErrorCode::ValidationError,
                    fmt::format("report row has {} cells, expected {}", row.size(), headers.size()));
    }
    rows.push_back(std::move(row));
}

namespace {

std::string csv_cell(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    return out + "\"";
}

std::string exact(double v) { return fmt::format("{}", v); }

std::vector<bool> numeric_columns(const RenderedReport& r) {
    std::vector<bool> numeric(r.headers.size(), false);
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c].value) numeric[c] = true;
        }
    }
    return numeric;
}

std::string render_text(const RenderedReport& r) {
    std::vector<std::size_t> width(r.headers.size());
    for (std::size_t c = 0; c < r.headers.size(); ++c) width[c] = r.headers[c].size();
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].text.size());
    }
    const auto numeric = numeric_columns(r);
    std::string out;
    if (!r.title.empty()) out += r.title + "\n";
    auto line = [&](auto&& text_at) {
        std::string s;
        for (std::size_t c = 0; c < width.size(); ++c) {
            if (c > 0) s += "  ";
            const std::string& t = text_at(c);
            s += numeric[c] ? fmt::format("{:>{}}", t, width[c]) : fmt::format("{:<{}}", t, width[c]);
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out += s + "\n";
    };
    line([&](std::size_t c) -> const std::string& { return r.headers[c]; });
    std::string rule;
    for (std::size_t c = 0; c < width.size(); ++c) {
        if (c > 0) rule += "  ";
        rule += std::string(width[c], '-');
    }
    out += rule + "\n";
    for (const auto& row : r.rows) {
        line([&](std::size_t c) -> const std::string& { return row[c].text; });
    }
    for (const auto& note : r.footnotes) out += "* " + note + "\n";
    return out;
}

std::string render_csv(const RenderedReport& r) {
    const auto numeric = numeric_columns(r);
    std::string out;
    for (std::size_t c = 0; c < r.headers.size(); ++c) {
        if (c > 0) out += ',';
        out += csv_cell(r.headers[c]);
        if (numeric[c]) out += ',' + csv_cell(r.headers[c] + "_exact");
    }
    out += '\n';
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ',';
            out += csv_cell(row[c].text);
            if (numeric[c]) out += ',' + (row[c].value ? exact(*row[c].value) : std::string{});
        }
        out += '\n';
    }
    for (const auto& note : r.footnotes) out += "# " + note + "\n";
    return out;
}

std::string render_json(const RenderedReport& r) {
    nlohmann::ordered_json doc;
    doc["title"] = r.title;
    doc["columns"] = r.headers;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c].value) obj[r.headers[c]] = *row[c].value;
            else if (row[c].text == "-") obj[r.headers[c]] = nullptr;
            else obj[r.headers[c]] = row[c].text;
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    doc["footnotes"] = r.footnotes;
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<std::string_view, 8> kPalette{
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string px(double v) { return format_fixed(v, 2); }

// Round the axis top up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
    if (!(v > 0.0)) return 1.0;
    const double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= v) return m * mag;
    }
    return 10.0 * mag;
}

std::string svg_open(std::string_view title) {
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\">\n",
        px(kWidth), px(kHeight));
    out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                       px(kWidth), px(kHeight));
    out += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
                       "text-anchor=\"middle\">{}</text>\n",
                       px((kWidth - kRight + kLeft) / 2), xml_escape(title));
    return out;
}

std::string y_axis(double y_max, std::string_view label) {
    const double plot_h = kHeight - kTop - kBottom;
    std::string out;
    out += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" "
                       "stroke=\"black\"/>\n",
                       px(kLeft), px(kTop), px(kHeight - kBottom));
    for (int i = 0; i <= 5; ++i) {
        const double v = y_max * i / 5.0;
        const double y = kHeight - kBottom - plot_h * i / 5.0;
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>\n",
                           px(kLeft), px(y), px(kWidth - kRight), px(y));
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "text-anchor=\"end\">{}</text>\n",
                           px(kLeft - 6), px(y + 4), format_fixed(v, 2));
    }
    out += fmt::format("<text x=\"18\" y=\"{0}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                       px(kTop + plot_h / 2), xml_escape(label));
    return out;
}

std::string legend_entry(std::size_t index, std::string_view label, bool line) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(index);
    const double x = kWidth - kRight + 16;
    const auto color = kPalette[index % kPalette.size()];
    std::string out;
    if (line) {
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
                           "stroke-width=\"2\"/>\n",
                           px(x), px(y), px(x + 18), px(y), color);
    } else {
        out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n",
                           px(x + 3), px(y - 6), color);
    }
    out += fmt::format("<text class=\"legend\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" "
                       "font-size=\"11\">{}</text>\n",
                       px(x + 24), px(y + 4), xml_escape(label));
    return out;
}

}  // namespace

std::string emit_table(const RenderedReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::table: return render_text(report);
        case OutputFormat::csv: return render_csv(report);
        case OutputFormat::json: return render_json(report);
    }
    return {};
}

std::string emit_curve_csv(std::span<const SweepResult> curves) {
    std::string out = "series,parameter,value\n";
    for (const auto& curve : curves) {
        for (const auto& s : curve.samples) {
            out += fmt::format("{},{},{}\n", csv_cell(curve.label), exact(s.parameter),
                               exact(s.value));
        }
    }
    return out;
}

std::string emit_svg_line_chart(std::span<const SweepResult> curves, std::string_view title,
                                std::string_view y_label) {
    if (curves.empty()) throw Error(ErrorCode::InvalidRange, "chart needs at least one series");
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_hi = 0.0;
    for (const auto& c : curves) {
        for (const auto& s : c.samples) {
            x_lo = std::min(x_lo, s.parameter);
            x_hi = std::max(x_hi, s.parameter);
            y_hi = std::max(y_hi, s.value);
        }
    }
    if (!std::isfinite(x_lo)) throw Error(ErrorCode::InvalidRange, "chart series are empty");
    if (x_hi == x_lo) {
        x_lo -= 0.05;
        x_hi += 0.05;
    }
    const double y_max = nice_ceiling(y_hi * 1.05);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + plot_w * (x - x_lo) / (x_hi - x_lo); };
    auto sy = [&](double y) { return kHeight - kBottom - plot_h * y / y_max; };

    std::string out = svg_open(title);
    out += y_axis(y_max, y_label);
    out += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" "
                       "stroke=\"black\"/>\n",
                       px(kLeft), px(kHeight - kBottom), px(kWidth - kRight));
    for (int i = 0; i <= 5; ++i) {
        const double v = x_lo + (x_hi - x_lo) * i / 5.0;
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "text-anchor=\"middle\">{}</text>\n",
                           px(sx(v)), px(kHeight - kBottom + 16), format_fixed(v, 2));
    }
    const std::string axis = curves.front().axis_name.empty() ? "parameter" : curves.front().axis_name;
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\">{} (dimensionless)</text>\n",
                       px(kLeft + plot_w / 2), px(kHeight - 16), xml_escape(axis));

    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::string d;
        for (std::size_t j = 0; j < curves[i].samples.size(); ++j) {
            const auto& s = curves[i].samples[j];
            d += fmt::format("{}{},{}", j == 0 ? "M" : " L", px(sx(s.parameter)), px(sy(s.value)));
        }
        out += fmt::format("<path class=\"series\" d=\"{}\" fill=\"none\" stroke=\"{}\" "
                           "stroke-width=\"2\"/>\n",
                           d, kPalette[i % kPalette.size()]);
        out += legend_entry(i, curves[i].label, true);
    }
    out += "</svg>\n";
    return out;
}

std::string emit_svg_grouped_bar(const BarChart& chart) {
    if (chart.series_labels.empty() || chart.group_labels.empty()) {
        throw Error(ErrorCode::InvalidRange, "chart needs at least one series and group");
    }
    if (chart.values.size() != chart.series_labels.size()) {
        throw Error(ErrorCode::InvalidRange, "bar values must have one row per series");
    }
    double y_hi = 0.0;
    for (const auto& row : chart.values) {
        if (row.size() != chart.group_labels.size()) {
            throw Error(ErrorCode::InvalidRange, "bar values must have one column per group");
        }
        for (double v : row) y_hi = std::max(y_hi, v);
    }
    const double y_max = nice_ceiling(y_hi * 1.05);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double groups = static_cast<double>(chart.group_labels.size());
    const double series = static_cast<double>(chart.series_labels.size());
    const double group_w = plot_w / groups;
    const double bar_w = group_w * 0.8 / series;

    std::string out = svg_open(chart.title);
    out += y_axis(y_max, chart.y_label);
    out += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" "
                       "stroke=\"black\"/>\n",
                       px(kLeft), px(kHeight - kBottom), px(kWidth - kRight));
    for (std::size_t g = 0; g < chart.group_labels.size(); ++g) {
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                           "text-anchor=\"middle\">{}</text>\n",
                           px(kLeft + group_w * (static_cast<double>(g) + 0.5)),
                           px(kHeight - kBottom + 18), xml_escape(chart.group_labels[g]));
    }
    for (std::size_t s = 0; s < chart.series_labels.size(); ++s) {
        for (std::size_t g = 0; g < chart.group_labels.size(); ++g) {
            const double v = chart.values[s][g];
            if (!std::isfinite(v)) continue;  // missing cell
            const double x = kLeft + group_w * static_cast<double>(g) + group_w * 0.1 +
                             bar_w * static_cast<double>(s);
            const double h = plot_h * v / y_max;
            out += fmt::format("<rect class=\"bar\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" "
                               "fill=\"{}\"><title>{}: {}</title></rect>\n",
                               px(x), px(kHeight - kBottom - h), px(bar_w), px(h),
                               kPalette[s % kPalette.size()], xml_escape(chart.series_labels[s]),
                               format_fixed(v, 2));
        }
        out += legend_entry(s, chart.series_labels[s], false);
    }
    out += "</svg>\n";
    return out;
}

}  // namespace greenfab
