#include "greenfab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

namespace greenfab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Built-in suite
// ---------------------------------------------------------------------------

KernelDataset builtin_paper_dataset() {
    KernelDataset ds;
    ds.provenance =
        "MachSuite kernels on 40nm @ 100MHz; area/energy normalized to an 8x8 CGRA; "
        "FFT, KNN, Conv2D, Stencil3D, Viterbi, AESEncrypt utilizations estimated";
    ds.fabric = FabricInfo{};
    //            name          domain                 area   energy util  mem_kb est
    ds.kernels = {
        {"GeMM", "Machine Learning", 0.41, 0.541, 1.00, 108.0, false},
        {"FFT", "Signal Processing", 0.291, 0.283, 0.66, 1.5, true},
        {"Conv2D", "Machine Learning", 0.202, 0.410, 0.45, 72.0, true},
        {"Stencil3D", "Image Processing", 0.502, 0.511, 0.45, 256.0, true},
        {"Viterbi", "Speech Recognition", 0.128, 0.091, 0.45, 52.0, true},
        {"FIR", "Signal Processing", 0.396, 0.395, 1.00, 108.0, false},
        {"AESEncrypt", "Security", 0.03, 0.04, 0.45, 0.5, true},
        {"KNN", "Machine Learning", 0.241, 0.479, 0.66, 22.0, true},
    };
    return ds;
}

bool KernelDataset::has_estimates() const {
    return std::any_of(kernels.begin(), kernels.end(),
                       [](const KernelProfile& k) { return k.estimated; });
}

const KernelProfile* KernelDataset::find(std::string_view name) const {
    auto it = std::find_if(kernels.begin(), kernels.end(),
                           [&](const KernelProfile& k) { return k.name == name; });
    return it == kernels.end() ? nullptr : &*it;
}

DataFormat parse_data_format(std::string_view text) {
    if (text == "csv") return DataFormat::csv;
    if (text == "json") return DataFormat::json;
    throw Error(ErrorCode::InvalidRange, fmt::format("unknown data format '{}'", text));
}

DataFormat format_from_path(std::string_view path) {
    return path.ends_with(".json") ? DataFormat::json : DataFormat::csv;
}

std::vector<Violation> validate_dataset(const KernelDataset& ds) {
    std::vector<Violation> out;
    if (ds.version != kDatasetVersion) {
        out.push_back({"dataset", fmt::format("unsupported version {}", ds.version)});
    }
    if (ds.kernels.empty()) out.push_back({"dataset", "no kernels"});
    std::set<std::string> seen;
    double max_memory = 0.0;
    for (const auto& k : ds.kernels) {
        if (k.name.empty()) out.push_back({"dataset", "kernel with empty name"});
        if (!seen.insert(k.name).second) {
            out.push_back({k.name, fmt::format("duplicate kernel name '{}'", k.name)});
        }
        if (auto why = kernel_violation(k); !why.empty()) out.push_back({k.name, why});
        max_memory = std::max(max_memory, k.memory_kb);
    }
    if (ds.fabric.grid.rows < 1 || ds.fabric.grid.cols < 1) {
        out.push_back({"fabric", "grid must be at least 1x1"});
    }
    if (ds.fabric.memory_kb < max_memory) {
        out.push_back({"fabric", fmt::format("fabric memory below largest kernel ({} KB < {} KB)",
                                             ds.fabric.memory_kb, max_memory)});
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::EmptyInput, fmt::format("cannot open '{}'", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
    std::vector<std::size_t> columns;  // 1-based column of each field start
};

[[noreturn]] void parse_fail(std::size_t line, std::size_t column, const std::string& what) {
    throw Error(ErrorCode::ParseError, fmt::format("line {}, column {}: {}", line, column, what));
}

bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

struct CsvDocument {
    std::vector<std::string> comments;  // '#' lines before the header, '#' stripped
    std::vector<CsvRow> rows;           // header first
};

// RFC 4180 fields; '#' lines before the header and blank lines are skipped.
CsvDocument parse_csv(std::string_view text) {
    CsvDocument doc;
    std::size_t pos = 0, line = 1;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        if (doc.rows.empty() && !raw.empty() && raw.front() == '#') {
            std::string_view body = raw.substr(1);
            if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
            doc.comments.emplace_back(body);
            pos = eol == std::string_view::npos ? text.size() : eol + 1;
            ++line;
            continue;
        }
        if (is_blank(raw)) {
            pos = eol == std::string_view::npos ? text.size() : eol + 1;
            ++line;
            continue;
        }

        CsvRow row;
        row.line = line;
        std::string field;
        std::size_t col = 1, field_col = 1;
        bool quoted = false, was_quoted = false;
        const std::size_t row_line = line;
        while (true) {
            if (pos >= text.size()) {
                if (quoted) parse_fail(row_line, field_col, "unterminated quoted field");
                break;
            }
            const char c = text[pos];
            if (quoted) {
                if (c == '"') {
                    if (pos + 1 < text.size() && text[pos + 1] == '"') {
                        field.push_back('"');
                        pos += 2;
                        col += 2;
                        continue;
                    }
                    quoted = false;
                    ++pos;
                    ++col;
                    continue;
                }
                if (c == '\n') {
                    ++line;
                    col = 0;
                }
                field.push_back(c);
                ++pos;
                ++col;
                continue;
            }
            if (c == '"') {
                if (!field.empty() || was_quoted) parse_fail(line, col, "unexpected quote");
                quoted = was_quoted = true;
                ++pos;
                ++col;
                continue;
            }
            if (c == ',') {
                row.fields.push_back(std::move(field));
                row.columns.push_back(field_col);
                field.clear();
                was_quoted = false;
                ++pos;
                ++col;
                field_col = col;
                continue;
            }
            if (c == '\r' && (pos + 1 >= text.size() || text[pos + 1] == '\n')) {
                ++pos;
                continue;
            }
            if (c == '\n') {
                ++pos;
                break;
            }
            if (was_quoted) parse_fail(line, col, "characters after closing quote");
            field.push_back(c);
            ++pos;
            ++col;
        }
        row.fields.push_back(std::move(field));
        row.columns.push_back(field_col);
        doc.rows.push_back(std::move(row));
        ++line;
    }
    return doc;
}

std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

double parse_number(const CsvRow& row, std::size_t idx, std::string_view column) {
    const std::string& s = row.fields[idx];
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t')) --last;
    if (first < last && *first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        parse_fail(row.line, row.columns[idx],
                   fmt::format("column '{}': '{}' is not a number", column, s));
    }
    return value;
}

bool parse_flag(const CsvRow& row, std::size_t idx, std::string_view column) {
    const std::string& s = row.fields[idx];
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false" || s.empty()) return false;
    parse_fail(row.line, row.columns[idx], fmt::format("column '{}': expected 0 or 1", column));
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// Maps each required column to its index in the header row.
std::vector<std::size_t> bind_header(const CsvRow& header,
                                     const std::vector<std::string_view>& required) {
    std::vector<std::size_t> index;
    for (auto name : required) {
        auto it = std::find_if(header.fields.begin(), header.fields.end(),
                               [&](const std::string& f) { return trim(f) == name; });
        if (it == header.fields.end()) {
            parse_fail(header.line, 1, fmt::format("header is missing column '{}'", name));
        }
        index.push_back(static_cast<std::size_t>(it - header.fields.begin()));
    }
    return index;
}

void check_width(const CsvRow& row, std::size_t width) {
    if (row.fields.size() != width) {
        parse_fail(row.line, 1,
                   fmt::format("expected {} fields, found {}", width, row.fields.size()));
    }
}

CsvDocument parse_nonempty_csv(std::string_view source) {
    if (is_blank(source)) throw Error(ErrorCode::EmptyInput, "input is empty");
    CsvDocument doc = parse_csv(source);
    if (doc.rows.empty()) throw Error(ErrorCode::EmptyInput, "input has no header row");
    return doc;
}

void check_version(int version) {
    if (version != kDatasetVersion) {
        throw Error(ErrorCode::UnsupportedVersion,
                    fmt::format("document version {} is not supported (expected {})", version,
                                kDatasetVersion));
    }
}

// Metadata comments look like "key: value".
void apply_dataset_comment(KernelDataset& ds, std::string_view comment) {
    const auto colon = comment.find(':');
    if (colon == std::string_view::npos) return;
    const std::string key = trim(comment.substr(0, colon));
    const std::string value = trim(comment.substr(colon + 1));
    if (key == "version") {
        int v = 0;
        auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || p != value.data() + value.size()) {
            throw Error(ErrorCode::ParseError, fmt::format("bad version comment '{}'", value));
        }
        check_version(v);
        ds.version = v;
    } else if (key == "provenance") {
        ds.provenance = value;
    } else if (key == "fabric") {
        std::istringstream in(value);
        std::string item;
        while (in >> item) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) continue;
            const std::string k = item.substr(0, eq);
            const std::string text = item.substr(eq + 1);
            double v = 0.0;
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc{} || p != text.data() + text.size()) {
                throw Error(ErrorCode::ParseError, fmt::format("bad fabric comment '{}'", item));
            }
            if (k == "rows") ds.fabric.grid.rows = static_cast<int>(v);
            else if (k == "cols") ds.fabric.grid.cols = static_cast<int>(v);
            else if (k == "banks") ds.fabric.memory_banks = static_cast<int>(v);
            else if (k == "memory_kb") ds.fabric.memory_kb = v;
            else if (k == "clock_mhz") ds.fabric.clock_mhz = v;
        }
    }
}

void throw_if_invalid(const KernelDataset& ds) {
    auto violations = validate_dataset(ds);
    if (violations.empty()) return;
    std::string msg;
    for (const auto& v : violations) {
        if (!msg.empty()) msg += "; ";
        msg += fmt::format("{}: {}", v.record, v.message);
    }
    throw Error(ErrorCode::ValidationError, msg);
}

const std::vector<std::string_view> kKernelColumns{
    "name", "domain", "area_norm", "energy_norm", "utilization", "memory_kb", "estimated"};
const std::vector<std::string_view> kBreakdownColumns{
    "device", "production_pct", "transport_pct", "use_pct", "eol_pct"};
const std::vector<std::string_view> kTechColumns{"node", "rel_area_per_cell",
                                                 "rel_embodied_per_cell"};

KernelDataset dataset_from_csv(std::string_view source) {
    CsvDocument doc = parse_nonempty_csv(source);
    KernelDataset ds;
    ds.provenance.clear();
    for (const auto& c : doc.comments) apply_dataset_comment(ds, c);
    const auto idx = bind_header(doc.rows.front(), kKernelColumns);
    const std::size_t width = doc.rows.front().fields.size();
    for (std::size_t r = 1; r < doc.rows.size(); ++r) {
        const CsvRow& row = doc.rows[r];
        check_width(row, width);
        KernelProfile k;
        k.name = trim(row.fields[idx[0]]);
        k.domain = row.fields[idx[1]];
        k.area_norm = parse_number(row, idx[2], kKernelColumns[2]);
        k.energy_norm = parse_number(row, idx[3], kKernelColumns[3]);
        k.utilization = parse_number(row, idx[4], kKernelColumns[4]);
        k.memory_kb = parse_number(row, idx[5], kKernelColumns[5]);
        k.estimated = parse_flag(row, idx[6], kKernelColumns[6]);
        ds.kernels.push_back(std::move(k));
    }
    return ds;
}

std::string dataset_to_csv(const KernelDataset& ds) {
    std::string out;
    out += fmt::format("# version: {}\n", ds.version);
    if (!ds.provenance.empty()) out += fmt::format("# provenance: {}\n", ds.provenance);
    out += fmt::format("# fabric: rows={} cols={} banks={} memory_kb={} clock_mhz={}\n",
                       ds.fabric.grid.rows, ds.fabric.grid.cols, ds.fabric.memory_banks,
                       fmt_num(ds.fabric.memory_kb), fmt_num(ds.fabric.clock_mhz));
    out += "name,domain,area_norm,energy_norm,utilization,memory_kb,estimated\n";
    for (const auto& k : ds.kernels) {
        out += fmt::format("{},{},{},{},{},{},{}\n", csv_escape(k.name), csv_escape(k.domain),
                           fmt_num(k.area_norm), fmt_num(k.energy_norm),
                           fmt_num(k.utilization), fmt_num(k.memory_kb), k.estimated ? 1 : 0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

json parse_json(std::string_view source) {
    if (is_blank(source)) throw Error(ErrorCode::EmptyInput, "input is empty");
    try {
        return json::parse(source);
    } catch (const json::parse_error& e) {
        // byte offset -> line/column
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, source.size());
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (source[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorCode::ParseError,
                    fmt::format("line {}, column {}: invalid JSON", line, column));
    }
}

template <typename T>
T json_field(const json& obj, const char* key, std::string_view record) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw Error(ErrorCode::ParseError, fmt::format("{}: missing field '{}'", record, key));
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::ParseError, fmt::format("{}: field '{}' has wrong type", record, key));
    }
}

int json_version(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top-level JSON must be an object");
    const int version = doc.contains("version") ? json_field<int>(doc, "version", "document") : 0;
    check_version(version);
    return version;
}

const json& json_array(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
        throw Error(ErrorCode::ParseError, fmt::format("document: missing array '{}'", key));
    }
    return doc.at(key);
}

KernelDataset dataset_from_json(std::string_view source) {
    const json doc = parse_json(source);
    KernelDataset ds;
    ds.version = json_version(doc);
    ds.provenance = doc.value("provenance", std::string{});
    if (doc.contains("fabric")) {
        const json& f = doc.at("fabric");
        ds.fabric.grid.rows = json_field<int>(f, "rows", "fabric");
        ds.fabric.grid.cols = json_field<int>(f, "cols", "fabric");
        ds.fabric.memory_banks = json_field<int>(f, "memory_banks", "fabric");
        ds.fabric.memory_kb = json_field<double>(f, "memory_kb", "fabric");
        ds.fabric.clock_mhz = json_field<double>(f, "clock_mhz", "fabric");
    }
    const json& kernels = json_array(doc, "kernels");
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        const json& item = kernels[i];
        const std::string record = fmt::format("kernels[{}]", i);
        KernelProfile k;
        k.name = json_field<std::string>(item, "name", record);
        k.domain = item.value("domain", std::string{});
        k.area_norm = json_field<double>(item, "area_norm", record);
        k.energy_norm = json_field<double>(item, "energy_norm", record);
        k.utilization = json_field<double>(item, "utilization", record);
        k.memory_kb = json_field<double>(item, "memory_kb", record);
        k.estimated = item.value("estimated", false);
        ds.kernels.push_back(std::move(k));
    }
    return ds;
}

std::string dataset_to_json(const KernelDataset& ds) {
    json doc;
    doc["version"] = ds.version;
    doc["provenance"] = ds.provenance;
    doc["fabric"] = {{"rows", ds.fabric.grid.rows},
                     {"cols", ds.fabric.grid.cols},
                     {"memory_banks", ds.fabric.memory_banks},
                     {"memory_kb", ds.fabric.memory_kb},
                     {"clock_mhz", ds.fabric.clock_mhz}};
    json kernels = json::array();
    for (const auto& k : ds.kernels) {
        kernels.push_back({{"name", k.name},
                           {"domain", k.domain},
                           {"area_norm", k.area_norm},
                           {"energy_norm", k.energy_norm},
                           {"utilization", k.utilization},
                           {"memory_kb", k.memory_kb},
                           {"estimated", k.estimated}});
    }
    doc["kernels"] = std::move(kernels);
    return doc.dump(2) + "\n";
}

void check_breakdowns(const std::vector<DeviceBreakdown>& items) {
    if (items.empty()) throw Error(ErrorCode::EmptyInput, "no breakdown records");
    for (const auto& b : items) {
        if (auto why = breakdown_violation(b); !why.empty()) {
            throw Error(ErrorCode::ValidationError, fmt::format("{}: {}", b.device, why));
        }
    }
}

void check_tech_nodes(const std::vector<TechNodeRecord>& items) {
    if (items.empty()) throw Error(ErrorCode::EmptyInput, "no tech-node records");
    int anchors = 0;
    for (const auto& r : items) {
        if (!(r.rel_area_per_cell > 0.0 && r.rel_embodied_per_cell > 0.0)) {
            throw Error(ErrorCode::ValidationError,
                        fmt::format("{}: ratios must be > 0", r.node_name));
        }
        if (r.is_anchor()) ++anchors;
    }
    if (anchors != 1) {
        throw Error(ErrorCode::ValidationError,
                    fmt::format("expected exactly one anchor node with both ratios = 1, found {}",
                                anchors));
    }
}

}  // namespace

KernelDataset load_dataset(std::string_view source, DataFormat format) {
    KernelDataset ds =
        format == DataFormat::csv ? dataset_from_csv(source) : dataset_from_json(source);
    throw_if_invalid(ds);
    return ds;
}

std::string serialize_dataset(const KernelDataset& ds, DataFormat format) {
    return format == DataFormat::csv ? dataset_to_csv(ds) : dataset_to_json(ds);
}

std::vector<DeviceBreakdown> load_breakdowns(std::string_view source, DataFormat format) {
    std::vector<DeviceBreakdown> out;
    if (format == DataFormat::csv) {
        CsvDocument doc = parse_nonempty_csv(source);
        const auto idx = bind_header(doc.rows.front(), kBreakdownColumns);
        const std::size_t width = doc.rows.front().fields.size();
        for (std::size_t r = 1; r < doc.rows.size(); ++r) {
            const CsvRow& row = doc.rows[r];
            check_width(row, width);
            out.push_back({trim(row.fields[idx[0]]), parse_number(row, idx[1], kBreakdownColumns[1]),
                           parse_number(row, idx[2], kBreakdownColumns[2]),
                           parse_number(row, idx[3], kBreakdownColumns[3]),
                           parse_number(row, idx[4], kBreakdownColumns[4])});
        }
    } else {
        const json doc = parse_json(source);
        json_version(doc);
        const json& items = json_array(doc, "breakdowns");
        for (std::size_t i = 0; i < items.size(); ++i) {
            const std::string record = fmt::format("breakdowns[{}]", i);
            out.push_back({json_field<std::string>(items[i], "device", record),
                           json_field<double>(items[i], "production_pct", record),
                           json_field<double>(items[i], "transport_pct", record),
                           json_field<double>(items[i], "use_pct", record),
                           json_field<double>(items[i], "eol_pct", record)});
        }
    }
    check_breakdowns(out);
    return out;
}

std::string serialize_breakdowns(const std::vector<DeviceBreakdown>& items, DataFormat format) {
    if (format == DataFormat::csv) {
        std::string out = "device,production_pct,transport_pct,use_pct,eol_pct\n";
        for (const auto& b : items) {
            out += fmt::format("{},{},{},{},{}\n", csv_escape(b.device), fmt_num(b.production_pct),
                               fmt_num(b.transport_pct), fmt_num(b.use_pct), fmt_num(b.eol_pct));
        }
        return out;
    }
    json arr = json::array();
    for (const auto& b : items) {
        arr.push_back({{"device", b.device},
                       {"production_pct", b.production_pct},
                       {"transport_pct", b.transport_pct},
                       {"use_pct", b.use_pct},
                       {"eol_pct", b.eol_pct}});
    }
    return json{{"version", kDatasetVersion}, {"breakdowns", arr}}.dump(2) + "\n";
}

std::vector<TechNodeRecord> load_tech_nodes(std::string_view source, DataFormat format) {
    std::vector<TechNodeRecord> out;
    if (format == DataFormat::csv) {
        CsvDocument doc = parse_nonempty_csv(source);
        const auto idx = bind_header(doc.rows.front(), kTechColumns);
        const std::size_t width = doc.rows.front().fields.size();
        for (std::size_t r = 1; r < doc.rows.size(); ++r) {
            const CsvRow& row = doc.rows[r];
            check_width(row, width);
            out.push_back({trim(row.fields[idx[0]]), parse_number(row, idx[1], kTechColumns[1]),
                           parse_number(row, idx[2], kTechColumns[2])});
        }
    } else {
        const json doc = parse_json(source);
        json_version(doc);
        const json& items = json_array(doc, "tech_nodes");
        for (std::size_t i = 0; i < items.size(); ++i) {
            const std::string record = fmt::format("tech_nodes[{}]", i);
            out.push_back({json_field<std::string>(items[i], "node", record),
                           json_field<double>(items[i], "rel_area_per_cell", record),
                           json_field<double>(items[i], "rel_embodied_per_cell", record)});
        }
    }
    check_tech_nodes(out);
    return out;
}

std::string serialize_tech_nodes(const std::vector<TechNodeRecord>& items, DataFormat format) {
    if (format == DataFormat::csv) {
        std::string out = "node,rel_area_per_cell,rel_embodied_per_cell\n";
        for (const auto& r : items) {
            out += fmt::format("{},{},{}\n", csv_escape(r.node_name), fmt_num(r.rel_area_per_cell),
                               fmt_num(r.rel_embodied_per_cell));
        }
        return out;
    }
    json arr = json::array();
    for (const auto& r : items) {
        arr.push_back({{"node", r.node_name},
                       {"rel_area_per_cell", r.rel_area_per_cell},
                       {"rel_embodied_per_cell", r.rel_embodied_per_cell}});
    }
    return json{{"version", kDatasetVersion}, {"tech_nodes", arr}}.dump(2) + "\n";
}

}  // namespace greenfab
