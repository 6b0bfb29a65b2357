#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "greenfab/concurrency.hpp"
#include "greenfab/model.hpp"

namespace greenfab {

inline constexpr int kDatasetVersion = 1;

// Descriptive metadata of the reconfigurable fabric the kernels were
// normalized against.
struct FabricInfo {
    GridSpec grid{8, 8};
    int memory_banks = 32;
    double memory_kb = 256.0;
    double clock_mhz = 100.0;

    bool operator==(const FabricInfo& o) const {
        return grid.rows == o.grid.rows && grid.cols == o.grid.cols &&
               memory_banks == o.memory_banks && memory_kb == o.memory_kb &&
               clock_mhz == o.clock_mhz;
    }
};

struct KernelDataset {
    std::vector<KernelProfile> kernels;
    FabricInfo fabric;
    std::string provenance;
    int version = kDatasetVersion;

    [[nodiscard]] bool has_estimates() const;
    [[nodiscard]] const KernelProfile* find(std::string_view name) const;

    bool operator==(const KernelDataset&) const = default;
};

enum class DataFormat { csv, json };

DataFormat parse_data_format(std::string_view text);
// By extension: .json -> json, anything else -> csv.
DataFormat format_from_path(std::string_view path);

struct Violation {
    std::string record;   // kernel name, or "fabric" / "dataset"
    std::string message;
};

// Eight-kernel suite: DSA area/energy relative to an 8x8 CGRA, data memory
// demand, and fabric utilization. Six utilizations are estimates chosen to
// respect the published constraints (four kernels under 50%, suite mean 64%).
KernelDataset builtin_paper_dataset();

std::vector<Violation> validate_dataset(const KernelDataset& ds);

KernelDataset load_dataset(std::string_view source, DataFormat format);
std::string serialize_dataset(const KernelDataset& ds, DataFormat format);

std::vector<DeviceBreakdown> load_breakdowns(std::string_view source, DataFormat format);
std::string serialize_breakdowns(const std::vector<DeviceBreakdown>& items, DataFormat format);

// Requires exactly one anchor record (both ratios = 1).
std::vector<TechNodeRecord> load_tech_nodes(std::string_view source, DataFormat format);
std::string serialize_tech_nodes(const std::vector<TechNodeRecord>& items, DataFormat format);

std::string read_file(const std::string& path);

}  // namespace greenfab
