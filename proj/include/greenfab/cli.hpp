#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace greenfab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kDatasetEnvVar = "GREENFAB_DATASET";

struct Context {
    std::ostream& out;
    std::ostream& err;
    // Dataset used when a command takes no explicit path; builtin when unset.
    std::optional<std::string> default_dataset;
};

// args excludes the program name. Returns the process exit code:
// 0 success, 1 data/validation error, 2 usage error.
int run(const std::vector<std::string>& args, Context& ctx);

}  // namespace greenfab::cli
