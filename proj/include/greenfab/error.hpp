#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace greenfab {

enum class ErrorCode {
    EmptyKernelSet,
    InvalidKernel,
    InvalidWeights,
    ConcurrencyExceedsPopulation,
    InvalidScale,
    InvalidBreakdown,
    UnknownDeviceClass,
    InvalidTechNode,
    AlphaPole,
    DegenerateModel,
    InvalidRange,
    SingularFit,
    InfeasibleFit,
    UnknownScenario,
    UnknownKernel,
    NoFabricWorkload,
    EmptyInput,
    ParseError,
    ValidationError,
    UnsupportedVersion,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace greenfab
