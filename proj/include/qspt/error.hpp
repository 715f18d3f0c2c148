#ifndef QSPT_ERROR_HPP
#define QSPT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qspt {

enum class ErrorCode {
    DetuningTooSmall,
    NonPositiveSplitting,
    InvalidSpecies,
    SelectionRuleViolation,
    UnsupportedBranch,
    NonPositiveInput,
    ZeroDetuning,
    ComplexRoots,
    DegenerateBranch,
    InvalidScenario,
    PhaseConventionViolation,
    IntegrationFailure,
    GridError,
    InsufficientSamples,
    NoModulation,
    ConfigError,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::DetuningTooSmall: return "DetuningTooSmall";
    case ErrorCode::NonPositiveSplitting: return "NonPositiveSplitting";
    case ErrorCode::InvalidSpecies: return "InvalidSpecies";
    case ErrorCode::SelectionRuleViolation: return "SelectionRuleViolation";
    case ErrorCode::UnsupportedBranch: return "UnsupportedBranch";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::ZeroDetuning: return "ZeroDetuning";
    case ErrorCode::ComplexRoots: return "ComplexRoots";
    case ErrorCode::DegenerateBranch: return "DegenerateBranch";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::PhaseConventionViolation: return "PhaseConventionViolation";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::GridError: return "GridError";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NoModulation: return "NoModulation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace qspt

#endif
