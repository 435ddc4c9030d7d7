#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace randstab {

enum class ErrorCode {
    DimensionMismatch,
    InvalidArgument,
    NonFinite,
    NoConvergence,
    SingularInnerMatrix,
    EmptyTrajectory,
    RankDeficientBasis,
    ConfigError,
    RedrawBudgetExhausted,
    EmptyInput,
    IoError,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingularInnerMatrix: return "SingularInnerMatrix";
        case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
        case ErrorCode::RankDeficientBasis: return "RankDeficientBasis";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::RedrawBudgetExhausted: return "RedrawBudgetExhausted";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Library-wide exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace randstab
