#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ageom {

enum class ErrorCode {
    InvalidInput,
    NonHermitian,
    NoConvergence,
    RankDeficient,
    Singular,
    NotPSD,
    NotIsometric,
    TooFar,
    ProjectionMismatch,
    GramNotPD,
    Infeasible,
    NotTangent,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotIsometric: return "NotIsometric";
    case ErrorCode::TooFar: return "TooFar";
    case ErrorCode::ProjectionMismatch: return "ProjectionMismatch";
    case ErrorCode::GramNotPD: return "GramNotPD";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NotTangent: return "NotTangent";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can surface it as a structured `"error"` field.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace ageom
