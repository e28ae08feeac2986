#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heatchroma {

enum class ErrorCode {
    DomainMismatch,
    TooFewSamples,
    DegenerateSignal,
    NonPositiveWindow,
    WindowOutOfBounds,
    NonPositivePeriod,
    UnknownChannel,
    InvalidTrace,
    InvalidScript,
    TraceTooShort,
    InsufficientSamples,
    UncalibratedModel,
    InvalidEfficiency,
    InvalidConfig,
    ParseError,
    IoError,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::DegenerateSignal: return "DegenerateSignal";
    case ErrorCode::NonPositiveWindow: return "NonPositiveWindow";
    case ErrorCode::WindowOutOfBounds: return "WindowOutOfBounds";
    case ErrorCode::NonPositivePeriod: return "NonPositivePeriod";
    case ErrorCode::UnknownChannel: return "UnknownChannel";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::InvalidScript: return "InvalidScript";
    case ErrorCode::TraceTooShort: return "TraceTooShort";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::UncalibratedModel: return "UncalibratedModel";
    case ErrorCode::InvalidEfficiency: return "InvalidEfficiency";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// ParseError that remembers the 1-based line it refers to.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& message)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace heatchroma
