#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fraclag {

enum class ErrorCode {
    UnsupportedExpression,
    InvalidSubstitution,
    SyntaxError,
    IndexOutOfRange,
    InvalidModel,
    DomainError,
    NoConvergence,
    RankUndecided,
    UnsupportedLagrangian,
    NotReducible,
    JetLeak,
    HamiltonianNotReduced,
    NonSolvableConstraint,
    ClosureOverflow,
    ConstraintViolation,
    NumericalBlowup,
    GridError,
    DegenerateQuadraticForm,
    UnsupportedKernel,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnsupportedExpression: return "UnsupportedExpression";
        case ErrorCode::InvalidSubstitution: return "InvalidSubstitution";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::RankUndecided: return "RankUndecided";
        case ErrorCode::UnsupportedLagrangian: return "UnsupportedLagrangian";
        case ErrorCode::NotReducible: return "NotReducible";
        case ErrorCode::JetLeak: return "JetLeak";
        case ErrorCode::HamiltonianNotReduced: return "HamiltonianNotReduced";
        case ErrorCode::NonSolvableConstraint: return "NonSolvableConstraint";
        case ErrorCode::ClosureOverflow: return "ClosureOverflow";
        case ErrorCode::ConstraintViolation: return "ConstraintViolation";
        case ErrorCode::NumericalBlowup: return "NumericalBlowup";
        case ErrorCode::GridError: return "GridError";
        case ErrorCode::DegenerateQuadraticForm: return "DegenerateQuadraticForm";
        case ErrorCode::UnsupportedKernel: return "UnsupportedKernel";
    }
    return "UnknownError";
}

// All library failures throw this (or the ParseError subclass). The code is
// stable API; the message is diagnostic text. `stage` is filled in by the
// analysis driver so callers can report which derivation step failed.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          message_(message) {}

    Error(ErrorCode code, const std::string& message, std::string stage)
        : std::runtime_error("stage " + stage + ": " + to_string(code) + ": " + message),
          code_(code),
          message_(message),
          stage_(std::move(stage)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& raw_message() const noexcept { return message_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    ErrorCode code_;
    std::string message_;
    std::string stage_;
};

// Byte offsets into the source text, half-open [begin, end).
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

class ParseError : public Error {
public:
    ParseError(ErrorCode code, const std::string& message, SourceSpan span)
        : Error(code, message + " (at bytes " + std::to_string(span.begin) + ".." +
                          std::to_string(span.end) + ")"),
          span_(span) {}

    SourceSpan span() const noexcept { return span_; }

private:
    SourceSpan span_;
};

}  // namespace fraclag
