#pragma once

#include <stdexcept>
#include <string>

namespace pinchflow {

enum class ErrorCode {
    DomainError,
    DerivativeAtZero,
    RootMismatch,
    GeometryError,
    NonEmbedded,
    FixedPoint,
    StepUnderflow,
    MeshDegenerate,
    DegenerateGamma,
    CheckFailure,
    InvalidArgument,
    IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// C layer can map it onto a status value without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DerivativeAtZero: return "DerivativeAtZero";
    case ErrorCode::RootMismatch: return "RootMismatch";
    case ErrorCode::GeometryError: return "GeometryError";
    case ErrorCode::NonEmbedded: return "NonEmbedded";
    case ErrorCode::FixedPoint: return "FixedPoint";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::MeshDegenerate: return "MeshDegenerate";
    case ErrorCode::DegenerateGamma: return "DegenerateGamma";
    case ErrorCode::CheckFailure: return "CheckFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace pinchflow
