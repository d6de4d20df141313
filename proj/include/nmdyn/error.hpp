// error.hpp — error kinds shared by all nmdyn modules

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmdyn {

enum class ErrorKind {
    NotHermitian,
    NoConvergence,
    StepUnderflow,
    DimensionMismatch,
    InvalidArgument,
    OhmicWithoutCutoff,
    EmptyBath,
    NormExceeded,
    StepTooCoarse,
    GridMismatch,
    ParseError,
    ValidationError,
    InvariantViolation,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::StepUnderflow: return "StepUnderflow";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::OhmicWithoutCutoff: return "OhmicWithoutCutoff";
        case ErrorKind::EmptyBath: return "EmptyBath";
        case ErrorKind::NormExceeded: return "NormExceeded";
        case ErrorKind::StepTooCoarse: return "StepTooCoarse";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Config errors carry the offending JSON path, e.g. "bath.peaks[0].gamma".
class ConfigError : public Error {
public:
    ConfigError(ErrorKind kind, std::string path, const std::string& what)
        : Error(kind, path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace nmdyn
