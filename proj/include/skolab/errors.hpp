#pragma once

#include <stdexcept>
#include <string>

namespace skolab {

enum class ErrorCode {
    NonMonotoneTimes,
    DimensionMismatch,
    NonFiniteValue,
    HorizonExceeded,
    OutOfHorizon,
    RefinementTooSmall,
    BadParameter,
    UnknownId,
    MissingInternals,
    NotUncorrelated,
    InvalidRep,
    InsufficientData,
    UnknownConstruction,
    SinkError,
};

const char* error_code_name(ErrorCode code);

/// Domain error carrying one of the codes above; the CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace skolab
