#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pttbp {

enum class ErrorCode {
    InvalidArgument = 1,
    MalformedFile,
    LengthMismatch,
    BadSamplingRate,
    IoFailure,
    InfeasibleConfig,
    EmptySignal,
    ConstantSignal,
    InvalidCutoff,
    SignalTooShort,
    NoEventsFound,
    CountMismatch,
    DegenerateInterval,
    IntervalTooShort,
    NoRPeak,
    NoPulseFound,
    AmbiguousHeartSounds,
    EmptyInterval,
    DomainViolation,
    DegenerateDesign,
    TooFewPairs,
    TooFewPoints,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; code() is stable and is
// what the CLI turns into its exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pttbp
