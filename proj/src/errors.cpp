#include "pttbp/errors.hpp"

namespace pttbp {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::MalformedFile: return "MalformedFile";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::BadSamplingRate: return "BadSamplingRate";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
        case ErrorCode::EmptySignal: return "EmptySignal";
        case ErrorCode::ConstantSignal: return "ConstantSignal";
        case ErrorCode::InvalidCutoff: return "InvalidCutoff";
        case ErrorCode::SignalTooShort: return "SignalTooShort";
        case ErrorCode::NoEventsFound: return "NoEventsFound";
        case ErrorCode::CountMismatch: return "CountMismatch";
        case ErrorCode::DegenerateInterval: return "DegenerateInterval";
        case ErrorCode::IntervalTooShort: return "IntervalTooShort";
        case ErrorCode::NoRPeak: return "NoRPeak";
        case ErrorCode::NoPulseFound: return "NoPulseFound";
        case ErrorCode::AmbiguousHeartSounds: return "AmbiguousHeartSounds";
        case ErrorCode::EmptyInterval: return "EmptyInterval";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::DegenerateDesign: return "DegenerateDesign";
        case ErrorCode::TooFewPairs: return "TooFewPairs";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
    }
    return "Unknown";
}

}  // namespace pttbp
