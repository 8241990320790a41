#include "qss/error.hpp"

namespace qss {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::DimensionError: return "DimensionError";
        case ErrorCode::NotPositive: return "NotPositive";
        case ErrorCode::BoundViolation: return "BoundViolation";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NotEigenIndex: return "NotEigenIndex";
        case ErrorCode::InvalidN: return "InvalidN";
        case ErrorCode::InvalidGamma: return "InvalidGamma";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::ZeroOutcome: return "ZeroOutcome";
        case ErrorCode::EvalError: return "EvalError";
        case ErrorCode::RegimeError: return "RegimeError";
        case ErrorCode::UnboundedDerivative: return "UnboundedDerivative";
        case ErrorCode::RestartsExhausted: return "RestartsExhausted";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::RegimeError:
        case ErrorCode::UnboundedDerivative:
            return 3;
        case ErrorCode::ZeroOutcome:
        case ErrorCode::EvalError:
        case ErrorCode::InsufficientSamples:
        case ErrorCode::RestartsExhausted:
            return 4;
        default:
            return 2;
    }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace qss
