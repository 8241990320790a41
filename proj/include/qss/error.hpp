#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qss {

enum class ErrorCode {
    ParseError,
    NotHermitian,
    DimensionError,
    NotPositive,
    BoundViolation,
    TooLarge,
    DomainError,
    NotEigenIndex,
    InvalidN,
    InvalidGamma,
    InvalidConfig,
    InsufficientSamples,
    ZeroOutcome,
    EvalError,
    RegimeError,
    UnboundedDerivative,
    RestartsExhausted,
    IoError,
};

/// Stable identifier used in reports and error messages, e.g. "NotHermitian".
std::string_view to_string(ErrorCode code) noexcept;

/// Process exit code for a failure of this kind:
/// 2 for invalid input, 3 for regime violations, 4 for aborted estimation.
int exit_code(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) {
        fail(code, message);
    }
}

}  // namespace qss
