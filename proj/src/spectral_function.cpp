#include "qss/spectral_function.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "qss/error.hpp"

namespace qss {
namespace {

double checked(double v, double x) {
    require(std::isfinite(v), ErrorCode::EvalError, "f is not finite at x = " + std::to_string(x));
    return v;
}

std::string format_parameter(double p) {
    std::ostringstream ss;
    ss.precision(17);
    ss << p;
    return ss.str();
}

}  // namespace

double SpectralFunction::value(double x) const {
    switch (kind) {
        case FunctionKind::Log:
            require(x > 0.0, ErrorCode::EvalError, "log of non-positive value " + std::to_string(x));
            return std::log(x);
        case FunctionKind::ExpNegBeta:
            return checked(std::exp(-parameter * x), x);
        case FunctionKind::NegXLogX:
            require(x >= 0.0, ErrorCode::EvalError, "-x log x of negative value " + std::to_string(x));
            return x == 0.0 ? 0.0 : -x * std::log(x);
        case FunctionKind::Identity:
            return x;
        case FunctionKind::Power:
            require(x > 0.0 || (x == 0.0 && parameter > 0.0), ErrorCode::EvalError,
                    "x^p undefined at x = " + std::to_string(x));
            return checked(std::pow(x, parameter), x);
    }
    return 0.0;
}

double SpectralFunction::derivative(double x) const {
    switch (kind) {
        case FunctionKind::Log:
            require(x > 0.0, ErrorCode::EvalError, "1/x at non-positive value");
            return 1.0 / x;
        case FunctionKind::ExpNegBeta:
            return checked(-parameter * std::exp(-parameter * x), x);
        case FunctionKind::NegXLogX:
            require(x > 0.0, ErrorCode::EvalError, "-log x - 1 at non-positive value");
            return -std::log(x) - 1.0;
        case FunctionKind::Identity:
            return 1.0;
        case FunctionKind::Power:
            if (parameter == 0.0) {
                return 0.0;
            }
            require(x > 0.0 || parameter >= 1.0, ErrorCode::EvalError, "p x^(p-1) undefined at x = 0");
            return checked(parameter * std::pow(x, parameter - 1.0), x);
    }
    return 0.0;
}

double SpectralFunction::max_abs_derivative(double lo, double hi) const {
    require(lo >= 0.0 && hi >= lo, ErrorCode::DomainError, "invalid eigenvalue range");
    const bool diverges_at_zero = kind == FunctionKind::Log || kind == FunctionKind::NegXLogX ||
                                  (kind == FunctionKind::Power && parameter != 0.0 && parameter < 1.0);
    if (lo == 0.0 && diverges_at_zero) {
        fail(ErrorCode::UnboundedDerivative, "f' of " + name() + " is unbounded near 0; set lambda_min");
    }
    return std::max(std::abs(derivative(lo)), std::abs(derivative(hi)));
}

std::string SpectralFunction::name() const {
    switch (kind) {
        case FunctionKind::Log: return "logdet";
        case FunctionKind::ExpNegBeta: return "partition:" + format_parameter(parameter);
        case FunctionKind::NegXLogX: return "entropy";
        case FunctionKind::Identity: return "trace";
        case FunctionKind::Power: return "power:" + format_parameter(parameter);
    }
    return "unknown";
}

SpectralFunction parse_function(std::string_view spelling) {
    auto parameter_of = [&](std::string_view prefix) {
        const std::string_view rest = spelling.substr(prefix.size());
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
        require(!rest.empty() && ec == std::errc{} && ptr == rest.data() + rest.size() && std::isfinite(value),
                ErrorCode::InvalidConfig, "bad parameter in function '" + std::string(spelling) + "'");
        return value;
    };
    if (spelling == "logdet") return SpectralFunction::log();
    if (spelling == "entropy") return SpectralFunction::neg_x_log_x();
    if (spelling == "trace") return SpectralFunction::identity();
    if (spelling.starts_with("partition:")) return SpectralFunction::exp_neg_beta(parameter_of("partition:"));
    if (spelling.starts_with("power:")) return SpectralFunction::power(parameter_of("power:"));
    fail(ErrorCode::InvalidConfig, "unknown function '" + std::string(spelling) + "'");
}

}  // namespace qss
