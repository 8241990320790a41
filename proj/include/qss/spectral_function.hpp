#pragma once

#include <string>
#include <string_view>

namespace qss {

enum class FunctionKind { Log, ExpNegBeta, NegXLogX, Identity, Power };

/// Built-in scalar f for spectral sums F = sum_j f(lambda_j), with its
/// derivative. Evaluated on scaled eigenvalues in (0, 1/2].
struct SpectralFunction {
    FunctionKind kind = FunctionKind::Log;
    double parameter = 0.0;  // beta for ExpNegBeta, p for Power

    static SpectralFunction log() { return {FunctionKind::Log, 0.0}; }
    static SpectralFunction exp_neg_beta(double beta) { return {FunctionKind::ExpNegBeta, beta}; }
    static SpectralFunction neg_x_log_x() { return {FunctionKind::NegXLogX, 0.0}; }
    static SpectralFunction identity() { return {FunctionKind::Identity, 0.0}; }
    static SpectralFunction power(double p) { return {FunctionKind::Power, p}; }

    /// Throws EvalError outside the domain of f (or on a non-finite result).
    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double derivative(double x) const;

    /// max |f'(x)| over [lo, hi]. Every built-in f' is monotone, so the
    /// maximum sits at an endpoint. Throws UnboundedDerivative when f'
    /// diverges at lo = 0.
    [[nodiscard]] double max_abs_derivative(double lo, double hi) const;

    /// CLI spelling: logdet, partition:<beta>, entropy, trace, power:<p>.
    [[nodiscard]] std::string name() const;

    friend bool operator==(const SpectralFunction&, const SpectralFunction&) = default;
};

SpectralFunction parse_function(std::string_view spelling);

}  // namespace qss
