#include "qss/error_budget.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qss/error.hpp"
#include "qss/qpe.hpp"

namespace qss {
namespace {

void check_samples(std::uint64_t samples) {
    require(samples >= 1, ErrorCode::InvalidN, "sample count N must be at least 1");
}

void check_m(int m) {
    require(m >= 1 && m <= kMaxPointerQubits, ErrorCode::InvalidConfig,
            "pointer qubits m = " + std::to_string(m) + " outside [1, 40]");
}

void check_kappa(double kappa) {
    require(kappa >= 1.0 && std::isfinite(kappa), ErrorCode::DomainError, "kappa must be a finite value >= 1");
}

void check_mu(double mu) {
    require(mu != 0.0 && std::isfinite(mu), ErrorCode::DomainError, "mu must be finite and nonzero");
}

void check_delta(double delta) {
    require(delta >= 0.0 && std::isfinite(delta), ErrorCode::DomainError, "Delta must be finite and >= 0");
}

// 2 kappa 2^-m, required < 1.
double regime_ratio(double kappa, int m) {
    const double x = 2.0 * kappa * std::ldexp(1.0, -m);
    require(x < 1.0, ErrorCode::RegimeError,
            "2 kappa 2^-m = " + std::to_string(x) + " >= 1; increase m (grid spacing exceeds lambda_min)");
    return x;
}

}  // namespace

double mc_error(double delta, std::uint64_t samples, std::size_t n) {
    check_samples(samples);
    check_delta(delta);
    return static_cast<double>(n) * delta / std::sqrt(static_cast<double>(samples));
}

QpeErrorBounds qpe_error_bounds(double kappa, int m, std::size_t n) {
    check_kappa(kappa);
    check_m(m);
    const double x = regime_ratio(kappa, m);
    const double nd = static_cast<double>(n);
    return {nd * kappa * std::ldexp(1.0, 1 - m), nd * x / (1.0 - x)};
}

RelativeErrorForms total_relative_error(double mu, double delta, double kappa, int m, std::uint64_t samples) {
    check_mu(mu);
    check_delta(delta);
    check_kappa(kappa);
    check_m(m);
    check_samples(samples);
    const double x = regime_ratio(kappa, m);
    const double stat = delta / std::sqrt(static_cast<double>(samples));
    const double abs_mu = std::abs(mu);
    return {(x + stat) / abs_mu, (x / (1.0 - x) + stat) / abs_mu};
}

Parameters choose_parameters(double mu, double delta, double kappa, double epsilon) {
    check_mu(mu);
    check_delta(delta);
    check_kappa(kappa);
    require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::DomainError, "epsilon must be positive");
    const double abs_mu = std::abs(mu);

    const double n_real = std::ceil(std::pow(2.0 * delta / (abs_mu * epsilon), 2));
    require(n_real < 0x1.0p62, ErrorCode::TooLarge, "required sample count overflows");
    Parameters p;
    p.n_mc = std::max(kMinSamples, static_cast<std::uint64_t>(n_real));
    // ceil() of a rounded product can land one short; settle on the exact condition.
    while (delta / (abs_mu * std::sqrt(static_cast<double>(p.n_mc))) > epsilon / 2.0) {
        ++p.n_mc;
    }

    const double grid = 2.0 * kappa * (2.0 / (abs_mu * epsilon) + 1.0);
    p.m = std::max(1, static_cast<int>(std::ceil(std::log2(grid))));
    auto qpe_term = [&](int m) {
        const double x = 2.0 * kappa * std::ldexp(1.0, -m);
        return x < 1.0 ? x / (abs_mu * (1.0 - x)) : INFINITY;
    };
    while (qpe_term(p.m) > epsilon / 2.0) {
        ++p.m;
    }
    require(p.m <= kMaxPointerQubits, ErrorCode::TooLarge,
            "required pointer register m = " + std::to_string(p.m) + " exceeds 40 qubits");
    return p;
}

Parameters choose_parameters_generic(const SpectralFunction& f, double lambda_min, double lambda_max, double mu_f,
                                     double delta_f, double epsilon) {
    check_mu(mu_f);
    check_delta(delta_f);
    require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::DomainError, "epsilon must be positive");
    const double abs_mu = std::abs(mu_f);
    const double slope = f.max_abs_derivative(lambda_min, lambda_max);

    const double n_real = std::ceil(std::pow(2.0 * delta_f / (abs_mu * epsilon), 2));
    require(n_real < 0x1.0p62, ErrorCode::TooLarge, "required sample count overflows");
    Parameters p;
    p.n_mc = std::max(kMinSamples, static_cast<std::uint64_t>(n_real));
    while (delta_f / (abs_mu * std::sqrt(static_cast<double>(p.n_mc))) > epsilon / 2.0) {
        ++p.n_mc;
    }
    p.m = 1;
    while (p.m <= kMaxPointerQubits && slope * std::ldexp(1.0, -p.m) / abs_mu > epsilon / 2.0) {
        ++p.m;
    }
    require(p.m <= kMaxPointerQubits, ErrorCode::TooLarge, "required pointer register exceeds 40 qubits");
    return p;
}

double chebyshev_bound(double delta_alpha_err, double gamma) {
    require(gamma > 0.0, ErrorCode::InvalidGamma, "gamma must be positive");
    require(delta_alpha_err >= 0.0, ErrorCode::DomainError, "error must be non-negative");
    const double r = delta_alpha_err / gamma;
    return std::min(1.0, r * r);
}

double generic_f_error(const SpectralFunction& f, double lambda_min, double lambda_max, int m, std::uint64_t samples,
                       double mu_f, double delta_f) {
    check_m(m);
    check_samples(samples);
    check_mu(mu_f);
    check_delta(delta_f);
    const double slope = f.max_abs_derivative(lambda_min, lambda_max);
    return (slope * std::ldexp(1.0, -m) + delta_f / std::sqrt(static_cast<double>(samples))) / std::abs(mu_f);
}

ErrorBudget logdet_budget(double mu, double delta, double kappa, int m, std::uint64_t samples, std::size_t n,
                          std::optional<double> epsilon) {
    check_mu(mu);
    ErrorBudget b;
    const QpeErrorBounds q = qpe_error_bounds(kappa, m, n);
    b.delta_alpha_mc = mc_error(delta, samples, n);
    b.delta_alpha_qpe_main = q.main;
    b.delta_alpha_qpe_appendix = q.appendix;
    b.delta_alpha_err = q.appendix + b.delta_alpha_mc;
    b.relative_error_bound = b.delta_alpha_err / (static_cast<double>(n) * std::abs(mu));
    b.epsilon_target = epsilon;
    b.n_mc = samples;
    b.m = m;
    return b;
}

ErrorBudget spectral_budget(const SpectralFunction& f, double lambda_min, double lambda_max, double mu_f,
                            double delta_f, int m, std::uint64_t samples, std::size_t n,
                            std::optional<double> epsilon) {
    if (f.kind == FunctionKind::Log) {
        return logdet_budget(mu_f, delta_f, lambda_max / lambda_min, m, samples, n, epsilon);
    }
    check_m(m);
    check_mu(mu_f);
    const double nd = static_cast<double>(n);
    ErrorBudget b;
    b.delta_alpha_mc = mc_error(delta_f, samples, n);
    b.delta_alpha_qpe_main = nd * f.max_abs_derivative(lambda_min, lambda_max) * std::ldexp(1.0, -m);
    b.delta_alpha_qpe_appendix = b.delta_alpha_qpe_main;
    b.delta_alpha_err = b.delta_alpha_qpe_appendix + b.delta_alpha_mc;
    b.relative_error_bound = b.delta_alpha_err / (nd * std::abs(mu_f));
    b.epsilon_target = epsilon;
    b.n_mc = samples;
    b.m = m;
    return b;
}

}  // namespace qss
