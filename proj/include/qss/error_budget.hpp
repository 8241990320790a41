#pragma once

// Error formulas and parameter selection for spectral-sampling estimates.
//
// Notation: n matrix dimension, N Monte Carlo samples, m pointer qubits with
// grid spacing 2^-m, kappa condition-number bound (scaled lambda_min =
// 1/(2 kappa)), mu and Delta mean and standard deviation of log lambda.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "qss/spectral_function.hpp"

namespace qss {

struct ErrorBudget {
    double delta_alpha_mc = 0.0;            // n Delta / sqrt(N)
    double delta_alpha_qpe_main = 0.0;      // n kappa 2^(1-m)
    double delta_alpha_qpe_appendix = 0.0;  // 2 n kappa 2^-m / (1 - 2 kappa 2^-m)
    double delta_alpha_err = 0.0;           // appendix + mc
    double relative_error_bound = 0.0;      // delta_alpha_err / (n |mu|)
    std::optional<double> epsilon_target;
    std::uint64_t n_mc = 0;
    int m = 0;
};

/// Statistical RMSE n Delta / sqrt(N).
double mc_error(double delta, std::uint64_t samples, std::size_t n);

struct QpeErrorBounds {
    double main = 0.0;
    double appendix = 0.0;
};

/// Throws RegimeError unless 2 kappa 2^-m < 1.
QpeErrorBounds qpe_error_bounds(double kappa, int m, std::size_t n);

struct RelativeErrorForms {
    double main_form = 0.0;      // (2 kappa / 2^m + Delta / sqrt(N)) / |mu|
    double appendix_form = 0.0;  // (2 kappa 2^-m / (1 - 2 kappa 2^-m) + Delta / sqrt(N)) / |mu|
};

RelativeErrorForms total_relative_error(double mu, double delta, double kappa, int m, std::uint64_t samples);

struct Parameters {
    std::uint64_t n_mc = 0;
    int m = 0;
};

/// Smallest N (at least 16) and m that split the target evenly between the
/// statistical and phase-estimation terms of the appendix form.
Parameters choose_parameters(double mu, double delta, double kappa, double epsilon);

inline constexpr std::uint64_t kMinSamples = 16;

/// Even split of epsilon for a generic f: Delta_f / (|mu_f| sqrt N) <= eps/2
/// and |f'|_max 2^-m / |mu_f| <= eps/2.
Parameters choose_parameters_generic(const SpectralFunction& f, double lambda_min, double lambda_max, double mu_f,
                                     double delta_f, double epsilon);

/// min(1, (err / gamma)^2).
double chebyshev_bound(double delta_alpha_err, double gamma);

/// (|f'|_max / 2^m + Delta_f / sqrt(N)) / |mu_f| with |f'|_max over
/// [lambda_min, lambda_max].
double generic_f_error(const SpectralFunction& f, double lambda_min, double lambda_max, int m, std::uint64_t samples,
                       double mu_f, double delta_f);

/// Full log-determinant budget at (mu, Delta, kappa, m, N).
ErrorBudget logdet_budget(double mu, double delta, double kappa, int m, std::uint64_t samples, std::size_t n,
                          std::optional<double> epsilon = std::nullopt);

/// Budget for a generic f. The phase-estimation term n |f'|_max 2^-m fills
/// both QPE fields (there is no separate appendix form for generic f).
ErrorBudget spectral_budget(const SpectralFunction& f, double lambda_min, double lambda_max, double mu_f,
                            double delta_f, int m, std::uint64_t samples, std::size_t n,
                            std::optional<double> epsilon = std::nullopt);

}  // namespace qss
