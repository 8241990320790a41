#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "qss/error_budget.hpp"
#include "qss/matrix.hpp"
#include "qss/sampler.hpp"
#include "qss/spectral_function.hpp"

namespace qss {

/// (n / N) sum_l log lambda_tilde_l. Throws ZeroOutcome if any readout is 0.
double logdet_estimate(const SampleString& samples, std::size_t n);

/// (n / N) sum_l f(lambda_tilde_l).
double spectral_sum_estimate(const SampleString& samples, const SpectralFunction& f, std::size_t n);

/// Z(beta) with beta in scaled-energy units.
double partition_function_estimate(const SampleString& samples, double beta, std::size_t n);

/// -sum p log p from samples of density-matrix eigenvalues. The samples do
/// not certify that the p_j sum to one.
double entropy_estimate(const SampleString& samples, std::size_t n);

struct SampleStats {
    double mu_hat = 0.0;     // mean of log lambda_tilde
    double delta_hat = 0.0;  // standard deviation, 1/N normalization
    double lambda_min_hat = 0.0;
    double kappa_hat = 1.0;  // max / min lambda_tilde
};

/// Requires N >= 2 (InsufficientSamples) and positive readouts (ZeroOutcome).
SampleStats sample_stats(const SampleString& samples);

/// Mean and 1/N standard deviation of f(lambda_tilde).
struct FunctionStats {
    double mean = 0.0;
    double stddev = 0.0;
};

FunctionStats function_stats(const SampleString& samples, const SpectralFunction& f);

struct EstimateReport {
    std::string function;
    double estimate = 0.0;
    std::size_t n = 0;
    std::uint64_t n_used = 0;
    int m_used = 0;
    double sample_mu_f = 0.0;
    double sample_delta_f = 0.0;
    ErrorBudget error_budget;
    std::uint64_t seed = 0;
    QpeMode mode = QpeMode::FullDistribution;
};

/// Evaluates the estimator and sample statistics of f on the string and
/// attaches the supplied budget.
EstimateReport make_estimate_report(const SampleString& samples, const SpectralFunction& f, std::size_t n,
                                    const ErrorBudget& budget);

namespace verify {

/// The noiseless estimator on the same draws: (n / N) sum_l f(lambda_{j_l}),
/// reading the hidden eigen indices. Verification only.
double noiseless_estimate(const SampleString& samples, const SpectrumInfo& spectrum, const SpectralFunction& f);

/// (n / N) sum_l |log lambda_tilde_l - log lambda_{j_l}|, the pathwise
/// phase-estimation deviation.
double pathwise_log_deviation(const SampleString& samples, const SpectrumInfo& spectrum);

}  // namespace verify

}  // namespace qss
