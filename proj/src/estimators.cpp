#include "qss/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qss/error.hpp"
#include "qss/numeric.hpp"

namespace qss {
namespace {

void check_nonempty(const SampleString& samples) {
    require(!samples.records.empty(), ErrorCode::InvalidN, "empty sample string");
}

void check_no_zero(const SampleString& samples) {
    for (std::size_t l = 0; l < samples.records.size(); ++l) {
        require(samples.records[l].outcome != 0, ErrorCode::ZeroOutcome,
                "sample " + std::to_string(l) + " read k = 0; m too small or a leakage tail was hit");
    }
}

double mean_of(const SampleString& samples, const SpectralFunction& f) {
    std::vector<double> values(samples.records.size());
    std::transform(samples.records.begin(), samples.records.end(), values.begin(),
                   [&](const SampleRecord& r) { return f.value(r.lambda_tilde); });
    return pairwise_sum(values) / static_cast<double>(values.size());
}

}  // namespace

double logdet_estimate(const SampleString& samples, std::size_t n) {
    check_nonempty(samples);
    check_no_zero(samples);
    return static_cast<double>(n) * mean_of(samples, SpectralFunction::log());
}

double spectral_sum_estimate(const SampleString& samples, const SpectralFunction& f, std::size_t n) {
    if (f.kind == FunctionKind::Log) {
        return logdet_estimate(samples, n);
    }
    check_nonempty(samples);
    return static_cast<double>(n) * mean_of(samples, f);
}

double partition_function_estimate(const SampleString& samples, double beta, std::size_t n) {
    return spectral_sum_estimate(samples, SpectralFunction::exp_neg_beta(beta), n);
}

double entropy_estimate(const SampleString& samples, std::size_t n) {
    return spectral_sum_estimate(samples, SpectralFunction::neg_x_log_x(), n);
}

FunctionStats function_stats(const SampleString& samples, const SpectralFunction& f) {
    check_nonempty(samples);
    if (f.kind == FunctionKind::Log) {
        check_no_zero(samples);
    }
    std::vector<double> values(samples.records.size());
    std::transform(samples.records.begin(), samples.records.end(), values.begin(),
                   [&](const SampleRecord& r) { return f.value(r.lambda_tilde); });
    const double count = static_cast<double>(values.size());
    FunctionStats s;
    s.mean = pairwise_sum(values) / count;
    for (double& v : values) {
        v = (v - s.mean) * (v - s.mean);
    }
    s.stddev = std::sqrt(pairwise_sum(values) / count);
    return s;
}

SampleStats sample_stats(const SampleString& samples) {
    require(samples.records.size() >= 2, ErrorCode::InsufficientSamples, "sample statistics need N >= 2");
    const FunctionStats logs = function_stats(samples, SpectralFunction::log());
    const auto [lo, hi] = std::minmax_element(samples.records.begin(), samples.records.end(),
                                              [](const SampleRecord& a, const SampleRecord& b) {
                                                  return a.lambda_tilde < b.lambda_tilde;
                                              });
    SampleStats s;
    s.mu_hat = logs.mean;
    s.delta_hat = logs.stddev;
    s.lambda_min_hat = lo->lambda_tilde;
    s.kappa_hat = hi->lambda_tilde / lo->lambda_tilde;
    return s;
}

EstimateReport make_estimate_report(const SampleString& samples, const SpectralFunction& f, std::size_t n,
                                    const ErrorBudget& budget) {
    EstimateReport r;
    r.function = f.name();
    r.estimate = spectral_sum_estimate(samples, f, n);
    const FunctionStats stats = function_stats(samples, f);
    r.sample_mu_f = stats.mean;
    r.sample_delta_f = stats.stddev;
    r.n = n;
    r.n_used = samples.records.size();
    r.m_used = samples.records.front().m_used;
    r.error_budget = budget;
    r.seed = samples.seed;
    r.mode = samples.mode;
    return r;
}

namespace verify {

double noiseless_estimate(const SampleString& samples, const SpectrumInfo& spectrum, const SpectralFunction& f) {
    check_nonempty(samples);
    std::vector<double> values(samples.records.size());
    std::transform(samples.records.begin(), samples.records.end(), values.begin(),
                   [&](const SampleRecord& r) { return f.value(spectrum.eigenvalues.at(r.eigen_index)); });
    return static_cast<double>(spectrum.dim()) * pairwise_sum(values) / static_cast<double>(values.size());
}

double pathwise_log_deviation(const SampleString& samples, const SpectrumInfo& spectrum) {
    check_nonempty(samples);
    check_no_zero(samples);
    std::vector<double> values(samples.records.size());
    std::transform(samples.records.begin(), samples.records.end(), values.begin(), [&](const SampleRecord& r) {
        return std::abs(std::log(r.lambda_tilde) - std::log(spectrum.eigenvalues.at(r.eigen_index)));
    });
    return static_cast<double>(spectrum.dim()) * pairwise_sum(values) / static_cast<double>(values.size());
}

}  // namespace verify

}  // namespace qss
