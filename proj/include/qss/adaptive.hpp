#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qss/estimators.hpp"
#include "qss/matrix.hpp"
#include "qss/qpe.hpp"

namespace qss {

struct AdaptiveConfig {
    double epsilon = 0.1;
    int seed_m = 4;
    std::uint64_t seed_n = 16;
    int max_restarts = 8;
    double growth_factor = 2.0;
    std::uint64_t seed = 0;
    /// Multiplies the sampled kappa in the m-sufficiency check; the smallest
    /// sampled eigenvalue never undershoots lambda_min, so kappa_hat is biased low.
    double kappa_safety = 2.0;
    unsigned threads = 1;

    /// epsilon in (0, 1), seed_m >= 2, seed_n >= 16, max_restarts >= 1,
    /// growth_factor > 1.
    void validate() const;
};

enum class Decision {
    Accept,
    GrowM,    // a readout hit k = 0; restart the pass with a finer grid
    GrowN,    // more samples needed at the current m
    Restart,  // m too small for the sampled kappa and mu; restart the pass
};

std::string_view to_string(Decision decision) noexcept;

struct AdaptiveRound {
    int pass = 0;
    int m = 0;
    std::uint64_t n_samples = 0;
    std::optional<double> mu_hat;
    std::optional<double> delta_hat;
    std::optional<double> kappa_hat;
    std::optional<std::uint64_t> n_required;
    Decision decision = Decision::Accept;
};

struct AdaptiveTrace {
    std::vector<AdaptiveRound> rounds;
};

struct AdaptiveResult {
    EstimateReport report;  // on the scaled matrix
    AdaptiveTrace trace;
    double alpha_original = 0.0;  // report.estimate + log-det correction
    int restarts = 0;
    /// Floor readouts truncate every eigenvalue, so the error is one-sided.
    bool skewed_toward_smaller = false;
};

/// Seeds m and N, samples, estimates (mu, Delta, kappa) from the readouts,
/// restarts from scratch with a larger m when the grid is too coarse, and
/// grows N geometrically until the target relative error is certified.
/// Throws RestartsExhausted when more than max_restarts restarts are needed.
AdaptiveResult run_adaptive(const ScaledMatrix& matrix, const AdaptiveConfig& config, QpeMode mode);

/// Same loop on an already decomposed scaled spectrum.
AdaptiveResult run_adaptive(const SpectrumInfo& spectrum, double log_det_correction, const AdaptiveConfig& config,
                            QpeMode mode);

}  // namespace qss
