#include "qss/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qss/error.hpp"
#include "qss/error_budget.hpp"
#include "qss/sampler.hpp"

namespace qss {
namespace {

constexpr int kZeroOutcomeStep = 3;
constexpr int kMaxRoundsPerPass = 10000;

bool any_zero(const std::vector<SampleRecord>& records) {
    return std::any_of(records.begin(), records.end(), [](const SampleRecord& r) { return r.outcome == 0; });
}

// Smallest m passing the sufficiency check for (kappa, |mu|, epsilon).
bool m_sufficient(int m, double kappa, double abs_mu, double epsilon) {
    const double x = 2.0 * kappa * std::ldexp(1.0, -m);
    if (x >= 1.0) {
        return false;
    }
    if (static_cast<double>(m) < std::log2(4.0 * kappa / (epsilon * abs_mu))) {
        return false;
    }
    return x / (abs_mu * (1.0 - x)) <= epsilon / 2.0;
}

}  // namespace

void AdaptiveConfig::validate() const {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::InvalidConfig, "epsilon must lie in (0, 1)");
    require(seed_m >= 2 && seed_m <= kMaxPointerQubits, ErrorCode::InvalidConfig, "seed m must lie in [2, 40]");
    require(seed_n >= kMinSamples, ErrorCode::InvalidConfig, "seed N must be at least 16");
    require(max_restarts >= 1, ErrorCode::InvalidConfig, "max_restarts must be at least 1");
    require(growth_factor > 1.0, ErrorCode::InvalidConfig, "growth factor must exceed 1");
    require(kappa_safety >= 1.0, ErrorCode::InvalidConfig, "kappa safety factor must be at least 1");
}

std::string_view to_string(Decision decision) noexcept {
    switch (decision) {
        case Decision::Accept: return "accept";
        case Decision::GrowM: return "grow_m";
        case Decision::GrowN: return "grow_N";
        case Decision::Restart: return "restart";
    }
    return "unknown";
}

AdaptiveResult run_adaptive(const ScaledMatrix& matrix, const AdaptiveConfig& config, QpeMode mode) {
    return run_adaptive(exact_spectrum(matrix), matrix.log_det_correction(), config, mode);
}

AdaptiveResult run_adaptive(const SpectrumInfo& spectrum, double log_det_correction, const AdaptiveConfig& config,
                            QpeMode mode) {
    config.validate();
    AdaptiveResult result;
    int m = config.seed_m;
    const BatchOptions batch{config.threads};

    auto begin_restart = [&](int new_m) {
        if (result.restarts >= config.max_restarts) {
            fail(ErrorCode::RestartsExhausted,
                 "target not certified within " + std::to_string(config.max_restarts) + " restarts");
        }
        require(new_m <= kMaxPointerQubits, ErrorCode::RestartsExhausted,
                "required pointer register exceeds 40 qubits");
        ++result.restarts;
        m = new_m;
    };

    for (int pass = 0;; ++pass) {
        const QpeConfig qpe{m, mode};
        const SpectrumSampler sampler(spectrum, qpe);
        const std::uint64_t pass_seed = derive_seed(config.seed, static_cast<std::uint64_t>(pass));
        SampleString samples;
        samples.n = spectrum.dim();
        samples.seed = pass_seed;
        samples.mode = mode;
        samples.records = draw_records(sampler, pass_seed, 0, config.seed_n, batch);

        bool restarted = false;
        for (int round = 0; round < kMaxRoundsPerPass && !restarted; ++round) {
            AdaptiveRound rec;
            rec.pass = pass;
            rec.m = m;
            rec.n_samples = samples.size();

            if (any_zero(samples.records)) {
                rec.decision = Decision::GrowM;
                result.trace.rounds.push_back(rec);
                begin_restart(std::min(m + kZeroOutcomeStep, kMaxPointerQubits + 1));
                restarted = true;
                break;
            }

            const SampleStats stats = sample_stats(samples);
            rec.mu_hat = stats.mu_hat;
            rec.delta_hat = stats.delta_hat;
            rec.kappa_hat = stats.kappa_hat;
            const double abs_mu = std::abs(stats.mu_hat);
            const double kappa_check = config.kappa_safety * stats.kappa_hat;

            if (!m_sufficient(m, kappa_check, abs_mu, config.epsilon)) {
                rec.decision = Decision::Restart;
                result.trace.rounds.push_back(rec);
                int new_m = std::max(m + 1, static_cast<int>(std::ceil(std::log2(
                                                4.0 * kappa_check / (config.epsilon * abs_mu)))) + 1);
                while (new_m <= kMaxPointerQubits && !m_sufficient(new_m, kappa_check, abs_mu, config.epsilon)) {
                    ++new_m;
                }
                begin_restart(new_m);
                restarted = true;
                break;
            }

            const std::uint64_t required =
                choose_parameters(stats.mu_hat, stats.delta_hat, kappa_check, config.epsilon).n_mc;
            rec.n_required = required;
            const std::uint64_t have = samples.size();
            if (have < required) {
                rec.decision = Decision::GrowN;
                result.trace.rounds.push_back(rec);
                const auto grown = static_cast<std::uint64_t>(std::ceil(static_cast<double>(have) * config.growth_factor));
                const std::uint64_t next = std::min(std::max(grown, have + 1), required);
                std::vector<SampleRecord> more = draw_records(sampler, pass_seed, have, next, batch);
                samples.records.insert(samples.records.end(), more.begin(), more.end());
                continue;
            }

            rec.decision = Decision::Accept;
            result.trace.rounds.push_back(rec);
            const ErrorBudget budget = logdet_budget(stats.mu_hat, stats.delta_hat, stats.kappa_hat, m, have,
                                                     spectrum.dim(), config.epsilon);
            result.report = make_estimate_report(samples, SpectralFunction::log(), spectrum.dim(), budget);
            result.alpha_original = result.report.estimate + log_det_correction;
            result.skewed_toward_smaller = mode == QpeMode::Floor;
            return result;
        }
        if (!restarted) {
            fail(ErrorCode::RestartsExhausted, "sample growth did not settle");
        }
    }
}

}  // namespace qss
