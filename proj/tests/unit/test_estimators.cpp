#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "oracles.hpp"
#include "qss/error.hpp"
#include "qss/estimators.hpp"

using namespace qss;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::IoError;
}

// A string with the given readouts on an m-qubit grid.
SampleString readouts(const std::vector<std::uint64_t>& ks, int m, std::size_t n) {
    SampleString s;
    s.n = n;
    s.mode = QpeMode::Floor;
    for (std::size_t l = 0; l < ks.size(); ++l) {
        s.records.push_back({l % n, ks[l], std::ldexp(static_cast<double>(ks[l]), -m), m});
    }
    return s;
}

// One record per eigenvalue: the exhaustive expectation over uniform j of a
// single-sample estimate, when readouts are exact.
SampleString exhaustive(const SpectrumInfo& sp, int m) {
    SampleString s;
    s.n = sp.dim();
    for (std::size_t j = 0; j < sp.dim(); ++j) {
        const double k = std::ldexp(sp.eigenvalues[j], m);
        s.records.push_back({j, static_cast<std::uint64_t>(k), sp.eigenvalues[j], m});
    }
    return s;
}

}  // namespace

TEST(LogDet, ConstantSamples) {
    const auto s = readouts(std::vector<std::uint64_t>(10, 1), 1, 4);
    EXPECT_DOUBLE_EQ(logdet_estimate(s, 4), 4 * std::log(0.5));
    EXPECT_NEAR(logdet_estimate(s, 4), -2.7726, 5e-5);
}

TEST(LogDet, ExhaustiveExpectationEqualsAlpha) {
    std::mt19937_64 rng(1);
    for (std::size_t n = 1; n <= 16; ++n) {
        std::vector<double> ev(n);
        for (double& v : ev) {
            v = static_cast<double>(1 + rng() % 512) / 1024.0;  // dyadic, m = 10
        }
        const auto sp = SpectrumInfo::from_eigenvalues(ev);
        const auto s = exhaustive(sp, 10);
        double direct = 0.0;
        for (double v : ev) {
            direct += std::log(v);
        }
        EXPECT_NEAR(logdet_estimate(s, n), direct, 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST(LogDet, HalfAndEighthConverges) {
    const auto sp = SpectrumInfo::from_eigenvalues({0.5, 0.125});
    const auto s = draw_batch(sp, {3, QpeMode::Floor}, 200000, 8);
    // sd of the estimate: n Delta / sqrt(N) = 2 * 0.693 / 447
    EXPECT_NEAR(logdet_estimate(s, 2), -2.7726, 4 * 2 * 0.6931 / std::sqrt(200000.0));
    EXPECT_NEAR(logdet_estimate(exhaustive(sp, 3), 2), sp.alpha, 1e-15);
}

TEST(LogDet, ZeroOutcomeAborts) {
    const auto s = readouts({3, 0, 2}, 3, 2);
    EXPECT_EQ(code_of([&] { logdet_estimate(s, 2); }), ErrorCode::ZeroOutcome);
    EXPECT_EQ(code_of([&] { sample_stats(s); }), ErrorCode::ZeroOutcome);
    EXPECT_EQ(code_of([] { logdet_estimate(SampleString{}, 2); }), ErrorCode::InvalidN);
}

TEST(LogDet, PermutationInvariantAndLinearInN) {
    std::mt19937_64 rng(2);
    std::vector<std::uint64_t> ks(257);
    for (auto& k : ks) {
        k = 1 + rng() % 511;
    }
    const auto s = readouts(ks, 10, 4);
    const double a = logdet_estimate(s, 4);
    auto shuffled = ks;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_NEAR(logdet_estimate(readouts(shuffled, 10, 4), 4), a, 1e-12 * std::abs(a));
    EXPECT_DOUBLE_EQ(logdet_estimate(s, 12), 3.0 * a);
}

TEST(SpectralSum, TraceOfTwoEigenvalues) {
    const auto sp = SpectrumInfo::from_eigenvalues({0.5, 0.25});
    EXPECT_DOUBLE_EQ(spectral_sum_estimate(exhaustive(sp, 2), SpectralFunction::identity(), 2), 0.75);
    const auto s = draw_batch(sp, {2, QpeMode::FullDistribution}, 100000, 3);
    EXPECT_NEAR(spectral_sum_estimate(s, SpectralFunction::identity(), 2), 0.75, 4 * 0.25 / std::sqrt(1e5));
}

TEST(SpectralSum, PartitionFunction) {
    const auto sp = SpectrumInfo::from_eigenvalues({0.1, 0.3});
    const auto s = draw_batch(sp, {30, QpeMode::Nearest}, 100000, 11);
    const double z = partition_function_estimate(s, 1.0, 2);
    const double exact = std::exp(-0.1) + std::exp(-0.3);
    EXPECT_NEAR(exact, 1.6456, 1e-4);
    EXPECT_NEAR(z, exact, 0.005 * exact);
    // beta = 0 gives n whatever was drawn
    EXPECT_DOUBLE_EQ(partition_function_estimate(s, 0.0, 2), 2.0);
    const auto single = draw_batch(SpectrumInfo::from_eigenvalues({0.5}), {4, QpeMode::Floor}, 5, 1);
    EXPECT_NEAR(partition_function_estimate(single, 2.0, 1), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(partition_function_estimate(single, 2.0, 1), 0.3679, 5e-5);
}

TEST(SpectralSum, EntropyOfMaximallyMixedStates) {
    for (std::size_t d : {2u, 4u, 8u, 16u}) {
        const auto sp = SpectrumInfo::from_eigenvalues(std::vector<double>(d, 1.0 / static_cast<double>(d)));
        const int m = static_cast<int>(std::log2(static_cast<double>(d)));
        for (QpeMode mode : {QpeMode::Floor, QpeMode::Nearest, QpeMode::FullDistribution}) {
            const auto s = draw_batch(sp, {m, mode}, 1000, d);
            EXPECT_NEAR(entropy_estimate(s, d), std::log(static_cast<double>(d)), 1e-12) << d;
        }
    }
    const auto s = draw_batch(SpectrumInfo::from_eigenvalues({0.5, 0.5}), {1, QpeMode::Floor}, 7, 0);
    EXPECT_NEAR(entropy_estimate(s, 2), 0.6931, 5e-5);
}

TEST(SpectralSum, EntropyOfSkewedState) {
    const std::vector<double> p = {0.5, 0.375, 0.125};
    double direct = 0.0;
    for (double v : p) {
        direct -= v * std::log(v);
    }
    const auto sp = SpectrumInfo::from_eigenvalues(p);
    EXPECT_NEAR(entropy_estimate(exhaustive(sp, 3), 3), direct, 1e-15);
    const auto s = draw_batch(sp, {3, QpeMode::Floor}, 200000, 5);
    EXPECT_NEAR(entropy_estimate(s, 3), direct, 0.005);
}

TEST(SpectralSum, DegenerateProbabilityIsOutOfDomain) {
    // p = 1 is outside the sampler's (0, 1/2] range
    EXPECT_EQ(code_of([] { draw_batch(SpectrumInfo::from_eigenvalues({1.0, 1e-9}), {3, QpeMode::Floor}, 5, 0); }),
              ErrorCode::DomainError);
}

TEST(SpectralSum, EvalErrorOnZeroReadout) {
    const auto s = readouts({0, 1}, 2, 2);
    // 0 log 0 = 0 by continuity
    EXPECT_NEAR(spectral_sum_estimate(s, SpectralFunction::neg_x_log_x(), 2), -0.25 * std::log(0.25), 1e-15);
    EXPECT_EQ(code_of([&] { spectral_sum_estimate(s, SpectralFunction::power(-1.0), 2); }), ErrorCode::EvalError);
    EXPECT_NO_THROW(spectral_sum_estimate(s, SpectralFunction::identity(), 2));
}

TEST(SampleStats, ConstantSamples) {
    const auto st = sample_stats(readouts(std::vector<std::uint64_t>(8, 1), 1, 1));
    EXPECT_NEAR(st.mu_hat, -0.6931, 5e-5);
    EXPECT_DOUBLE_EQ(st.delta_hat, 0.0);
    EXPECT_DOUBLE_EQ(st.kappa_hat, 1.0);
    EXPECT_DOUBLE_EQ(st.lambda_min_hat, 0.5);
}

TEST(SampleStats, TwoPointSamples) {
    const auto st = sample_stats(readouts({4, 1, 4, 1, 4, 1}, 3, 2));
    EXPECT_NEAR(st.mu_hat, -1.3863, 5e-5);
    // two equally weighted points: the 1/N standard deviation is half the gap
    EXPECT_NEAR(st.delta_hat, (std::log(0.5) - std::log(0.125)) / 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(st.kappa_hat, 4.0);
    EXPECT_DOUBLE_EQ(st.lambda_min_hat, 0.125);
}

TEST(SampleStats, NeedsTwoSamples) {
    EXPECT_EQ(code_of([] { sample_stats(readouts({1}, 1, 1)); }), ErrorCode::InsufficientSamples);
}

TEST(Report, EstimateRecomputableFromString) {
    const auto sp = SpectrumInfo::from_eigenvalues({0.5, 0.3, 0.2, 0.11});
    const auto s = draw_batch(sp, {12, QpeMode::Floor}, 1000, 44);
    const auto rep = make_estimate_report(s, SpectralFunction::log(), 4, ErrorBudget{});
    double sum = 0.0;
    for (const auto& r : s.records) {
        sum += std::log(static_cast<double>(r.outcome) / 4096.0);
    }
    EXPECT_NEAR(rep.estimate, 4.0 * sum / 1000.0, 1e-12);
    EXPECT_EQ(rep.n_used, 1000u);
    EXPECT_EQ(rep.m_used, 12);
    EXPECT_EQ(rep.seed, 44u);
    EXPECT_EQ(rep.mode, QpeMode::Floor);
    EXPECT_EQ(rep.function, "logdet");
    const auto st = sample_stats(s);
    EXPECT_DOUBLE_EQ(rep.sample_mu_f, st.mu_hat);
    EXPECT_DOUBLE_EQ(rep.sample_delta_f, st.delta_hat);
}

TEST(Noiseless, RmseMatchesStatisticalFormula) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.02, 0.5);
    std::vector<double> ev(16);
    for (double& v : ev) {
        v = u(rng);
    }
    const auto sp = SpectrumInfo::from_eigenvalues(ev);
    constexpr std::uint64_t kN = 200;
    constexpr int kRuns = 500;
    double sq = 0.0;
    for (int r = 0; r < kRuns; ++r) {
        const auto s = draw_batch(sp, {8, QpeMode::Floor}, kN, 1000 + r);
        const double e = verify::noiseless_estimate(s, sp, SpectralFunction::log()) - sp.alpha;
        sq += e * e;
    }
    const double rmse = std::sqrt(sq / kRuns);
    const double formula = 16.0 * sp.delta / std::sqrt(static_cast<double>(kN));
    EXPECT_LT(rmse / formula, 1.25);
    EXPECT_GT(rmse / formula, 1 / 1.25);
}

TEST(Noiseless, PathwiseDeviationMatchesDefinition) {
    const auto sp = SpectrumInfo::from_eigenvalues({0.5, 0.3, 0.2});
    const auto s = draw_batch(sp, {6, QpeMode::Floor}, 100, 2);
    double sum = 0.0;
    for (const auto& r : s.records) {
        sum += std::abs(std::log(r.lambda_tilde) - std::log(sp.eigenvalues[r.eigen_index]));
    }
    EXPECT_NEAR(verify::pathwise_log_deviation(s, sp), 3.0 * sum / 100.0, 1e-13);
}

TEST(Functions, NamesRoundTrip) {
    for (const char* name : {"logdet", "entropy", "trace", "partition:1.5", "power:0.5"}) {
        EXPECT_EQ(parse_function(name).name(), name);
    }
    EXPECT_EQ(parse_function("partition:2"), SpectralFunction::exp_neg_beta(2.0));
    EXPECT_THROW(parse_function("partition:"), Error);
    EXPECT_THROW(parse_function("cosh"), Error);
}

TEST(Functions, DerivativesMatchFiniteDifferences) {
    const std::vector<SpectralFunction> fs = {SpectralFunction::log(), SpectralFunction::exp_neg_beta(1.7),
                                              SpectralFunction::neg_x_log_x(), SpectralFunction::identity(),
                                              SpectralFunction::power(0.5), SpectralFunction::power(3.0)};
    for (const auto& f : fs) {
        for (double x : {0.05, 0.13, 0.29, 0.45}) {
            const double h = 1e-6;
            const double fd = (f.value(x + h) - f.value(x - h)) / (2 * h);
            EXPECT_NEAR(f.derivative(x), fd, 1e-6 * std::max(1.0, std::abs(fd))) << f.name() << " " << x;
        }
    }
}
