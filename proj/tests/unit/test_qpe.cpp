#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qss/error.hpp"
#include "qss/qpe.hpp"

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

// Independent evaluation of the uniform-superposition phase-estimation law
// as |(1/M) sum_x exp(2 pi i x (lambda - k/M))|^2, summed term by term.
double law_by_sum(double lambda, int m, std::uint64_t k) {
    const double grid = std::ldexp(1.0, m);
    std::complex<double> s = 0.0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(x) * (lambda - static_cast<double>(k) / grid);
        s += std::polar(1.0, phase);
    }
    return std::norm(s / grid);
}

// Closed form with the distance to the bin taken in grid units, usable at
// large m where the direct sum is out of reach.
double law_closed(double lambda, int m, std::uint64_t k) {
    const double grid = std::ldexp(1.0, m);
    const double d = std::ldexp(lambda, m) - static_cast<double>(k);
    if (d == 0.0) {
        return 1.0;
    }
    const double num = std::sin(std::numbers::pi * d);
    const double den = grid * std::sin(std::numbers::pi * d / grid);
    return (num * num) / (den * den);
}

// Diagonal matrix whose entries already lie in (0, 1/2] with maximum 1/2, so
// the rescale is the identity.
ScaledMatrix scaled_diagonal(const std::vector<double>& values) {
    return rescale(test::diagonal(values), 0.5);
}

}  // namespace

TEST(Distribution, DyadicPhaseIsPointMass) {
    for (QpeMode mode : {QpeMode::Floor, QpeMode::Nearest, QpeMode::FullDistribution}) {
        const auto d = outcome_distribution(0.25, {2, mode});
        EXPECT_NEAR(d.probability(1), 1.0, 1e-15) << to_string(mode);
        EXPECT_NEAR(d.total(), 1.0, 1e-15);
    }
}

TEST(Distribution, ThreeEighthsTwoQubits) {
    const auto d = outcome_distribution(0.375, {2, QpeMode::FullDistribution});
    EXPECT_NEAR(d.probability(1), 0.4268, 5e-5);
    EXPECT_NEAR(d.probability(2), 0.4268, 5e-5);
    EXPECT_NEAR(d.probability(0), 0.0732, 5e-5);
    EXPECT_NEAR(d.probability(3), 0.0732, 5e-5);
    for (std::uint64_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(d.probability(k), law_by_sum(0.375, 2, k), 1e-14);
    }
    EXPECT_NEAR(outcome_distribution(0.375, {2, QpeMode::Floor}).probability(1), 1.0, 0.0);
    EXPECT_NEAR(outcome_distribution(0.375, {2, QpeMode::Nearest}).probability(2), 1.0, 0.0);
}

TEST(Distribution, MatchesDirectSum) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1e-6, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = u(rng);
        const int m = 1 + trial % 8;
        const auto d = outcome_distribution(lambda, {m, QpeMode::FullDistribution});
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << m); ++k) {
            EXPECT_NEAR(d.probability(k), law_by_sum(lambda, m, k), 1e-12);
        }
    }
}

TEST(Distribution, NormalizationProperty) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (int trial = 0; trial < 1000; ++trial) {
        const double lambda = std::max(u(rng), 1e-9);
        const int m = 1 + static_cast<int>(rng() % 12);
        const auto d = outcome_distribution(lambda, {m, QpeMode::FullDistribution});
        ASSERT_NEAR(d.total(), 1.0, 1e-12) << lambda << " " << m;
        for (const auto& [k, p] : d.probabilities()) {
            ASSERT_GE(p, 0.0);
            ASSERT_LE(p, 1.0);
        }
    }
}

TEST(Distribution, ConcentrationOnAdjacentBins) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (int trial = 0; trial < 500; ++trial) {
        const double lambda = std::max(u(rng), 1e-9);
        const int m = 1 + static_cast<int>(rng() % 14);
        const auto d = outcome_distribution(lambda, {m, QpeMode::FullDistribution});
        const double scaled = std::ldexp(lambda, m);
        const auto lo = static_cast<std::uint64_t>(std::floor(scaled));
        const double mass = d.probability(lo) + d.probability(lo + 1);
        ASSERT_GE(mass, 8.0 / (std::numbers::pi * std::numbers::pi) - 1e-12) << lambda << " " << m;
    }
}

TEST(Distribution, FloorAndNearestStayWithinOneBin) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (int trial = 0; trial < 10000; ++trial) {
        const double lambda = std::max(u(rng), 1e-12);
        const int m = 1 + static_cast<int>(rng() % 40);
        for (QpeMode mode : {QpeMode::Floor, QpeMode::Nearest}) {
            CounterStream s(trial, 0);
            const Outcome o = sample_outcome(lambda, {m, mode}, s);
            ASSERT_LT(std::abs(o.lambda_tilde - lambda), std::ldexp(1.0, -m));
        }
    }
}

TEST(Distribution, NearestRoundsHalfUp) {
    // 2^3 * 0.3125 = 2.5 exactly
    EXPECT_NEAR(outcome_distribution(0.3125, {3, QpeMode::Nearest}).probability(3), 1.0, 0.0);
    EXPECT_NEAR(outcome_distribution(0.3125, {3, QpeMode::Floor}).probability(2), 1.0, 0.0);
}

TEST(Distribution, Errors) {
    EXPECT_EQ(code_of([] { outcome_distribution(0.0, {3, QpeMode::Floor}); }), ErrorCode::DomainError);
    EXPECT_EQ(code_of([] { outcome_distribution(0.51, {3, QpeMode::Floor}); }), ErrorCode::DomainError);
    EXPECT_EQ(code_of([] { outcome_distribution(-0.1, {3, QpeMode::FullDistribution}); }), ErrorCode::DomainError);
    EXPECT_EQ(code_of([] { outcome_distribution(0.3, {0, QpeMode::Floor}); }), ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of([] { outcome_distribution(0.3, {41, QpeMode::Floor}); }), ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of([] { outcome_distribution(0.3, {21, QpeMode::FullDistribution}); }), ErrorCode::TooLarge);
    EXPECT_EQ(code_of([] { parse_mode("exact"); }), ErrorCode::InvalidConfig);
}

TEST(Sampling, ExactRepresentation) {
    for (QpeMode mode : {QpeMode::Floor, QpeMode::Nearest, QpeMode::FullDistribution}) {
        CounterStream s(10, 0);
        for (int i = 0; i < 1000; ++i) {
            const Outcome o = sample_outcome(0.5, {1, mode}, s);
            ASSERT_EQ(o.k, 1u);
            ASSERT_EQ(o.lambda_tilde, 0.5);
        }
    }
}

TEST(Sampling, FloorExample) {
    CounterStream s(0, 0);
    const Outcome o = sample_outcome(0.3, {8, QpeMode::Floor}, s);
    EXPECT_EQ(o.k, 76u);
    EXPECT_EQ(o.lambda_tilde, 0.296875);
}

TEST(Sampling, FullDistributionFrequenciesPerBin) {
    const QpeConfig cfg{4, QpeMode::FullDistribution};
    const auto d = outcome_distribution(0.3, cfg);
    const PointerSampler sampler(0.3, cfg);
    std::vector<double> counts(16, 0.0);
    constexpr int kDraws = 1000000;
    for (int i = 0; i < kDraws; ++i) {
        CounterStream s(2024, static_cast<std::uint64_t>(i));
        ++counts[sampler.sample(s).k];
    }
    for (std::uint64_t k = 0; k < 16; ++k) {
        const double p = d.probability(k);
        const double se = std::sqrt(kDraws * p * (1 - p));
        EXPECT_NEAR(counts[k], kDraws * p, 3.0 * se + 1e-9) << "bin " << k;
    }
}

namespace {

// Chi-squared test of sampled readouts against the analytic law, grouped by
// signed distance from floor(2^m lambda): single bins near the peak, then
// geometric shells, then the remaining mass.
double grouped_chi_squared_pvalue(double lambda, int m, int draws, std::uint64_t seed) {
    const QpeConfig cfg{m, QpeMode::FullDistribution};
    const PointerSampler sampler(lambda, cfg);
    const double grid = std::ldexp(1.0, m);
    const auto center = static_cast<std::int64_t>(std::floor(lambda * grid));
    const auto size = static_cast<std::int64_t>(cfg.grid_size());
    // group edges on the offset i = k - center (circular)
    const std::vector<std::int64_t> edges = {-4096, -256, -16, -3, -2, -1, 0, 1, 2, 3, 4, 17, 257, 4097};
    auto group_of = [&](std::int64_t offset) -> std::size_t {
        for (std::size_t g = 0; g + 1 < edges.size(); ++g) {
            if (offset >= edges[g] && offset < edges[g + 1]) {
                return g;
            }
        }
        return edges.size() - 1;  // everything farther away
    };
    const std::size_t groups = edges.size();
    std::vector<double> expected(groups, 0.0);
    for (std::int64_t off = edges.front(); off < edges.back(); ++off) {
        const std::int64_t k = ((center + off) % size + size) % size;
        if (std::abs(off) >= size / 2 && off != -size / 2) {
            continue;
        }
        expected[group_of(off)] += law_closed(lambda, m, static_cast<std::uint64_t>(k));
    }
    double covered = 0.0;
    for (std::size_t g = 0; g + 1 < groups; ++g) {
        covered += expected[g];
    }
    expected.back() = std::max(0.0, 1.0 - covered);

    std::vector<double> observed(groups, 0.0);
    for (int i = 0; i < draws; ++i) {
        CounterStream s(seed, static_cast<std::uint64_t>(i));
        auto off = static_cast<std::int64_t>(sampler.sample(s).k) - center;
        if (off >= size / 2) off -= size;
        if (off < -size / 2) off += size;
        ++observed[group_of(off)];
    }
    double chi2 = 0.0;
    int dof = -1;
    for (std::size_t g = 0; g < groups; ++g) {
        const double e = expected[g] * draws;
        if (e < 5.0) {
            continue;  // too small to contribute reliably; see also the total below
        }
        chi2 += (observed[g] - e) * (observed[g] - e) / e;
        ++dof;
    }
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, chi2));
}

}  // namespace

TEST(Sampling, GroupedChiSquaredSmallGrid) {
    for (double lambda : {0.3, 0.0123, 0.4999, 1.0 / 3.0}) {
        const double p = grouped_chi_squared_pvalue(lambda, 12, 200000, 77);
        EXPECT_GT(p, 1e-4) << lambda;
    }
}

TEST(Sampling, GroupedChiSquaredLargeGrid) {
    // m = 30 exercises the rejection-sampled tail far beyond the table window
    for (double lambda : {0.3, 0.01234567, 0.4999999, 1.0 / 3.0}) {
        const double p = grouped_chi_squared_pvalue(lambda, 30, 200000, 78);
        EXPECT_GT(p, 1e-4) << lambda;
    }
}

TEST(Sampling, TailMassBeyondWindowMatches) {
    // Fraction of readouts more than 64 bins from the peak against the law.
    const double lambda = 0.2718281828;
    const int m = 24;
    const QpeConfig cfg{m, QpeMode::FullDistribution};
    const PointerSampler sampler(lambda, cfg);
    const auto center = static_cast<std::int64_t>(std::floor(std::ldexp(lambda, m)));
    double inner = 0.0;
    for (std::int64_t off = -64; off <= 64; ++off) {
        inner += law_closed(lambda, m, static_cast<std::uint64_t>(center + off));
    }
    const double tail = 1.0 - inner;
    constexpr int kDraws = 2000000;
    int far = 0;
    for (int i = 0; i < kDraws; ++i) {
        CounterStream s(99, static_cast<std::uint64_t>(i));
        const auto k = static_cast<std::int64_t>(sampler.sample(s).k);
        if (std::abs(k - center) > 64) {
            ++far;
        }
    }
    const double se = std::sqrt(kDraws * tail * (1 - tail));
    EXPECT_NEAR(far, kDraws * tail, 4 * se);
}

TEST(Sampling, Deterministic) {
    const PointerSampler sampler(0.31, {20, QpeMode::FullDistribution});
    for (int i = 0; i < 1000; ++i) {
        CounterStream a(5, static_cast<std::uint64_t>(i));
        CounterStream b(5, static_cast<std::uint64_t>(i));
        ASSERT_EQ(sampler.sample(a).k, sampler.sample(b).k);
    }
}

TEST(Circuit, DyadicPhase) {
    const auto a = scaled_diagonal({0.25, 0.5});
    const auto d = statevector_qpe(a, 0, 2);
    EXPECT_NEAR(d.probability(1), 1.0, 1e-12);
    EXPECT_NEAR(d.total(), 1.0, 1e-12);
}

TEST(Circuit, ThreeEighthsMatchesLaw) {
    const auto a = scaled_diagonal({0.375, 0.5});
    const auto d = statevector_qpe(a, 0, 2);
    const auto law = outcome_distribution(0.375, {2, QpeMode::FullDistribution});
    EXPECT_LT(d.total_variation(law), 1e-9);
    EXPECT_NEAR(d.probability(1), 0.4268, 5e-5);
    EXPECT_NEAR(d.probability(2), 0.4268, 5e-5);
    EXPECT_NEAR(d.probability(0), 0.0732, 5e-5);
    EXPECT_NEAR(d.probability(3), 0.0732, 5e-5);
}

TEST(Circuit, SuperposedInputIsMixture) {
    const auto a = scaled_diagonal({0.25, 0.5});
    const std::vector<Complex> psi = {Complex(1 / std::sqrt(2.0), 0), Complex(1 / std::sqrt(2.0), 0)};
    const auto d = statevector_qpe(a, psi, 2);
    EXPECT_NEAR(d.probability(1), 0.5, 1e-12);
    EXPECT_NEAR(d.probability(2), 0.5, 1e-12);
}

TEST(Circuit, RandomHermitianMatchesLawForEveryEigenvector) {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(0.02, 0.5);
    for (std::size_t n = 1; n <= kStatevectorMaxDim; ++n) {
        std::vector<double> ev(n);
        for (double& v : ev) {
            v = u(rng);
        }
        ev[0] = 0.5;  // keeps the rescale trivial
        const auto g = test::with_spectrum(ev, rng, n % 2 == 0);
        const auto a = rescale(g.matrix, 0.5);
        const auto spectrum = exact_spectrum(a);
        for (int m = 1; m <= kStatevectorMaxQubits; ++m) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto circuit = statevector_qpe(a, j, m);
                const auto law = outcome_distribution(spectrum.eigenvalues[j], {m, QpeMode::FullDistribution});
                ASSERT_LT(circuit.total_variation(law), 1e-9) << "n=" << n << " m=" << m << " j=" << j;
            }
        }
    }
}

TEST(Circuit, UniformInputGivesSpectralMixture) {
    std::mt19937_64 rng(56);
    const auto g = test::with_spectrum({0.5, 0.31, 0.17, 0.09}, rng, false);
    const auto a = rescale(g.matrix, 0.5);
    const auto spectrum = exact_spectrum(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix.to_dense());
    // equal-weight superposition of eigenvectors with arbitrary phases
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    for (int j = 0; j < 4; ++j) {
        psi += std::polar(0.5, 0.7 * j) * es.eigenvectors().col(j);
    }
    std::vector<Complex> in(psi.data(), psi.data() + 4);
    const int m = 5;
    const auto d = statevector_qpe(a, in, m);
    for (std::uint64_t k = 0; k < 32; ++k) {
        double expect = 0.0;
        for (double lambda : spectrum.eigenvalues) {
            expect += 0.25 * law_by_sum(lambda, m, k);
        }
        EXPECT_NEAR(d.probability(k), expect, 1e-10);
    }
}

TEST(Circuit, Errors) {
    const auto a = scaled_diagonal({0.25, 0.5});
    EXPECT_EQ(code_of([&] { statevector_qpe(a, 2, 2); }), ErrorCode::NotEigenIndex);
    EXPECT_EQ(code_of([&] { statevector_qpe(a, 0, 7); }), ErrorCode::TooLarge);
    const auto big = rescale(test::diagonal(std::vector<double>(9, 0.5)), 0.5);
    EXPECT_EQ(code_of([&] { statevector_qpe(big, 0, 2); }), ErrorCode::TooLarge);
    const std::vector<Complex> bad = {Complex(1, 0), Complex(1, 0)};
    EXPECT_EQ(code_of([&] { statevector_qpe(a, bad, 2); }), ErrorCode::DomainError);
}
