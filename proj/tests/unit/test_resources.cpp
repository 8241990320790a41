#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "qss/error.hpp"
#include "qss/error_budget.hpp"
#include "qss/resources.hpp"

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

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Tau, Examples) {
    EXPECT_DOUBLE_EQ(tau(3, 0.5), 9 * kPi);
    EXPECT_NEAR(tau(3, 0.5), 28.274, 5e-4);
    EXPECT_DOUBLE_EQ(tau(1, 1 / (2 * kPi)), 1.0);
}

TEST(HamSim, ForcedByFormula) {
    const double eta = 0.01;
    const double t = std::exp(2.0) * eta;
    const auto c = hamsim_cost(t, eta, 4);
    EXPECT_NEAR(c.queries, 2 * t / std::log(2.0), 1e-12);
    EXPECT_NEAR(c.two_qubit_gates, t * 2.0 * 4.0 / std::log(2.0), 1e-12);
    EXPECT_DOUBLE_EQ(c.t_u, c.queries + c.two_qubit_gates);
}

TEST(HamSim, DoublingN) {
    for (std::size_t n : {2u, 3u, 16u, 1000u}) {
        const auto a = hamsim_cost(30.0, 0.1, n);
        const auto b = hamsim_cost(30.0, 0.1, 2 * n);
        EXPECT_NEAR(b.two_qubit_gates / a.two_qubit_gates, std::log2(2.0 * n) / std::log2(double(n)), 1e-13);
        EXPECT_DOUBLE_EQ(a.queries, b.queries);
    }
}

TEST(HamSim, DirectEvaluation) {
    // tau = 28.274, eta = 0.1, n = 16 by hand:
    // L = ln 282.74 = 5.644528, LL = ln L = 1.730687
    const auto c = hamsim_cost(28.274, 0.1, 16);
    EXPECT_NEAR(c.queries, 92.21391, 1e-4);
    EXPECT_NEAR(c.two_qubit_gates, 2082.0160, 1e-3);
    EXPECT_NEAR(c.t_u, 2174.2299, 1e-3);
}

TEST(HamSim, Regime) {
    EXPECT_EQ(code_of([] { hamsim_cost(0.25, 0.1, 4); }), ErrorCode::RegimeError);
    EXPECT_EQ(code_of([] { hamsim_cost(std::exp(1.0) * 0.1, 0.1, 4); }), ErrorCode::RegimeError);
    EXPECT_NO_THROW(hamsim_cost(std::exp(1.0) * 0.1 * 1.001, 0.1, 4));
}

TEST(QpeRun, Examples) {
    EXPECT_DOUBLE_EQ(qpe_run_cost(1, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(qpe_run_cost(4, 0.0), 8.0);
    EXPECT_NEAR(qpe_run_cost(10, 100.0), 102433.22, 5e-3);
}

TEST(TotalCost, Example) {
    const auto c = total_cost(100, 6, 2, 16, 0.1);
    EXPECT_NEAR(c.t_lgd, 100.0 * 64 * 4 * 4 * std::pow(std::log(40.0), 2), 1e-6);
    EXPECT_NEAR(c.t_lgd / 1.394e6, 1.0, 1e-3);
}

TEST(TotalCost, StepsStructure) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t n_mc = 1 + rng() % 5000;
        const int m = 1 + static_cast<int>(rng() % 30);
        const std::size_t s = 1 + rng() % 8;
        const std::size_t n = 2 + rng() % 4096;
        const double eta = 0.001 + 0.1 * static_cast<double>(rng() % 100) / 100.0;
        const auto a_max = 0.2 + static_cast<double>(rng() % 100) / 50.0;
        const auto c = total_cost(n_mc, m, s, n, eta, a_max);
        const auto h = hamsim_cost(tau(s, a_max), eta, n);
        EXPECT_NEAR(c.steps, static_cast<double>(n_mc) * qpe_run_cost(m, h.t_u), 1e-12 * c.steps);
        const auto r = resource_report({n, s, m, n_mc, eta, a_max, std::nullopt});
        EXPECT_DOUBLE_EQ(r.total_steps, static_cast<double>(n_mc) * r.n_qpe_cost);
        EXPECT_DOUBLE_EQ(r.qram_cost, std::log2(static_cast<double>(n)));
        EXPECT_DOUBLE_EQ(r.cost_u, r.queries * r.qram_cost + r.two_qubit_gates);
        for (double v : {r.tau, r.queries, r.two_qubit_gates, r.t_u, r.cost_u, r.n_qpe_cost, r.total_steps, r.t_lgd}) {
            EXPECT_TRUE(std::isfinite(v) && v >= 0.0);
        }
    }
}

TEST(TotalCost, SingleRunDominatedByEvolution) {
    const auto h = hamsim_cost(2 * kPi, 0.01, 64);
    const auto c = total_cost(1, 20, 1, 64, 0.01, 1.0);
    EXPECT_NEAR(c.steps / (std::ldexp(1.0, 20) * h.t_u), 1.0, 1e-6);
    // without a_max the prefactor 2 pi a_max is one
    EXPECT_DOUBLE_EQ(total_cost(3, 5, 2, 8, 0.1).steps, total_cost(3, 5, 2, 8, 0.1, 1 / (2 * kPi)).steps);
}

TEST(TotalCost, Monotonicity) {
    // eta monotonicity needs tau/eta >= e^e, where tau L / ln L is increasing in L
    const ResourceInputs base{16, 2, 6, 100, 0.05, 0.5, std::nullopt};
    const auto r0 = resource_report(base);
    auto bump = [&](auto mutate) {
        ResourceInputs in = base;
        mutate(in);
        return resource_report(in);
    };
    const std::vector<ResourceReport> larger = {
        bump([](ResourceInputs& in) { in.samples *= 2; }), bump([](ResourceInputs& in) { ++in.m; }),
        bump([](ResourceInputs& in) { ++in.s; }), bump([](ResourceInputs& in) { in.n *= 2; }),
        bump([](ResourceInputs& in) { in.eta /= 2; })};
    for (const auto& r : larger) {
        EXPECT_GE(r.total_steps, r0.total_steps);
        EXPECT_GE(r.t_lgd, r0.t_lgd);
        EXPECT_GE(r.t_u, r0.t_u);
    }
}

TEST(TotalCost, EpsilonSweepSlope) {
    std::vector<double> xs, ys;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto p = choose_parameters(-1.0, 0.5, 4.0, eps);
        xs.push_back(std::log(1 / eps));
        ys.push_back(std::log(total_cost(p.n_mc, p.m, 2, 16, 0.01).t_lgd));
    }
    const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    EXPECT_GE(sxy / sxx, 2.8);
    EXPECT_LE(sxy / sxx, 3.2);
}

TEST(TotalCost, LinearInLog2N) {
    const double a = total_cost(100, 6, 2, 16, 0.1).t_lgd;
    for (std::size_t n : {2u, 64u, 1024u, 65536u}) {
        EXPECT_NEAR(total_cost(100, 6, 2, n, 0.1).t_lgd / a, std::log2(double(n)) / 4.0, 1e-13);
    }
}

TEST(Report, CustomQramCost) {
    const auto r = resource_report({16, 2, 6, 100, 0.1, 0.5, 3.0});
    EXPECT_DOUBLE_EQ(r.qram_cost, 3.0);
    EXPECT_DOUBLE_EQ(r.cost_u, 3.0 * r.queries + r.two_qubit_gates);
    EXPECT_DOUBLE_EQ(r.tau, tau(2, 0.5));
}
