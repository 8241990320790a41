#pragma once

// Quantum resource accounting under the unit-constant convention: every
// O(.) is evaluated with constant 1, natural logs inside the simulation
// cost, log2 for register sizes, and the log-log divisor kept where the
// asymptotic formula writes it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace qss {

inline constexpr std::string_view kUnitConstantConvention =
    "unit constants: tau = 2*pi*s^2*a_max; L = ln(tau/eta); queries = tau*L/ln(L); "
    "two_qubit_gates = tau*log2(n)*L^2/ln(L); T_U = queries + two_qubit_gates; "
    "cost_U = queries*qram_cost + two_qubit_gates; qpe_run = 2^m*T_U + m*log2(m); "
    "total_steps = N*qpe_run; T_LgD = N*2^m*s^2*log2(n)*ln(s^2/eta)^2";

/// 2 pi s^2 a_max.
double tau(std::size_t s, double a_max);

struct HamSimCost {
    double queries = 0.0;
    double two_qubit_gates = 0.0;
    double t_u = 0.0;
};

/// Cost of one controlled U(2 pi) at accuracy eta. Throws RegimeError when
/// tau / eta <= e.
HamSimCost hamsim_cost(double tau, double eta, std::size_t n);

/// 2^m cost_u + m log2 m (the inverse-QFT term vanishes at m = 1).
double qpe_run_cost(int m, double cost_u);

struct TotalCost {
    double steps = 0.0;  // N * qpe_run_cost(m, T_U)
    double t_lgd = 0.0;  // N 2^m s^2 log2(n) ln(s^2/eta)^2
};

/// Without a_max the order-one factor 2 pi a_max is taken as 1, i.e. tau = s^2.
TotalCost total_cost(std::uint64_t samples, int m, std::size_t s, std::size_t n, double eta,
                     std::optional<double> a_max = std::nullopt);

struct ResourceInputs {
    std::size_t n = 2;
    std::size_t s = 1;
    int m = 1;
    std::uint64_t samples = 1;
    double eta = 0.1;
    std::optional<double> a_max;      // max entry modulus; see total_cost()
    std::optional<double> qram_cost;  // cost per oracle query, default log2(n)
};

struct ResourceReport {
    ResourceInputs inputs;
    double tau = 0.0;
    double queries = 0.0;
    double two_qubit_gates = 0.0;
    double t_u = 0.0;
    double qram_cost = 0.0;
    double cost_u = 0.0;      // queries * qram_cost + two_qubit_gates
    double n_qpe_cost = 0.0;  // qpe_run_cost(m, T_U)
    double total_steps = 0.0;
    double t_lgd = 0.0;
};

ResourceReport resource_report(const ResourceInputs& inputs);

}  // namespace qss
