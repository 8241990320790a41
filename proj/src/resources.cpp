#include "qss/resources.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qss/error.hpp"

namespace qss {

double tau(std::size_t s, double a_max) {
    require(s >= 1, ErrorCode::DomainError, "sparsity must be at least 1");
    require(a_max > 0.0 && std::isfinite(a_max), ErrorCode::DomainError, "a_max must be positive");
    const double sd = static_cast<double>(s);
    return 2.0 * std::numbers::pi * sd * sd * a_max;
}

HamSimCost hamsim_cost(double tau_value, double eta, std::size_t n) {
    require(n >= 2, ErrorCode::DomainError, "n must be at least 2");
    require(eta > 0.0 && eta < tau_value, ErrorCode::DomainError, "need 0 < eta < tau");
    const double l = std::log(tau_value / eta);
    require(l > 1.0, ErrorCode::RegimeError,
            "tau / eta = " + std::to_string(tau_value / eta) + " <= e; the log-log divisor is not positive");
    const double ll = std::log(l);
    HamSimCost c;
    c.queries = tau_value * l / ll;
    c.two_qubit_gates = tau_value * std::log2(static_cast<double>(n)) * l * l / ll;
    c.t_u = c.queries + c.two_qubit_gates;
    return c;
}

double qpe_run_cost(int m, double cost_u) {
    require(m >= 1, ErrorCode::InvalidConfig, "m must be at least 1");
    require(cost_u >= 0.0, ErrorCode::DomainError, "unitary cost must be non-negative");
    const double md = static_cast<double>(m);
    return std::ldexp(cost_u, m) + md * std::log2(md);
}

TotalCost total_cost(std::uint64_t samples, int m, std::size_t s, std::size_t n, double eta,
                     std::optional<double> a_max) {
    require(samples >= 1, ErrorCode::InvalidN, "N must be at least 1");
    require(s >= 1, ErrorCode::DomainError, "sparsity must be at least 1");
    const double sd = static_cast<double>(s);
    const double tau_value = a_max ? tau(s, *a_max) : sd * sd;
    const HamSimCost c = hamsim_cost(tau_value, eta, n);
    const double nd = static_cast<double>(samples);
    const double ls = std::log(sd * sd / eta);
    TotalCost t;
    t.steps = nd * qpe_run_cost(m, c.t_u);
    t.t_lgd = nd * std::ldexp(1.0, m) * sd * sd * std::log2(static_cast<double>(n)) * ls * ls;
    return t;
}

ResourceReport resource_report(const ResourceInputs& inputs) {
    ResourceReport r;
    r.inputs = inputs;
    const double sd = static_cast<double>(inputs.s);
    r.tau = inputs.a_max ? tau(inputs.s, *inputs.a_max) : sd * sd;
    const HamSimCost c = hamsim_cost(r.tau, inputs.eta, inputs.n);
    r.queries = c.queries;
    r.two_qubit_gates = c.two_qubit_gates;
    r.t_u = c.t_u;
    r.qram_cost = inputs.qram_cost.value_or(std::log2(static_cast<double>(inputs.n)));
    require(r.qram_cost >= 0.0, ErrorCode::DomainError, "qram cost must be non-negative");
    r.cost_u = c.queries * r.qram_cost + c.two_qubit_gates;
    r.n_qpe_cost = qpe_run_cost(inputs.m, c.t_u);
    const TotalCost t = total_cost(inputs.samples, inputs.m, inputs.s, inputs.n, inputs.eta, inputs.a_max);
    r.total_steps = t.steps;
    r.t_lgd = t.t_lgd;
    return r;
}

}  // namespace qss
