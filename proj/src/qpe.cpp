#include "qss/qpe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qss/error.hpp"

namespace qss {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kHalfWindow = 64;

void check_lambda(double lambda) {
    require(lambda > 0.0 && lambda <= 0.5, ErrorCode::DomainError,
            "eigenvalue " + std::to_string(lambda) + " outside (0, 1/2]");
}

double sin_squared(double x) {
    const double s = std::sin(x);
    return s * s;
}

// sin^2(pi * (2^m lambda - round(2^m lambda))): the numerator of the
// phase-estimation law, identical for every k.
double law_numerator(double scaled_lambda) {
    return sin_squared(kPi * (scaled_lambda - std::nearbyint(scaled_lambda)));
}

// P for a bin at signed distance d = 2^m lambda - k.
double law_probability(double numerator, double d, double grid) {
    if (d == 0.0) {
        return 1.0;
    }
    if (numerator == 0.0) {
        return 0.0;
    }
    return numerator / (grid * grid * sin_squared(kPi * d / grid));
}

}  // namespace

std::string_view to_string(QpeMode mode) noexcept {
    switch (mode) {
        case QpeMode::Floor: return "floor";
        case QpeMode::Nearest: return "nearest";
        case QpeMode::FullDistribution: return "full";
    }
    return "unknown";
}

QpeMode parse_mode(std::string_view name) {
    if (name == "floor") return QpeMode::Floor;
    if (name == "nearest") return QpeMode::Nearest;
    if (name == "full") return QpeMode::FullDistribution;
    fail(ErrorCode::InvalidConfig, "unknown mode '" + std::string(name) + "' (expected floor, nearest or full)");
}

void QpeConfig::validate() const {
    require(m >= 1 && m <= kMaxPointerQubits, ErrorCode::InvalidConfig,
            "pointer qubits m = " + std::to_string(m) + " outside [1, 40]");
}

double OutcomeDistribution::probability(std::uint64_t k) const noexcept {
    const auto it = probabilities_.find(k);
    return it == probabilities_.end() ? 0.0 : it->second;
}

double OutcomeDistribution::total() const noexcept {
    double s = 0.0;
    for (const auto& [k, p] : probabilities_) {
        s += p;
    }
    return s;
}

double OutcomeDistribution::total_variation(const OutcomeDistribution& other) const {
    require(m_ == other.m_, ErrorCode::InvalidConfig, "distributions over different registers");
    double s = 0.0;
    for (const auto& [k, p] : probabilities_) {
        s += std::abs(p - other.probability(k));
    }
    for (const auto& [k, p] : other.probabilities_) {
        if (!probabilities_.contains(k)) {
            s += std::abs(p);
        }
    }
    return 0.5 * s;
}

double full_distribution_probability(double lambda, int m, std::uint64_t k) {
    const double grid = std::ldexp(1.0, m);
    const double scaled = grid * lambda;
    return law_probability(law_numerator(scaled), scaled - static_cast<double>(k), grid);
}

OutcomeDistribution outcome_distribution(double lambda, const QpeConfig& config) {
    config.validate();
    check_lambda(lambda);
    const double scaled = std::ldexp(lambda, config.m);
    switch (config.mode) {
        case QpeMode::Floor:
            return OutcomeDistribution(config.m, {{static_cast<std::uint64_t>(std::floor(scaled)), 1.0}});
        case QpeMode::Nearest:
            return OutcomeDistribution(config.m, {{static_cast<std::uint64_t>(std::floor(scaled + 0.5)), 1.0}});
        case QpeMode::FullDistribution:
            break;
    }
    require(config.m <= kMaxMaterializedQubits, ErrorCode::TooLarge,
            "full distribution over 2^" + std::to_string(config.m) + " bins is not materialized");
    const double grid = std::ldexp(1.0, config.m);
    const double numerator = law_numerator(scaled);
    std::map<std::uint64_t, double> probs;
    for (std::uint64_t k = 0; k < config.grid_size(); ++k) {
        probs.emplace_hint(probs.end(), k, law_probability(numerator, scaled - static_cast<double>(k), grid));
    }
    return OutcomeDistribution(config.m, std::move(probs));
}

// ---------------------------------------------------------------------------

PointerSampler::PointerSampler(double lambda, const QpeConfig& config) : config_(config), lambda_(lambda) {
    config.validate();
    check_lambda(lambda);
    const double scaled = std::ldexp(lambda, config.m);
    if (config.mode == QpeMode::Floor) {
        fixed_k_ = static_cast<std::uint64_t>(std::floor(scaled));
        return;
    }
    if (config.mode == QpeMode::Nearest) {
        fixed_k_ = static_cast<std::uint64_t>(std::floor(scaled + 0.5));
        return;
    }

    const std::uint64_t grid = config.grid_size();
    const double grid_d = static_cast<double>(grid);
    center_ = static_cast<std::uint64_t>(std::floor(scaled));
    frac_ = scaled - static_cast<double>(center_);
    numerator_ = law_numerator(scaled);

    double cumulative = 0.0;
    auto push = [&](std::uint64_t k, double d) {
        cumulative += law_probability(numerator_, d, grid_d);
        cdf_.emplace_back(k, cumulative);
    };
    if (grid <= 2 * kHalfWindow) {
        for (std::uint64_t k = 0; k < grid; ++k) {
            push(k, scaled - static_cast<double>(k));
        }
    } else {
        // Window: center + 1..h above, center - 0..h-1 below, nearest first.
        half_window_ = kHalfWindow;
        has_tail_ = true;
        for (std::uint64_t i = 0; i < kHalfWindow; ++i) {
            push((center_ + grid - i) % grid, frac_ + static_cast<double>(i));
            push((center_ + i + 1) % grid, frac_ - static_cast<double>(i + 1));
        }
    }
    window_mass_ = cumulative;
}

Outcome PointerSampler::make(std::uint64_t k) const noexcept {
    return {k, std::ldexp(static_cast<double>(k), -config_.m)};
}

Outcome PointerSampler::sample(CounterStream& stream) const {
    if (config_.mode != QpeMode::FullDistribution) {
        return make(fixed_k_);
    }
    const double u = stream.uniform();
    if (has_tail_ && u >= window_mass_) {
        return make(sample_tail(stream));
    }
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u,
                               [](double value, const auto& entry) { return value < entry.second; });
    if (it == cdf_.end()) {
        // Roundoff left the table total just below u; take the last populated bin.
        it = std::prev(cdf_.end());
        while (it != cdf_.begin() && it->second == std::prev(it)->second) {
            --it;
        }
    }
    return make(it->first);
}

// Bins outside the window lie at offset i >= h from the center on either
// side, where P <= 1/(4 (i-1)^2). Offsets are proposed from
// q(i) = h / (i (i+1)), i >= h, by inversion i = floor(h / U), and accepted
// with probability P(i) i (i+1) / B, B = h (h+1) / (4 (h-1)^2).
std::uint64_t PointerSampler::sample_tail(CounterStream& stream) const {
    const std::uint64_t grid = config_.grid_size();
    const double grid_d = static_cast<double>(grid);
    const double h = static_cast<double>(half_window_);
    const double envelope = h * (h + 1.0) / (4.0 * (h - 1.0) * (h - 1.0));
    const double half_grid = grid_d / 2.0;
    for (;;) {
        const bool above = stream.uniform() < 0.5;
        const double offset = std::floor(h / stream.uniform_open_zero());
        const double lo = above ? h + 1.0 : h;
        const double hi = above ? half_grid : half_grid - 1.0;
        if (offset < lo || offset > hi) {
            continue;
        }
        const double d = above ? frac_ - offset : frac_ + offset;
        const double p = law_probability(numerator_, d, grid_d);
        if (stream.uniform() * envelope < p * offset * (offset + 1.0)) {
            const auto i = static_cast<std::uint64_t>(offset);
            return above ? (center_ + i) % grid : (center_ + grid - i) % grid;
        }
    }
}

Outcome sample_outcome(double lambda, const QpeConfig& config, CounterStream& stream) {
    return PointerSampler(lambda, config).sample(stream);
}

// ---------------------------------------------------------------------------
// Gate-level circuit oracle

namespace {

using StateMatrix = Eigen::MatrixXcd;  // rows: system basis, columns: pointer basis

void apply_hadamard(StateMatrix& psi, int qubit) {
    const Eigen::Index bit = Eigen::Index{1} << qubit;
    const double r = std::sqrt(0.5);
    for (Eigen::Index x = 0; x < psi.cols(); ++x) {
        if ((x & bit) != 0) {
            continue;
        }
        const Eigen::VectorXcd a = psi.col(x);
        const Eigen::VectorXcd b = psi.col(x | bit);
        psi.col(x) = r * (a + b);
        psi.col(x | bit) = r * (a - b);
    }
}

void apply_controlled_phase(StateMatrix& psi, int control, int target, double angle) {
    const Eigen::Index mask = (Eigen::Index{1} << control) | (Eigen::Index{1} << target);
    const Complex phase = std::polar(1.0, angle);
    for (Eigen::Index x = 0; x < psi.cols(); ++x) {
        if ((x & mask) == mask) {
            psi.col(x) *= phase;
        }
    }
}

void apply_swap(StateMatrix& psi, int a, int b) {
    const Eigen::Index ba = Eigen::Index{1} << a;
    const Eigen::Index bb = Eigen::Index{1} << b;
    for (Eigen::Index x = 0; x < psi.cols(); ++x) {
        if ((x & ba) != 0 && (x & bb) == 0) {
            psi.col(x).swap(psi.col((x & ~ba) | bb));
        }
    }
}

void apply_inverse_qft(StateMatrix& psi, int m) {
    for (int q = 0; q < m / 2; ++q) {
        apply_swap(psi, q, m - 1 - q);
    }
    for (int q = 0; q < m; ++q) {
        for (int r = 0; r < q; ++r) {
            apply_controlled_phase(psi, r, q, -kPi / static_cast<double>(1 << (q - r)));
        }
        apply_hadamard(psi, q);
    }
}

OutcomeDistribution run_circuit(const ScaledMatrix& a, const Eigen::VectorXcd& input, int m) {
    const auto n = static_cast<Eigen::Index>(a.dim());
    const Eigen::Index grid = Eigen::Index{1} << m;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix.to_dense());
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        phases(i) = std::polar(1.0, QpeConfig::time * solver.eigenvalues()(i));
    }
    Eigen::MatrixXcd unitary = v * phases.asDiagonal() * v.adjoint();

    // Step 1: |input> (x) |0...0>.
    StateMatrix psi = StateMatrix::Zero(n, grid);
    psi.col(0) = input;
    // Step 2: Hadamards on the pointer register.
    for (int q = 0; q < m; ++q) {
        apply_hadamard(psi, q);
    }
    // Step 3: controlled U^(2^q), controlled by pointer qubit q.
    for (int q = 0; q < m; ++q) {
        const Eigen::Index bit = Eigen::Index{1} << q;
        for (Eigen::Index x = 0; x < grid; ++x) {
            if ((x & bit) != 0) {
                psi.col(x) = unitary * psi.col(x);
            }
        }
        unitary = unitary * unitary;
    }
    // Step 4: inverse QFT, then measure the pointer register.
    apply_inverse_qft(psi, m);

    std::map<std::uint64_t, double> probs;
    for (Eigen::Index k = 0; k < grid; ++k) {
        probs.emplace_hint(probs.end(), static_cast<std::uint64_t>(k), psi.col(k).squaredNorm());
    }
    return OutcomeDistribution(m, std::move(probs));
}

void check_circuit_caps(const ScaledMatrix& a, int m) {
    require(a.dim() <= kStatevectorMaxDim, ErrorCode::TooLarge,
            "statevector oracle supports n <= 8, got " + std::to_string(a.dim()));
    require(m >= 1 && m <= kStatevectorMaxQubits, ErrorCode::TooLarge,
            "statevector oracle supports 1 <= m <= 6, got " + std::to_string(m));
}

}  // namespace

OutcomeDistribution statevector_qpe(const ScaledMatrix& a, std::size_t eigen_index, int m) {
    check_circuit_caps(a, m);
    require(eigen_index < a.dim(), ErrorCode::NotEigenIndex,
            "eigen index " + std::to_string(eigen_index) + " outside [0, " + std::to_string(a.dim()) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix.to_dense());
    return run_circuit(a, solver.eigenvectors().col(static_cast<Eigen::Index>(eigen_index)), m);
}

OutcomeDistribution statevector_qpe(const ScaledMatrix& a, std::span<const Complex> input_state, int m) {
    check_circuit_caps(a, m);
    require(input_state.size() == a.dim(), ErrorCode::DimensionError, "input state has the wrong dimension");
    Eigen::VectorXcd input(static_cast<Eigen::Index>(input_state.size()));
    for (std::size_t i = 0; i < input_state.size(); ++i) {
        input(static_cast<Eigen::Index>(i)) = input_state[i];
    }
    require(std::abs(input.norm() - 1.0) <= 1e-10, ErrorCode::DomainError, "input state is not normalized");
    return run_circuit(a, input, m);
}

}  // namespace qss
