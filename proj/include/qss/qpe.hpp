#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qss/matrix.hpp"
#include "qss/rng.hpp"

namespace qss {

/// Pointer-register readout models.
///
/// Floor: the m-bit binary truncation of the eigenvalue.
/// Nearest: rounding to the nearest grid point, ties toward the larger k.
/// FullDistribution: the uniform-superposition phase-estimation law
///   P(k) = sin^2(2^m pi d) / (4^m sin^2(pi d)),  d = lambda - k / 2^m.
enum class QpeMode { Floor, Nearest, FullDistribution };

std::string_view to_string(QpeMode mode) noexcept;
/// Accepts "floor", "nearest", "full".
QpeMode parse_mode(std::string_view name);

inline constexpr int kMaxPointerQubits = 40;
/// Largest m for which a FullDistribution is materialized bin by bin.
inline constexpr int kMaxMaterializedQubits = 20;

struct QpeConfig {
    int m = 8;
    QpeMode mode = QpeMode::FullDistribution;

    /// Evolution time of the controlled unitary; the estimated phase is lambda itself.
    static constexpr double time = 2.0 * std::numbers::pi;

    [[nodiscard]] std::uint64_t grid_size() const noexcept { return std::uint64_t{1} << m; }
    /// Throws InvalidConfig unless 1 <= m <= 40.
    void validate() const;
};

class OutcomeDistribution {
  public:
    OutcomeDistribution(int m, std::map<std::uint64_t, double> probabilities)
        : m_(m), probabilities_(std::move(probabilities)) {}

    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] const std::map<std::uint64_t, double>& probabilities() const noexcept { return probabilities_; }
    [[nodiscard]] double probability(std::uint64_t k) const noexcept;
    [[nodiscard]] double total() const noexcept;
    /// Total-variation distance; both distributions must share m.
    [[nodiscard]] double total_variation(const OutcomeDistribution& other) const;

  private:
    int m_;
    std::map<std::uint64_t, double> probabilities_;
};

/// P(k | lambda) in FullDistribution mode.
double full_distribution_probability(double lambda, int m, std::uint64_t k);

OutcomeDistribution outcome_distribution(double lambda, const QpeConfig& config);

struct Outcome {
    std::uint64_t k = 0;
    double lambda_tilde = 0.0;  // k / 2^m
};

/// Draws pointer readouts for one eigenvalue. Construction precomputes the
/// inverse-CDF table of the bins nearest to 2^m lambda; the heavy tail of the
/// FullDistribution law is sampled exactly by rejection against a 1/(i(i+1))
/// envelope, so any m up to 40 is supported.
class PointerSampler {
  public:
    PointerSampler(double lambda, const QpeConfig& config);

    Outcome sample(CounterStream& stream) const;

  private:
    Outcome make(std::uint64_t k) const noexcept;
    std::uint64_t sample_tail(CounterStream& stream) const;

    QpeConfig config_;
    double lambda_;
    std::uint64_t fixed_k_ = 0;  // Floor / Nearest
    // FullDistribution
    std::vector<std::pair<std::uint64_t, double>> cdf_;  // (k, cumulative probability)
    double window_mass_ = 0.0;
    bool has_tail_ = false;
    std::uint64_t center_ = 0;  // floor(2^m lambda)
    double frac_ = 0.0;         // 2^m lambda - center_
    double numerator_ = 0.0;    // sin^2(pi frac_)
    std::uint64_t half_window_ = 0;
};

Outcome sample_outcome(double lambda, const QpeConfig& config, CounterStream& stream);

/// Caps of the gate-level circuit oracle.
inline constexpr std::size_t kStatevectorMaxDim = 8;
inline constexpr int kStatevectorMaxQubits = 6;

/// Gate-level phase estimation on |j> (j-th eigenvector, ascending order):
/// Hadamards on the pointer, controlled U(2 pi)^(2^q) from pointer qubit q,
/// inverse QFT built from Hadamards, controlled phases and swaps. Returns the
/// exact pointer-register measurement distribution.
OutcomeDistribution statevector_qpe(const ScaledMatrix& a, std::size_t eigen_index, int m);

/// Same circuit on an arbitrary normalized input state of the system register.
OutcomeDistribution statevector_qpe(const ScaledMatrix& a, std::span<const Complex> input_state, int m);

}  // namespace qss
