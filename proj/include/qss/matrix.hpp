#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qss {

using Complex = std::complex<double>;

/// Conjugate-symmetry tolerance, applied per real/imaginary component.
inline constexpr double kHermitianTolerance = 1e-12;

/// Default cap on n for dense eigendecomposition.
inline constexpr std::size_t kDefaultDenseCap = 4096;

struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    Complex value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

/// How a triplet list encodes the matrix.
enum class Storage {
    General,    // every nonzero listed explicitly, both (i,j) and (j,i)
    Symmetric,  // one triangle listed; the mirror is completed by conjugation
};

/// Validated sparse positive-candidate Hermitian matrix. Immutable.
///
/// Entries are kept in row-major order with exact user-supplied values;
/// explicit zeros are dropped.
class SparseHermitianMatrix {
  public:
    static SparseHermitianMatrix from_triplets(std::size_t n, std::vector<Entry> entries, Storage storage);

    [[nodiscard]] std::size_t dim() const noexcept { return n_; }
    [[nodiscard]] std::span<const Entry> entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t nonzeros() const noexcept { return entries_.size(); }
    /// Maximum number of nonzeros in any row or column.
    [[nodiscard]] std::size_t sparsity() const noexcept { return sparsity_; }
    /// max |A_ij| over stored entries.
    [[nodiscard]] double max_entry_modulus() const noexcept { return max_modulus_; }
    [[nodiscard]] bool is_real() const noexcept { return real_; }

    [[nodiscard]] Eigen::MatrixXcd to_dense() const;
    [[nodiscard]] SparseHermitianMatrix scaled(double factor) const;

    /// y = A x
    void multiply(std::span<const Complex> x, std::span<Complex> y) const;

  private:
    SparseHermitianMatrix() = default;

    std::size_t n_ = 0;
    std::vector<Entry> entries_;
    std::vector<std::size_t> row_start_;
    std::size_t sparsity_ = 0;
    double max_modulus_ = 0.0;
    bool real_ = true;
};

/// Parse a Matrix Market coordinate file. Accepted kinds:
/// "real symmetric", "complex hermitian", "real general".
SparseHermitianMatrix load_matrix(const std::string& path);
SparseHermitianMatrix parse_matrix_market(std::istream& in);
SparseHermitianMatrix load_matrix(std::size_t n, std::vector<Entry> entries, Storage storage);

/// Writes the lower triangle as "real symmetric" or "complex hermitian".
void write_matrix_market(const SparseHermitianMatrix& a, std::ostream& out);

enum class BoundSource { Oracle, PowerIteration, Supplied };

std::string_view to_string(BoundSource source) noexcept;

/// c·A with its spectrum inside [1/(2κ), 1/2].
struct ScaledMatrix {
    SparseHermitianMatrix matrix;
    double scale = 1.0;
    double lambda_max = 0.5;
    double lambda_min = 0.5;
    double kappa_bound = 1.0;
    BoundSource lambda_max_source = BoundSource::Oracle;
    BoundSource lambda_min_source = BoundSource::Oracle;

    [[nodiscard]] std::size_t dim() const noexcept { return matrix.dim(); }
    /// Add to a log-determinant of c·A to recover the log-determinant of A.
    [[nodiscard]] double log_det_correction() const noexcept;
};

struct RescaleOptions {
    BoundSource lambda_max_source = BoundSource::Supplied;
    std::optional<double> lambda_min_estimate;  // oracle value when empty
    std::size_t dense_cap = kDefaultDenseCap;
};

/// Scale so the supplied upper bound maps to 1/2. Positivity and both bounds
/// are checked against the dense spectrum.
ScaledMatrix rescale(const SparseHermitianMatrix& a, double lambda_max_estimate, const RescaleOptions& options = {});

/// Same as rescale(), reusing already computed ascending eigenvalues of A.
ScaledMatrix rescale_with_spectrum(const SparseHermitianMatrix& a, std::span<const double> eigenvalues,
                                   double lambda_max_estimate, const RescaleOptions& options = {});

/// Largest eigenvalue by power iteration (Rayleigh quotient), stopping when the
/// relative change drops below rel_tol.
double power_iteration_lambda_max(const SparseHermitianMatrix& a, double rel_tol = 1e-6, int max_iterations = 100000);

/// Power iteration result times the 1.01 safety multiplier.
double estimate_lambda_max(const SparseHermitianMatrix& a);

struct SpectrumInfo {
    std::vector<double> eigenvalues;  // ascending
    double alpha = 0.0;               // sum of log eigenvalues
    double mu = 0.0;                  // alpha / n
    double delta = 0.0;               // std. dev. of log eigenvalues (1/n form)
    double kappa_actual = 1.0;

    [[nodiscard]] std::size_t dim() const noexcept { return eigenvalues.size(); }

    /// Derive the statistics from positive eigenvalues (sorted internally).
    static SpectrumInfo from_eigenvalues(std::vector<double> eigenvalues);
};

/// Ascending eigenvalues by dense decomposition.
std::vector<double> dense_eigenvalues(const SparseHermitianMatrix& a, std::size_t dense_cap = kDefaultDenseCap);

SpectrumInfo exact_spectrum(const SparseHermitianMatrix& a, std::size_t dense_cap = kDefaultDenseCap);
/// Clamped to lambda_max, which an exact bound can overshoot by roundoff.
SpectrumInfo exact_spectrum(const ScaledMatrix& a, std::size_t dense_cap = kDefaultDenseCap);

/// Spectrum of the scaled matrix from the unscaled eigenvalues, clamped the same way.
SpectrumInfo scaled_spectrum(std::span<const double> eigenvalues, const ScaledMatrix& a);

}  // namespace qss
