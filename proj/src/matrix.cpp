#include "qss/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "qss/error.hpp"
#include "qss/numeric.hpp"
#include "qss/rng.hpp"

namespace qss {
namespace {

bool close_conj(Complex a, Complex b) {
    return std::abs(a.real() - b.real()) <= kHermitianTolerance && std::abs(a.imag() + b.imag()) <= kHermitianTolerance;
}

std::string position(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

SparseHermitianMatrix SparseHermitianMatrix::from_triplets(std::size_t n, std::vector<Entry> entries,
                                                           Storage storage) {
    require(n >= 1, ErrorCode::DimensionError, "matrix dimension must be positive");

    std::map<std::pair<std::size_t, std::size_t>, Complex> given;
    for (const Entry& e : entries) {
        require(e.row < n && e.col < n, ErrorCode::DimensionError,
                "entry " + position(e.row, e.col) + " outside " + std::to_string(n) + "x" + std::to_string(n));
        require(std::isfinite(e.value.real()) && std::isfinite(e.value.imag()), ErrorCode::ParseError,
                "non-finite entry at " + position(e.row, e.col));
        const bool inserted = given.emplace(std::pair{e.row, e.col}, e.value).second;
        require(inserted, ErrorCode::ParseError, "duplicate entry at " + position(e.row, e.col));
    }
    std::erase_if(given, [](const auto& kv) { return kv.second == Complex{}; });

    std::map<std::pair<std::size_t, std::size_t>, Complex> full = given;
    for (const auto& [ij, v] : given) {
        const auto [i, j] = ij;
        if (i == j) {
            require(std::abs(v.imag()) <= kHermitianTolerance, ErrorCode::NotHermitian,
                    "diagonal entry " + position(i, j) + " is not real");
            continue;
        }
        const auto mirror = given.find({j, i});
        if (mirror != given.end()) {
            require(close_conj(v, mirror->second), ErrorCode::NotHermitian,
                    "entries " + position(i, j) + " and " + position(j, i) + " are not conjugate");
        } else if (storage == Storage::Symmetric) {
            full.emplace(std::pair{j, i}, std::conj(v));
        } else {
            fail(ErrorCode::NotHermitian, "entry " + position(i, j) + " has no conjugate partner");
        }
    }

    SparseHermitianMatrix m;
    m.n_ = n;
    m.entries_.reserve(full.size());
    std::vector<std::size_t> row_count(n, 0);
    std::vector<std::size_t> col_count(n, 0);
    for (const auto& [ij, v] : full) {
        m.entries_.push_back({ij.first, ij.second, v});
        ++row_count[ij.first];
        ++col_count[ij.second];
        m.max_modulus_ = std::max(m.max_modulus_, std::abs(v));
        if (v.imag() != 0.0) {
            m.real_ = false;
        }
    }
    m.sparsity_ = std::max(*std::max_element(row_count.begin(), row_count.end()),
                           *std::max_element(col_count.begin(), col_count.end()));
    m.row_start_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        m.row_start_[i + 1] = m.row_start_[i] + row_count[i];
    }
    return m;
}

Eigen::MatrixXcd SparseHermitianMatrix::to_dense() const {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (const Entry& e : entries_) {
        d(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    }
    return d;
}

SparseHermitianMatrix SparseHermitianMatrix::scaled(double factor) const {
    SparseHermitianMatrix m = *this;
    m.max_modulus_ = 0.0;
    for (Entry& e : m.entries_) {
        e.value *= factor;
        m.max_modulus_ = std::max(m.max_modulus_, std::abs(e.value));
    }
    return m;
}

void SparseHermitianMatrix::multiply(std::span<const Complex> x, std::span<Complex> y) const {
    for (std::size_t i = 0; i < n_; ++i) {
        Complex acc{};
        for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
            acc += entries_[k].value * x[entries_[k].col];
        }
        y[i] = acc;
    }
}

// ---------------------------------------------------------------------------
// Matrix Market I/O

namespace {

enum class MarketKind { RealSymmetric, ComplexHermitian, RealGeneral };

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

template <typename T>
T parse_number(const std::string& token, std::size_t line_no) {
    T value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    require(ec == std::errc{} && ptr == last, ErrorCode::ParseError,
            "line " + std::to_string(line_no) + ": bad number '" + token + "'");
    return value;
}

}  // namespace

SparseHermitianMatrix parse_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::ParseError, "empty input");
    ++line_no;

    std::istringstream header(lower(line));
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    require(banner == "%%matrixmarket", ErrorCode::ParseError, "missing %%MatrixMarket banner");
    require(object == "matrix" && format == "coordinate", ErrorCode::ParseError,
            "only 'matrix coordinate' files are supported");
    MarketKind kind;
    if (field == "real" && symmetry == "symmetric") {
        kind = MarketKind::RealSymmetric;
    } else if (field == "complex" && symmetry == "hermitian") {
        kind = MarketKind::ComplexHermitian;
    } else if (field == "real" && symmetry == "general") {
        kind = MarketKind::RealGeneral;
    } else {
        fail(ErrorCode::ParseError, "unsupported header kind '" + field + " " + symmetry + "'");
    }

    auto next_data_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            ++line_no;
            const auto first = out.find_first_not_of(" \t\r");
            if (first == std::string::npos || out[first] == '%') {
                continue;
            }
            return true;
        }
        return false;
    };

    require(next_data_line(line), ErrorCode::ParseError, "missing size line");
    std::vector<std::string> tokens;
    auto split = [&](const std::string& s) {
        tokens.clear();
        std::istringstream ss(s);
        std::string t;
        while (ss >> t) {
            tokens.push_back(t);
        }
    };
    split(line);
    require(tokens.size() == 3, ErrorCode::ParseError, "size line must hold rows, cols, nnz");
    const auto rows = parse_number<std::size_t>(tokens[0], line_no);
    const auto cols = parse_number<std::size_t>(tokens[1], line_no);
    const auto nnz = parse_number<std::size_t>(tokens[2], line_no);
    require(rows == cols, ErrorCode::DimensionError, "matrix is not square");

    const std::size_t want = kind == MarketKind::ComplexHermitian ? 4 : 3;
    std::vector<Entry> entries;
    entries.reserve(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
        require(next_data_line(line), ErrorCode::ParseError,
                "expected " + std::to_string(nnz) + " entries, found " + std::to_string(k));
        split(line);
        require(tokens.size() == want, ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": expected " + std::to_string(want) + " fields");
        const auto i = parse_number<std::size_t>(tokens[0], line_no);
        const auto j = parse_number<std::size_t>(tokens[1], line_no);
        require(i >= 1 && j >= 1 && i <= rows && j <= cols, ErrorCode::DimensionError,
                "line " + std::to_string(line_no) + ": index out of range");
        const double re = parse_number<double>(tokens[2], line_no);
        const double im = want == 4 ? parse_number<double>(tokens[3], line_no) : 0.0;
        entries.push_back({i - 1, j - 1, Complex{re, im}});
    }
    require(!next_data_line(line), ErrorCode::ParseError, "trailing data after the declared entries");

    const Storage storage = kind == MarketKind::RealGeneral ? Storage::General : Storage::Symmetric;
    return SparseHermitianMatrix::from_triplets(rows, std::move(entries), storage);
}

SparseHermitianMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::IoError, "cannot open '" + path + "'");
    return parse_matrix_market(in);
}

SparseHermitianMatrix load_matrix(std::size_t n, std::vector<Entry> entries, Storage storage) {
    return SparseHermitianMatrix::from_triplets(n, std::move(entries), storage);
}

void write_matrix_market(const SparseHermitianMatrix& a, std::ostream& out) {
    std::vector<Entry> lower_part;
    for (const Entry& e : a.entries()) {
        if (e.row >= e.col) {
            lower_part.push_back(e);
        }
    }
    out << "%%MatrixMarket matrix coordinate " << (a.is_real() ? "real symmetric" : "complex hermitian") << "\n";
    out << a.dim() << " " << a.dim() << " " << lower_part.size() << "\n";
    out << std::setprecision(17);
    for (const Entry& e : lower_part) {
        out << e.row + 1 << " " << e.col + 1 << " " << e.value.real();
        if (!a.is_real()) {
            out << " " << e.value.imag();
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// Spectrum and rescaling

std::string_view to_string(BoundSource source) noexcept {
    switch (source) {
        case BoundSource::Oracle: return "oracle";
        case BoundSource::PowerIteration: return "power_iteration";
        case BoundSource::Supplied: return "supplied";
    }
    return "unknown";
}

double ScaledMatrix::log_det_correction() const noexcept {
    return -static_cast<double>(dim()) * std::log(scale);
}

std::vector<double> dense_eigenvalues(const SparseHermitianMatrix& a, std::size_t dense_cap) {
    require(a.dim() <= dense_cap, ErrorCode::TooLarge,
            "n = " + std::to_string(a.dim()) + " exceeds the dense cap " + std::to_string(dense_cap));
    Eigen::VectorXd values;
    if (a.is_real()) {
        const Eigen::MatrixXd dense = a.to_dense().real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
        values = solver.eigenvalues();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.to_dense(), Eigen::EigenvaluesOnly);
        values = solver.eigenvalues();
    }
    std::vector<double> out(values.data(), values.data() + values.size());
    std::sort(out.begin(), out.end());
    return out;
}

SpectrumInfo SpectrumInfo::from_eigenvalues(std::vector<double> eigenvalues) {
    require(!eigenvalues.empty(), ErrorCode::DimensionError, "empty spectrum");
    std::sort(eigenvalues.begin(), eigenvalues.end());
    require(eigenvalues.front() > 0.0, ErrorCode::NotPositive,
            "smallest eigenvalue " + std::to_string(eigenvalues.front()) + " is not positive");

    SpectrumInfo info;
    const auto n = static_cast<double>(eigenvalues.size());
    std::vector<double> logs(eigenvalues.size());
    std::transform(eigenvalues.begin(), eigenvalues.end(), logs.begin(), [](double x) { return std::log(x); });
    info.mu = pairwise_sum(logs) / n;
    info.alpha = n * info.mu;
    for (double& l : logs) {
        l = (l - info.mu) * (l - info.mu);
    }
    info.delta = std::sqrt(pairwise_sum(logs) / n);
    info.kappa_actual = eigenvalues.back() / eigenvalues.front();
    info.eigenvalues = std::move(eigenvalues);
    return info;
}

SpectrumInfo exact_spectrum(const SparseHermitianMatrix& a, std::size_t dense_cap) {
    return SpectrumInfo::from_eigenvalues(dense_eigenvalues(a, dense_cap));
}

SpectrumInfo exact_spectrum(const ScaledMatrix& a, std::size_t dense_cap) {
    std::vector<double> eigenvalues = dense_eigenvalues(a.matrix, dense_cap);
    for (double& v : eigenvalues) {
        v = std::min(v, a.lambda_max);
    }
    return SpectrumInfo::from_eigenvalues(std::move(eigenvalues));
}

SpectrumInfo scaled_spectrum(std::span<const double> eigenvalues, const ScaledMatrix& a) {
    std::vector<double> out(eigenvalues.begin(), eigenvalues.end());
    for (double& v : out) {
        v = std::min(v * a.scale, a.lambda_max);
    }
    return SpectrumInfo::from_eigenvalues(std::move(out));
}

ScaledMatrix rescale_with_spectrum(const SparseHermitianMatrix& a, std::span<const double> eigenvalues,
                                   double lambda_max_estimate, const RescaleOptions& options) {
    require(!eigenvalues.empty(), ErrorCode::DimensionError, "empty spectrum");
    const double true_min = eigenvalues.front();
    const double true_max = eigenvalues.back();
    require(true_min > 0.0, ErrorCode::NotPositive,
            "smallest eigenvalue " + std::to_string(true_min) + " is not positive");
    require(lambda_max_estimate > 0.0 && std::isfinite(lambda_max_estimate), ErrorCode::BoundViolation,
            "lambda_max estimate must be positive and finite");
    // Relative slack absorbs eigensolver roundoff when the bound is exact.
    constexpr double kSlack = 1e-12;
    require(lambda_max_estimate >= true_max * (1.0 - kSlack), ErrorCode::BoundViolation,
            "lambda_max estimate below the largest eigenvalue");

    double min_estimate = true_min;
    BoundSource min_source = BoundSource::Oracle;
    if (options.lambda_min_estimate) {
        min_estimate = *options.lambda_min_estimate;
        min_source = BoundSource::Supplied;
        require(min_estimate > 0.0 && min_estimate <= true_min * (1.0 + kSlack), ErrorCode::BoundViolation,
                "lambda_min estimate above the smallest eigenvalue");
    }

    ScaledMatrix out{a.scaled(1.0 / (2.0 * lambda_max_estimate))};
    out.scale = 1.0 / (2.0 * lambda_max_estimate);
    out.lambda_max = 0.5;
    out.kappa_bound = std::max(1.0, lambda_max_estimate / min_estimate);
    out.lambda_min = 1.0 / (2.0 * out.kappa_bound);
    out.lambda_max_source = options.lambda_max_source;
    out.lambda_min_source = min_source;
    return out;
}

ScaledMatrix rescale(const SparseHermitianMatrix& a, double lambda_max_estimate, const RescaleOptions& options) {
    const std::vector<double> eigenvalues = dense_eigenvalues(a, options.dense_cap);
    return rescale_with_spectrum(a, eigenvalues, lambda_max_estimate, options);
}

double power_iteration_lambda_max(const SparseHermitianMatrix& a, double rel_tol, int max_iterations) {
    const std::size_t n = a.dim();
    std::vector<Complex> x(n);
    std::vector<Complex> y(n);
    CounterStream start(0x5eed'c0de'0000'0001ull, 0);
    for (Complex& v : x) {
        v = Complex{2.0 * start.uniform() - 1.0, 0.0};
    }
    auto normalize = [](std::vector<Complex>& v) {
        double norm = 0.0;
        for (const Complex& c : v) {
            norm += std::norm(c);
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (Complex& c : v) {
                c /= norm;
            }
        }
        return norm;
    };
    normalize(x);

    double estimate = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        a.multiply(x, y);
        double rayleigh = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rayleigh += (std::conj(x[i]) * y[i]).real();
        }
        if (normalize(y) == 0.0) {
            return 0.0;
        }
        std::swap(x, y);
        if (it > 0 && std::abs(rayleigh - estimate) <= rel_tol * std::abs(rayleigh)) {
            return rayleigh;
        }
        estimate = rayleigh;
    }
    return estimate;
}

double estimate_lambda_max(const SparseHermitianMatrix& a) { return 1.01 * power_iteration_lambda_max(a, 1e-6); }

}  // namespace qss
