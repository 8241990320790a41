#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qss/matrix.hpp"
#include "qss/qpe.hpp"
#include "qss/rng.hpp"

namespace qss {

/// One spectral-sampling outcome: the eigen index j drawn from the fully
/// mixed state and the pointer readout k for lambda_j.
///
/// eigen_index is hidden ground truth kept for verification; estimators only
/// read lambda_tilde.
struct SampleRecord {
    std::size_t eigen_index = 0;
    std::uint64_t outcome = 0;
    double lambda_tilde = 0.0;  // outcome / 2^m_used, exact
    int m_used = 0;

    friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct SampleString {
    std::vector<SampleRecord> records;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    QpeMode mode = QpeMode::FullDistribution;

    [[nodiscard]] std::size_t size() const noexcept { return records.size(); }
    [[nodiscard]] std::vector<double> lambda_tildes() const;

    friend bool operator==(const SampleString&, const SampleString&) = default;
};

/// Pointer samplers for every eigenvalue of a spectrum, built once per batch.
class SpectrumSampler {
  public:
    SpectrumSampler(const SpectrumInfo& spectrum, const QpeConfig& config);

    SampleRecord draw(CounterStream& stream) const;
    [[nodiscard]] const QpeConfig& config() const noexcept { return config_; }

  private:
    QpeConfig config_;
    std::vector<PointerSampler> samplers_;
};

SampleRecord draw_sample(const SpectrumInfo& spectrum, const QpeConfig& config, CounterStream& stream);

struct BatchOptions {
    unsigned threads = 1;
};

/// Records [first, last) of the batch keyed by seed; record l reads only
/// substream (seed, l), so the result does not depend on the thread count.
std::vector<SampleRecord> draw_records(const SpectrumSampler& sampler, std::uint64_t seed, std::uint64_t first,
                                       std::uint64_t last, const BatchOptions& options = {});

SampleString draw_batch(const SpectrumInfo& spectrum, const QpeConfig& config, std::size_t count, std::uint64_t seed,
                        const BatchOptions& options = {});

/// Independent seed for a numbered sub-run (e.g. a restart pass).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Line-delimited "j,k,m,mode" records.
void write_sample_dump(const SampleString& samples, std::ostream& out);
SampleString read_sample_dump(std::istream& in, std::size_t n, std::uint64_t seed);

}  // namespace qss
