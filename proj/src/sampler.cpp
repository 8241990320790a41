#include "qss/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "qss/error.hpp"

namespace qss {

std::vector<double> SampleString::lambda_tildes() const {
    std::vector<double> out(records.size());
    std::transform(records.begin(), records.end(), out.begin(), [](const SampleRecord& r) { return r.lambda_tilde; });
    return out;
}

SpectrumSampler::SpectrumSampler(const SpectrumInfo& spectrum, const QpeConfig& config) : config_(config) {
    require(spectrum.dim() >= 1, ErrorCode::DimensionError, "empty spectrum");
    samplers_.reserve(spectrum.dim());
    for (double lambda : spectrum.eigenvalues) {
        samplers_.emplace_back(lambda, config);
    }
}

SampleRecord SpectrumSampler::draw(CounterStream& stream) const {
    const auto j = static_cast<std::size_t>(stream.index(samplers_.size()));
    const Outcome o = samplers_[j].sample(stream);
    return {j, o.k, o.lambda_tilde, config_.m};
}

SampleRecord draw_sample(const SpectrumInfo& spectrum, const QpeConfig& config, CounterStream& stream) {
    require(spectrum.dim() >= 1, ErrorCode::DimensionError, "empty spectrum");
    const auto j = static_cast<std::size_t>(stream.index(spectrum.dim()));
    const Outcome o = sample_outcome(spectrum.eigenvalues[j], config, stream);
    return {j, o.k, o.lambda_tilde, config.m};
}

std::vector<SampleRecord> draw_records(const SpectrumSampler& sampler, std::uint64_t seed, std::uint64_t first,
                                       std::uint64_t last, const BatchOptions& options) {
    require(last >= first, ErrorCode::InvalidN, "record range is reversed");
    const std::size_t count = static_cast<std::size_t>(last - first);
    std::vector<SampleRecord> out(count);
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CounterStream stream(seed, first + i);
            out[i] = sampler.draw(stream);
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(count / 1024, 1));
    if (threads <= 1) {
        fill(0, count);
        return out;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin < end) {
            workers.emplace_back(fill, begin, end);
        }
    }
    return out;
}

SampleString draw_batch(const SpectrumInfo& spectrum, const QpeConfig& config, std::size_t count, std::uint64_t seed,
                        const BatchOptions& options) {
    require(count >= 1, ErrorCode::InvalidN, "batch size N must be at least 1");
    const SpectrumSampler sampler(spectrum, config);
    SampleString out;
    out.n = spectrum.dim();
    out.seed = seed;
    out.mode = config.mode;
    out.records = draw_records(sampler, seed, 0, count, options);
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    const PhiloxBlock block = philox4x32_10(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0xa5a5a5a5u, 0x3c3c3c3cu},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    return (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
}

void write_sample_dump(const SampleString& samples, std::ostream& out) {
    for (const SampleRecord& r : samples.records) {
        out << r.eigen_index << ',' << r.outcome << ',' << r.m_used << ',' << to_string(samples.mode) << '\n';
    }
}

SampleString read_sample_dump(std::istream& in, std::size_t n, std::uint64_t seed) {
    SampleString out;
    out.n = n;
    out.seed = seed;
    std::string line;
    std::size_t line_no = 0;
    bool have_mode = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        std::string j, k, m, mode;
        const bool ok = std::getline(ss, j, ',') && std::getline(ss, k, ',') && std::getline(ss, m, ',') &&
                        std::getline(ss, mode);
        require(ok, ErrorCode::ParseError, "sample dump line " + std::to_string(line_no) + " is malformed");
        SampleRecord r;
        try {
            r.eigen_index = std::stoull(j);
            r.outcome = std::stoull(k);
            r.m_used = std::stoi(m);
        } catch (const std::exception&) {
            fail(ErrorCode::ParseError, "sample dump line " + std::to_string(line_no) + " is malformed");
        }
        require(r.m_used >= 1 && r.m_used <= kMaxPointerQubits && r.outcome < (std::uint64_t{1} << r.m_used),
                ErrorCode::ParseError, "sample dump line " + std::to_string(line_no) + " has an invalid outcome");
        require(r.eigen_index < n, ErrorCode::DimensionError,
                "sample dump line " + std::to_string(line_no) + " has an eigen index out of range");
        r.lambda_tilde = std::ldexp(static_cast<double>(r.outcome), -r.m_used);
        const QpeMode parsed = parse_mode(mode);
        require(!have_mode || parsed == out.mode, ErrorCode::ParseError, "sample dump mixes modes");
        out.mode = parsed;
        have_mode = true;
        out.records.push_back(r);
    }
    return out;
}

}  // namespace qss
