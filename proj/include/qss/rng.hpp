#pragma once

// Counter-based random streams built on Philox4x32-10
// (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011).
//
// A stream is addressed by (seed, stream index). Every stream is an
// independent, replayable sequence: record l of a batch reads only stream l,
// so batches can be generated in any order or in parallel.

#include <array>
#include <cstdint>

namespace qss {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) noexcept {
    constexpr std::uint32_t kMulA = 0xD2511F53u;
    constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    constexpr std::uint32_t kWeylB = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

/// Sequential view over one Philox substream. Cheap to copy; copies replay
/// the same values.
class CounterStream {
  public:
    CounterStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream_index) {}

    std::uint64_t next_u64() noexcept {
        if (cursor_ >= 2) {
            refill();
        }
        const std::uint64_t lo = buffer_[2 * cursor_];
        const std::uint64_t hi = buffer_[2 * cursor_ + 1];
        ++cursor_;
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform_open_zero() noexcept { return 1.0 - uniform(); }

    /// Unbiased integer in [0, n) by rejection; n must be positive.
    std::uint64_t index(std::uint64_t n) noexcept {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) {
            x = next_u64();
        }
        return x % n;
    }

    [[nodiscard]] std::uint64_t stream_index() const noexcept { return stream_; }

  private:
    void refill() noexcept {
        const PhiloxBlock ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                              static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        buffer_ = philox4x32_10(ctr, key_);
        ++block_;
        cursor_ = 0;
    }

    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    PhiloxBlock buffer_{};
    int cursor_ = 2;
};

}  // namespace qss
