#pragma once

#include <cstddef>
#include <span>

namespace qss {

/// Pairwise summation with a fixed split order, so partial sums computed in
/// parallel reduce to the same bits as a serial pass.
inline double pairwise_sum(std::span<const double> values) noexcept {
    constexpr std::size_t kBlock = 32;
    if (values.size() <= kBlock) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace qss
