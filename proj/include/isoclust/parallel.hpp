#pragma once

// Deterministic data-parallel primitives.
//
// Every primitive fixes its association order up front, independent of the
// executor's worker count: the input is cut into fixed-size blocks, each
// block is folded left to right, and block results are combined pairwise
// ((b0 b1) (b2 b3)) ... level by level, an odd tail being carried up
// unchanged. Worker count only decides which thread folds which block.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "isoclust/executor.hpp"

namespace isoclust {

inline constexpr std::size_t kReduceBlock = 256;
inline constexpr std::size_t kScanBlock = 4096;

struct MinResult {
    double value;
    std::size_t index;

    bool operator==(const MinResult&) const = default;
};

/// Minimum value and the smallest index attaining it.
MinResult min_reduce(std::span<const double> values, Executor& exec);

/// Sum in the fixed blocked/pairwise association order described above.
double sum_reduce(std::span<const double> values, Executor& exec);

/// Single-threaded evaluation of the exact same association as sum_reduce.
/// Used where a caller already parallelizes at a coarser level (one row per
/// task) but still needs the canonical rounding.
double fixed_order_sum(std::span<const double> values);

/// out[0] = 0, out[i] = in[0] + ... + in[i-1]. Two-pass blocked scan:
/// block totals in parallel, a scan over the totals, then per-block local
/// scans seeded with their offsets.
template <typename T>
std::vector<std::size_t> exclusive_scan(std::span<const T> in, Executor& exec) {
    static_assert(std::is_integral_v<T>);
    const std::size_t n = in.size();
    std::vector<std::size_t> out(n);
    if (n == 0) return out;
    const std::size_t blocks = (n + kScanBlock - 1) / kScanBlock;
    std::vector<std::size_t> totals(blocks);
    exec.parallel_for(blocks, 1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            const std::size_t end = std::min(n, (b + 1) * kScanBlock);
            std::size_t acc = 0;
            for (std::size_t i = b * kScanBlock; i < end; ++i) acc += static_cast<std::size_t>(in[i]);
            totals[b] = acc;
        }
    });
    std::size_t running = 0;
    for (auto& t : totals) {
        const std::size_t here = t;
        t = running;
        running += here;
    }
    exec.parallel_for(blocks, 1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            const std::size_t end = std::min(n, (b + 1) * kScanBlock);
            std::size_t acc = totals[b];
            for (std::size_t i = b * kScanBlock; i < end; ++i) {
                out[i] = acc;
                acc += static_cast<std::size_t>(in[i]);
            }
        }
    });
    return out;
}

template <typename T>
std::vector<std::size_t> exclusive_scan(const std::vector<T>& in, Executor& exec) {
    return exclusive_scan(std::span<const T>(in), exec);
}

}  // namespace isoclust
