#include "isoclust/parallel.hpp"

#include <algorithm>

namespace isoclust {
namespace {

double fold_block(std::span<const double> values, std::size_t block) {
    const std::size_t begin = block * kReduceBlock;
    const std::size_t end = std::min(values.size(), begin + kReduceBlock);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += values[i];
    return acc;
}

MinResult min_block(std::span<const double> values, std::size_t block) {
    const std::size_t begin = block * kReduceBlock;
    const std::size_t end = std::min(values.size(), begin + kReduceBlock);
    MinResult best{values[begin], begin};
    for (std::size_t i = begin + 1; i < end; ++i)
        if (values[i] < best.value) best = {values[i], i};
    return best;
}

// Pairwise tree over block results; left operand always covers lower indices.
template <typename T, typename Combine>
T combine_levels(std::vector<T> level, Combine combine) {
    while (level.size() > 1) {
        std::vector<T> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(combine(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
    }
    return level.front();
}

double add(double a, double b) { return a + b; }

MinResult pick_min(const MinResult& left, const MinResult& right) {
    return right.value < left.value ? right : left;
}

std::size_t block_count(std::size_t n) { return (n + kReduceBlock - 1) / kReduceBlock; }

}  // namespace

MinResult min_reduce(std::span<const double> values, Executor& exec) {
    if (values.empty()) throw std::invalid_argument("min_reduce: empty input");
    std::vector<MinResult> partial(block_count(values.size()));
    exec.parallel_for(partial.size(), 8, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) partial[b] = min_block(values, b);
    });
    return combine_levels(std::move(partial), pick_min);
}

double sum_reduce(std::span<const double> values, Executor& exec) {
    if (values.empty()) throw std::invalid_argument("sum_reduce: empty input");
    std::vector<double> partial(block_count(values.size()));
    exec.parallel_for(partial.size(), 8, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) partial[b] = fold_block(values, b);
    });
    return combine_levels(std::move(partial), add);
}

double fixed_order_sum(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("fixed_order_sum: empty input");
    std::vector<double> partial(block_count(values.size()));
    for (std::size_t b = 0; b < partial.size(); ++b) partial[b] = fold_block(values, b);
    return combine_levels(std::move(partial), add);
}

}  // namespace isoclust
