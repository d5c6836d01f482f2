#include "isoclust/parallel.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <bit>
#include <random>

#include "support/oracles.hpp"

namespace isoclust {
namespace {

TEST(ExecutorTest, ParallelForVisitsEveryIndexOnce) {
    for (const std::size_t workers : {1, 2, 5}) {
        Executor exec(workers);
        std::vector<std::atomic<int>> hits(10007);
        exec.parallel_for(hits.size(), 3, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) hits[i].fetch_add(1);
        });
        for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
    }
}

TEST(ExecutorTest, RethrowsWorkerException) {
    Executor exec(3);
    EXPECT_THROW(exec.parallel_for(1000, 1,
                                   [](std::size_t lo, std::size_t hi) {
                                       for (std::size_t i = lo; i < hi; ++i)
                                           if (i == 777) throw std::runtime_error("boom");
                                   }),
                 std::runtime_error);
    // Still usable afterwards.
    std::atomic<std::size_t> total{0};
    exec.parallel_for(100, 1, [&](std::size_t lo, std::size_t hi) { total += hi - lo; });
    EXPECT_EQ(total.load(), 100u);
}

TEST(MinReduceTest, SmallestIndexWinsTies) {
    Executor exec(2);
    const std::vector<double> v{5, 2, 9, 2};
    EXPECT_EQ(min_reduce(v, exec), (MinResult{2.0, 1}));
    const std::vector<double> one{7};
    EXPECT_EQ(min_reduce(one, exec), (MinResult{7.0, 0}));
    EXPECT_THROW(min_reduce(std::span<const double>{}, exec), std::invalid_argument);
}

TEST(MinReduceTest, MatchesLinearScan) {
    std::mt19937_64 rng(11);
    Executor e1(1), e3(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5000)(rng);
        std::vector<double> v(n);
        // Few distinct values so ties are common.
        std::uniform_int_distribution<int> pick(0, 20);
        for (auto& x : v) x = pick(rng) * 0.5;
        MinResult expected{v[0], 0};
        for (std::size_t i = 1; i < n; ++i)
            if (v[i] < expected.value) expected = {v[i], i};
        ASSERT_EQ(min_reduce(v, e1), expected);
        ASSERT_EQ(min_reduce(v, e3), expected);
    }
}

TEST(SumReduceTest, ExactSmallCases) {
    Executor exec(2);
    const std::vector<double> v{1, 2, 3, 4};
    EXPECT_EQ(sum_reduce(v, exec), 10.0);
    const std::vector<double> one{0.1};
    EXPECT_EQ(sum_reduce(one, exec), 0.1);
    EXPECT_THROW(sum_reduce(std::span<const double>{}, exec), std::invalid_argument);
}

TEST(SumReduceTest, MillionUniformsAgreeWithCompensatedSum) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(1'000'000);
    for (auto& x : v) x = u(rng);
    const double oracle = testing::compensated_sum(v);
    Executor exec(4);
    const double got = sum_reduce(v, exec);
    EXPECT_LE(std::abs(got - oracle), 1e-9 * std::abs(oracle));
}

TEST(SumReduceTest, BitIdenticalAcrossWorkerCounts) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (const std::size_t n : {1u, 255u, 256u, 257u, 10000u, 99991u}) {
        std::vector<double> v(n);
        for (auto& x : v) x = u(rng);
        const double ref = fixed_order_sum(v);
        for (const std::size_t w : {1, 2, 3, 8}) {
            Executor exec(w);
            ASSERT_EQ(std::bit_cast<std::uint64_t>(sum_reduce(v, exec)), std::bit_cast<std::uint64_t>(ref))
                << "n=" << n << " workers=" << w;
        }
    }
}

TEST(ExclusiveScanTest, Definition) {
    Executor exec(2);
    const std::vector<int> v{1, 0, 1, 1};
    EXPECT_EQ(exclusive_scan(v, exec), (std::vector<std::size_t>{0, 1, 1, 2}));
    const std::vector<int> zeros(9, 0);
    EXPECT_EQ(exclusive_scan(zeros, exec), std::vector<std::size_t>(9, 0));
    EXPECT_TRUE(exclusive_scan(std::vector<int>{}, exec).empty());
}

TEST(ExclusiveScanTest, RandomBitsMatchSequentialPrefixSum) {
    std::mt19937_64 rng(3);
    std::bernoulli_distribution bit(0.3);
    std::vector<std::uint8_t> v(100'000);
    for (auto& b : v) b = bit(rng);
    std::vector<std::size_t> expected(v.size());
    std::size_t acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        expected[i] = acc;
        acc += v[i];
    }
    for (const std::size_t w : {1, 2, 4}) {
        Executor exec(w);
        ASSERT_EQ(exclusive_scan(v, exec), expected);
    }
}

}  // namespace
}  // namespace isoclust
