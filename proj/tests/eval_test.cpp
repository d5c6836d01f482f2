#include "isoclust/eval.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace isoclust {
namespace {

ClassLabels classes(std::vector<int> labels) {
    ClassLabels c;
    c.class_count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    c.labels = std::move(labels);
    return c;
}

double brute_assignment_cost(const std::vector<double>& cost, std::size_t size) {
    std::vector<std::size_t> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
        double c = 0.0;
        for (std::size_t r = 0; r < size; ++r) c += cost[r * size + perm[r]];
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

TEST(MisclassificationTest, Examples) {
    const std::vector<std::size_t> pred{1, 1, 2, 2};
    EXPECT_DOUBLE_EQ(misclassification_rate(pred, classes({0, 0, 0, 1})), 0.25);
    const std::vector<std::size_t> residual{0, 0, 0};
    EXPECT_DOUBLE_EQ(misclassification_rate(residual, classes({0, 1, 2})), 1.0);
    const std::vector<std::size_t> perfect{2, 2, 1, 3};
    EXPECT_DOUBLE_EQ(misclassification_rate(perfect, classes({0, 0, 1, 2})), 0.0);
    const std::vector<std::size_t> partial{1, 0, 2};
    EXPECT_DOUBLE_EQ(misclassification_rate(partial, classes({0, 0, 1})), 1.0 / 3.0);
    EXPECT_THROW(misclassification_rate(pred, classes({0, 1})), std::invalid_argument);
}

TEST(MisclassificationTest, InvariantUnderRelabeling) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 60, k = 4;
        std::vector<std::size_t> pred(n);
        std::vector<int> truth(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = std::uniform_int_distribution<std::size_t>(0, k)(rng);
            truth[i] = std::uniform_int_distribution<int>(0, 2)(rng);
        }
        truth[0] = 2;
        std::vector<std::size_t> perm{0, 1, 2, 3, 4};
        std::shuffle(perm.begin() + 1, perm.end(), rng);
        std::vector<std::size_t> renamed(n);
        for (std::size_t i = 0; i < n; ++i) renamed[i] = perm[pred[i]];
        ASSERT_DOUBLE_EQ(misclassification_rate(pred, classes(truth)), misclassification_rate(renamed, classes(truth)));
    }
}

TEST(AssignmentTest, MatchesPermutationSearch) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t size = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
        std::vector<double> cost(size * size);
        for (auto& c : cost) c = trial % 3 == 0 ? std::round(u(rng)) : u(rng);
        const auto a = optimal_assignment(cost, size);
        std::vector<std::size_t> sorted = a;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < size; ++i) ASSERT_EQ(sorted[i], i);
        double got = 0.0;
        for (std::size_t r = 0; r < size; ++r) got += cost[r * size + a[r]];
        ASSERT_NEAR(got, brute_assignment_cost(cost, size), 1e-9);
    }
    EXPECT_THROW(optimal_assignment(std::vector<double>(5), 2), std::invalid_argument);
}

TEST(BenchCsvTest, HeaderAndRows) {
    BenchRecord ok;
    ok.dataset = "blobs";
    ok.n = 10;
    ok.d = 2;
    ok.k = 3;
    ok.engine = Engine::parallel;
    ok.workers = 4;
    ok.timings = {1.5, 0.5, 0.25, 2.25};
    ok.miso = 0.125;
    ok.misclassification = 0.1;
    BenchRecord failed = ok;
    failed.error = "too large";
    failed.misclassification.reset();
    const std::vector<BenchRecord> rows{ok, failed};
    std::ostringstream out;
    write_bench_csv(out, rows);
    EXPECT_EQ(out.str(), std::string(kBenchCsvHeader) +
                             "\nblobs,10,2,3,parallel,4,1.5,0.5,0.25,2.25,0.125,0.1\n"
                             "blobs,10,2,3,parallel,4,,,,,,\n");
}

TEST(BenchmarkTest, SmallPlanProducesOneRecordPerEngine) {
    BenchPlan plan;
    plan.sizes = {40};
    plan.dims = {2};
    plan.ks = {2};
    plan.workers = 2;
    plan.repetitions = 1;
    const auto records = benchmark(plan);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_TRUE(records[0].error.empty());
    EXPECT_EQ(records[0].miso, records[1].miso);
    EXPECT_TRUE(records[0].misclassification.has_value());
    plan.sizes.clear();
    EXPECT_THROW(benchmark(plan), std::invalid_argument);
}

TEST(LogLogSlopeTest, PowerLaws) {
    const std::vector<double> x{1024, 2048, 4096, 8192};
    std::vector<double> quad, lin;
    for (const double v : x) {
        quad.push_back(3.0 * v * v);
        lin.push_back(0.5 * v);
    }
    EXPECT_NEAR(loglog_slope(x, quad), 2.0, 1e-12);
    EXPECT_NEAR(loglog_slope(x, lin), 1.0, 1e-12);
    EXPECT_THROW(loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
}

}  // namespace
}  // namespace isoclust
