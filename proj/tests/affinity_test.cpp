#include "isoclust/affinity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isoclust/parallel.hpp"
#include "isoclust/tree.hpp"
#include "support/oracles.hpp"

namespace isoclust {
namespace {

DataSet line(std::vector<double> xs) {
    DataSet d;
    d.n = xs.size();
    d.d = 1;
    d.points = std::move(xs);
    return d;
}

TEST(DistanceMatrixTest, OneDimensionalExample) {
    Executor exec(2);
    const auto m = distance_matrix(line({0, 1, 3}), exec);
    EXPECT_EQ(m.values, (std::vector<double>{0, 1, 3, 1, 0, 2, 3, 2, 0}));
}

TEST(DistanceMatrixTest, CoincidentPointsAndZeroDiagonal) {
    Executor exec(1);
    DataSet data{2, 3, {1, 2, 3, 1, 2, 3}};
    const auto m = distance_matrix(data, exec);
    EXPECT_EQ(m(0, 1), 0.0);
    EXPECT_EQ(m(0, 0), 0.0);
    EXPECT_EQ(m(1, 1), 0.0);
}

TEST(DistanceMatrixTest, SymmetricMetricAndWorkerIndependent) {
    std::mt19937_64 rng(1);
    const auto data = testing::random_points(120, 6, rng);
    Executor e1(1), e4(4);
    const auto a = distance_matrix(data, e1);
    const auto b = distance_matrix(data, e4);
    EXPECT_EQ(a.values, b.values);
    std::uniform_int_distribution<std::size_t> pick(0, data.n - 1);
    for (int t = 0; t < 5000; ++t) {
        const auto i = pick(rng), j = pick(rng), k = pick(rng);
        ASSERT_EQ(a(i, j), a(j, i));
        ASSERT_LE(a(i, k), a(i, j) + a(j, k) + 1e-12);
    }
}

TEST(DistanceMatrixTest, CachedRowSumsMatchRecomputation) {
    std::mt19937_64 rng(5);
    Executor exec(2);
    const auto with_sums = distance_matrix(testing::random_points(300, 3, rng), exec);
    ASSERT_EQ(with_sums.row_sums.size(), 300u);
    for (std::size_t i = 0; i < 300; ++i) ASSERT_EQ(with_sums.row_sums[i], fixed_order_sum(with_sums.row(i)));
    const DistanceMatrix bare{with_sums.n, with_sums.values, {}};
    EXPECT_EQ(mean_distance(bare, exec), mean_distance(with_sums, exec));
    EXPECT_EQ(potentials(bare, 0.5, exec), potentials(with_sums, 0.5, exec));
}

TEST(DistanceMatrixTest, RejectsSizesBeyondCap) {
    Executor exec(1);
    DataSet data;
    data.n = kMaxPoints + 1;
    data.d = 1;
    data.points.assign(data.n, 0.0);
    EXPECT_THROW(distance_matrix(data, exec), std::length_error);
}

TEST(FlowTest, AnalyticValues) {
    EXPECT_EQ(flow(0.0, 1.0), 1.0);
    EXPECT_NEAR(flow(1.0, 1.0), 0.36787944117144233, 1e-15);
    EXPECT_EQ(flow(2.0, 2.0), flow(1.0, 1.0));
}

TEST(FlowTest, StrictlyDecreasing) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int t = 0; t < 1000; ++t) {
        double a = u(rng), b = u(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        ASSERT_GT(flow(a, 1.3), flow(b, 1.3));
    }
}

TEST(VertexWeightsTest, SelfTermExcluded) {
    Executor exec(1);
    EXPECT_EQ(vertex_weights(distance_matrix(line({4, 4}), exec), 0.7, exec), (std::vector<double>{1, 1}));
    EXPECT_EQ(vertex_weights(distance_matrix(line({4, 4, 4}), exec), 2.0, exec), (std::vector<double>{2, 2, 2}));
}

TEST(VertexWeightsTest, LogTwoSpacing) {
    // exp(-ln 2 / 1) = 1/2 for each point's single neighbour.
    Executor exec(1);
    const auto w = vertex_weights(distance_matrix(line({0, std::log(2.0)}), exec), 1.0, exec);
    EXPECT_NEAR(w[0], 0.5, 1e-15);
    EXPECT_NEAR(w[1], 0.5, 1e-15);
}

TEST(VertexWeightsTest, BoundedAndParallelMatchesSequentialSum) {
    std::mt19937_64 rng(3);
    const auto data = testing::random_points(700, 4, rng);
    Executor e1(1), e3(3);
    const auto dist = distance_matrix(data, e1);
    const auto a = vertex_weights(dist, 0.4, e1);
    const auto b = vertex_weights(dist, 0.4, e3);
    EXPECT_EQ(a, b);
    for (std::size_t i = 0; i < data.n; ++i) {
        double plain = 0.0;
        for (std::size_t j = 0; j < data.n; ++j)
            if (j != i) plain += std::exp(-dist(i, j) / 0.4);
        ASSERT_NEAR(b[i], plain, 1e-9 * plain);
        ASSERT_GT(b[i], 0.0);
        ASSERT_LE(b[i], static_cast<double>(data.n - 1));
    }
}

TEST(PotentialsTest, ExamplesAndHomogeneity) {
    Executor exec(2);
    const auto dist = distance_matrix(line({0, 1, 3}), exec);
    EXPECT_EQ(potentials(dist, 0.0, exec), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(potentials(dist, 1.0, exec), (std::vector<double>{4, 3, 5}));
    EXPECT_EQ(potentials(dist, 2.0, exec), (std::vector<double>{8, 6, 10}));
    EXPECT_THROW(potentials(dist, -1.0, exec), std::invalid_argument);
}

TEST(MeanDistanceTest, OffDiagonalMean) {
    Executor exec(1);
    EXPECT_DOUBLE_EQ(mean_distance(distance_matrix(line({0, 1, 3}), exec), exec), 2.0);
}

TEST(ExtremaTest, PathTree) {
    Executor exec(1);
    // a=0, b=1, c=2 rooted at c; phi(ab) = 1, phi(bc) = 0.1.
    const auto tree = make_rooted_tree({1, 2, kNoVertex}, {1.0, 0.1, 0.0});
    NodeWeights w{{1, 1, 1}, {0, 0, 0}, 1.0, 0.0};
    const auto e = extrema(tree, w, exec);
    EXPECT_DOUBLE_EQ(e.phi_star_sum, 1.1);
    EXPECT_EQ(e.phi_star_min, 0.1);
    EXPECT_EQ(e.omega_star_sum, 3.0);
    EXPECT_EQ(e.omega_star_min, 1.0);
    EXPECT_EQ(e.p_star_sum, 0.0);
    EXPECT_EQ(e.p_star_min, 0.0);
}

TEST(ExtremaTest, SingleEdgeAndUniformOmega) {
    Executor exec(1);
    const auto tree = make_rooted_tree({kNoVertex, 0}, {0.0, 0.37});
    NodeWeights w{{2.5, 2.5}, {0, 0}, 1.0, 0.0};
    const auto e = extrema(tree, w, exec);
    EXPECT_EQ(e.phi_star_sum, 0.37);
    EXPECT_EQ(e.phi_star_min, 0.37);
    EXPECT_EQ(e.omega_star_sum, 5.0);
    EXPECT_EQ(e.omega_star_min, 2.5);
}

}  // namespace
}  // namespace isoclust
