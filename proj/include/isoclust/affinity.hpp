#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "isoclust/dataset.hpp"
#include "isoclust/executor.hpp"

namespace isoclust {

struct RootedTree;

/// Upper bound on n for the dense matrix: n * n still fits a signed 32-bit
/// integer. Memory is 8 n^2 bytes (about 17 GB at the cap).
inline constexpr std::size_t kMaxPoints = 46340;

/// Dense symmetric matrix of pairwise Euclidean distances.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> values;
    /// fixed_order_sum of each row, when known. Empty otherwise.
    std::vector<double> row_sums;

    double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * n, n}; }
};

/// Fills whole rows and their row sums. Throws std::length_error when n
/// exceeds kMaxPoints.
DistanceMatrix distance_matrix(const DataSet& data, Executor& exec);

/// Similarity carried by an edge of the given length.
inline double flow(double distance, double sigma) { return std::exp(-distance / sigma); }

/// Mean off-diagonal distance; the default scale for flow().
double mean_distance(const DistanceMatrix& dist, Executor& exec);

/// omega[i] = sum over j != i of flow(d[i][j], sigma). Each row is summed in
/// the canonical fixed order so results do not depend on worker count.
std::vector<double> vertex_weights(const DistanceMatrix& dist, double sigma, Executor& exec);

/// p[i] = alpha * sum_j d[i][j]; identically zero when alpha is zero.
std::vector<double> potentials(const DistanceMatrix& dist, double alpha, Executor& exec);

struct NodeWeights {
    std::vector<double> omega;
    std::vector<double> p;
    double sigma = 1.0;
    double alpha = 0.0;

    std::size_t size() const noexcept { return omega.size(); }
};

NodeWeights node_weights(const DistanceMatrix& dist, double sigma, double alpha, Executor& exec);

/// Sums and minima that seed the binary search. Flow terms range over the
/// n-1 tree edges; omega and p terms over all vertices.
struct Extrema {
    double phi_star_sum = 0.0;
    double phi_star_min = 0.0;
    double omega_star_sum = 0.0;
    double omega_star_min = 0.0;
    double p_star_sum = 0.0;
    double p_star_min = 0.0;

    bool operator==(const Extrema&) const = default;
};

Extrema extrema(const RootedTree& tree, const NodeWeights& weights, Executor& exec);

/// Debug dump, one CSV row per matrix row.
void write_distance_csv(std::ostream& out, const DistanceMatrix& dist);

}  // namespace isoclust
