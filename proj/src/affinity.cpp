#include "isoclust/affinity.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

#include "isoclust/parallel.hpp"
#include "isoclust/tree.hpp"

namespace isoclust {
namespace {

constexpr std::size_t kRowGrain = 16;

double row_sum(const DistanceMatrix& dist, std::size_t i) {
    return dist.row_sums.size() == dist.n ? dist.row_sums[i] : fixed_order_sum(dist.row(i));
}

}  // namespace

DistanceMatrix distance_matrix(const DataSet& data, Executor& exec) {
    const std::size_t n = data.n;
    if (n > kMaxPoints)
        throw std::length_error("distance_matrix: n = " + std::to_string(n) + " exceeds the dense cap of " +
                                std::to_string(kMaxPoints));
    DistanceMatrix dist;
    dist.n = n;
    dist.values.assign(n * n, 0.0);
    dist.row_sums.assign(n, 0.0);
    exec.parallel_for(n, kRowGrain, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto xi = data.row(i);
            // Whole rows, written contiguously. (a - b)^2 == (b - a)^2 exactly,
            // so the matrix stays bitwise symmetric.
            double* out = dist.values.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                const auto xj = data.row(j);
                double acc = 0.0;
                for (std::size_t c = 0; c < data.d; ++c) {
                    const double diff = xi[c] - xj[c];
                    acc += diff * diff;
                }
                out[j] = std::sqrt(acc);
            }
            dist.row_sums[i] = fixed_order_sum(dist.row(i));
        }
    });
    return dist;
}

double mean_distance(const DistanceMatrix& dist, Executor& exec) {
    const std::size_t n = dist.n;
    if (n < 2) throw std::invalid_argument("mean_distance: need at least 2 points");
    std::vector<double> row_sums(n);
    exec.parallel_for(n, kRowGrain, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) row_sums[i] = row_sum(dist, i);
    });
    return sum_reduce(row_sums, exec) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<double> vertex_weights(const DistanceMatrix& dist, double sigma, Executor& exec) {
    if (!(sigma > 0.0)) throw std::invalid_argument("vertex_weights: sigma must be positive");
    const std::size_t n = dist.n;
    std::vector<double> omega(n);
    exec.parallel_for(n, kRowGrain, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> flows(n);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto row = dist.row(i);
            for (std::size_t j = 0; j < n; ++j) flows[j] = j == i ? 0.0 : flow(row[j], sigma);
            omega[i] = fixed_order_sum(flows);
        }
    });
    return omega;
}

std::vector<double> potentials(const DistanceMatrix& dist, double alpha, Executor& exec) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("potentials: alpha must be nonnegative");
    std::vector<double> p(dist.n, 0.0);
    if (alpha == 0.0) return p;
    exec.parallel_for(dist.n, kRowGrain, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) p[i] = alpha * row_sum(dist, i);
    });
    return p;
}

NodeWeights node_weights(const DistanceMatrix& dist, double sigma, double alpha, Executor& exec) {
    NodeWeights w;
    w.omega = vertex_weights(dist, sigma, exec);
    w.p = potentials(dist, alpha, exec);
    w.sigma = sigma;
    w.alpha = alpha;
    return w;
}

Extrema extrema(const RootedTree& tree, const NodeWeights& weights, Executor& exec) {
    const std::size_t n = tree.size();
    if (weights.omega.size() != n || weights.p.size() != n)
        throw std::invalid_argument("extrema: tree and weights disagree on n");
    if (n < 2) throw std::invalid_argument("extrema: tree needs at least one edge");
    std::vector<double> edge_flows;
    edge_flows.reserve(n - 1);
    for (std::size_t v = 0; v < n; ++v)
        if (v != tree.root) edge_flows.push_back(tree.parent_flow[v]);

    Extrema e;
    e.phi_star_sum = sum_reduce(edge_flows, exec);
    e.phi_star_min = min_reduce(edge_flows, exec).value;
    e.omega_star_sum = sum_reduce(weights.omega, exec);
    e.omega_star_min = min_reduce(weights.omega, exec).value;
    e.p_star_sum = sum_reduce(weights.p, exec);
    e.p_star_min = min_reduce(weights.p, exec).value;
    return e;
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& dist) {
    DataSet view{dist.n, dist.n, dist.values};
    write_points(out, view, TextFormat::csv);
}

}  // namespace isoclust
