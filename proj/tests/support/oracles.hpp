#pragma once

// Test-only reference implementations. None of these share code paths with
// the library routines they are used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "isoclust/affinity.hpp"
#include "isoclust/dataset.hpp"
#include "isoclust/isoperim.hpp"
#include "isoclust/tree.hpp"

namespace isoclust::testing {

/// Neumaier-compensated summation.
inline double compensated_sum(std::span<const double> xs) {
    double sum = 0.0, c = 0.0;
    for (const double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

struct WeightedEdge {
    double w;
    std::size_t a, b;
};

/// Textbook Kruskal with union-find on the complete graph of `dist`.
/// Returns the sorted list of chosen edge weights.
inline std::vector<double> kruskal_edge_weights(const DistanceMatrix& dist) {
    const std::size_t n = dist.n;
    std::vector<WeightedEdge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({dist(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) { return x.w < y.w; });
    std::vector<std::size_t> up(n);
    std::iota(up.begin(), up.end(), 0);
    auto find = [&](std::size_t x) {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    };
    std::vector<double> chosen;
    for (const auto& e : edges) {
        const auto ra = find(e.a), rb = find(e.b);
        if (ra == rb) continue;
        up[ra] = rb;
        chosen.push_back(e.w);
    }
    return chosen;
}

inline std::vector<double> tree_edge_weights(const RootedTree& tree, const DistanceMatrix& dist) {
    std::vector<double> w;
    for (std::size_t v = 0; v < tree.size(); ++v)
        if (tree.parent[v] != kNoVertex) w.push_back(dist(v, tree.parent[v]));
    std::sort(w.begin(), w.end());
    return w;
}

/// Sum of a sorted weight list, left to right.
inline double ordered_total(const std::vector<double>& sorted) {
    double t = 0.0;
    for (const double x : sorted) t += x;
    return t;
}

/// Uniformly random labeled tree shape: vertex v > 0 hangs off a uniform
/// earlier vertex, then vertex labels are shuffled and a random root kept.
inline RootedTree random_tree(std::size_t n, std::mt19937_64& rng, double flow_lo = 0.0, double flow_hi = 1.0) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> parent(n, kNoVertex);
    std::vector<double> flow(n, 0.0);
    std::uniform_real_distribution<double> f(flow_lo, flow_hi);
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t up = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        parent[perm[i]] = perm[up];
        double x = f(rng);
        while (x <= flow_lo) x = f(rng);  // keep flows in (lo, hi]
        flow[perm[i]] = x;
    }
    return make_rooted_tree(std::move(parent), std::move(flow));
}

/// Random point cloud in the unit cube.
inline DataSet random_points(std::size_t n, std::size_t d, std::mt19937_64& rng) {
    DataSet data;
    data.n = n;
    data.d = d;
    data.points.resize(n * d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& x : data.points) x = u(rng);
    return data;
}

/// Sequential, single-threaded reference for the decision rule: literal
/// transcription of the per-vertex branch tests in bfs order, tracking the
/// member sets explicitly rather than through eta.
struct ReferenceDecision {
    bool feasible = false;
    std::vector<std::vector<std::size_t>> clusters;
};

inline ReferenceDecision reference_decide(const RootedTree& tree, const NodeWeights& w, std::size_t k, double N) {
    const std::size_t n = tree.size();
    std::vector<double> omega = w.omega, p = w.p;
    std::vector<std::vector<std::size_t>> group(n);
    for (std::size_t v = 0; v < n; ++v) group[v] = {v};
    ReferenceDecision out;
    for (const std::size_t v : tree.bfs_order) {
        if (out.clusters.size() == k) break;
        const bool root = v == tree.root;
        const double f = root ? 0.0 : tree.parent_flow[v];
        if (f + p[v] <= N * omega[v]) {
            out.clusters.push_back(group[v]);
            if (!root) p[tree.parent[v]] += f;
        } else if (!root && p[v] - f < N * omega[v]) {
            auto& up = group[tree.parent[v]];
            up.insert(up.end(), group[v].begin(), group[v].end());
            omega[tree.parent[v]] += omega[v];
            p[tree.parent[v]] += p[v];
        } else if (!root) {
            p[tree.parent[v]] += f;
        }
    }
    out.feasible = out.clusters.size() == k;
    return out;
}

}  // namespace isoclust::testing
