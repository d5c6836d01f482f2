#pragma once

// Sequential solver for the k-subpartition isoperimetric problem on a
// weighted rooted tree.
//
// A k-subpartition is k disjoint nonempty vertex sets that need not cover
// the tree. The cost of one is the largest normalized sparsity
// (boundary flow + p(A)) / omega(A) over its sets; the solver finds the
// minimum cost by bisecting on a threshold N with an exact bottom-up
// decision procedure.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "isoclust/affinity.hpp"
#include "isoclust/executor.hpp"
#include "isoclust/tree.hpp"

namespace isoclust {

/// Witness of one threshold test.
///
/// cut[v] is 1 iff v seeded a cluster. eta[v] is the cut vertex heading the
/// cluster v was merged into, or kNoVertex for residual vertices.
/// cluster_sparsities lists the bookkept sparsity of each cluster in the
/// order the clusters were found.
struct DecisionOutcome {
    bool feasible = false;
    std::size_t clusters_found = 0;
    std::vector<std::uint8_t> cut;
    std::vector<std::size_t> eta;
    std::vector<double> cluster_sparsities;

    bool operator==(const DecisionOutcome&) const = default;
};

struct MisoResult {
    double miso = 0.0;
    /// 1..k for clustered vertices, 0 for residual ones.
    std::vector<std::size_t> labels;
    DecisionOutcome outcome;
    std::size_t iterations = 0;
    double alpha_final = 0.0;
    double beta_final = 0.0;

    bool operator==(const MisoResult&) const = default;
};

/// Thrown when no k-subpartition exists under the search bracket.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Is there a k-subpartition of cost at most `threshold`?
///
/// Visits tree.bfs_order. A non-root vertex x with parent u and parent-edge
/// flow f, carrying the merged weight w and potential q of its group:
///   cut      if f + q <= N w   (new cluster; q(u) += f)
///   join     if q - f < N w    (w(u) += w, q(u) += q)
///   discard  otherwise         (q(u) += f)
/// The root is visited last with f = 0 and can only be cut or discarded.
/// Stops as soon as k clusters exist. Inputs are copied, never mutated.
DecisionOutcome decide(const RootedTree& tree, const NodeWeights& weights, std::size_t k, double threshold);

/// Resolves per-vertex join targets into eta, visiting parents before
/// children. Shared by both engines.
std::vector<std::size_t> resolve_eta(const RootedTree& tree, std::span<const std::uint8_t> cut,
                                     std::span<const std::size_t> joined_to);

/// Initial bracket and minimum step count of the bisection.
struct SearchBracket {
    double alpha0 = 0.0;
    double beta0 = 0.0;
    std::size_t iterations = 1;
};

inline constexpr std::size_t kMaxBisectionSteps = 128;

/// alpha0 = (phi_min + p_min) / omega_sum, beta0 = (phi_sum + p_sum) / omega_min,
/// iterations = ceil(log2(2 omega_sum^2 (beta0 - alpha0)) - log2(phi_min + p_min))
/// clamped to [1, kMaxBisectionSteps].
SearchBracket search_bracket(const Extrema& extrema);

using DecideFn = std::function<DecisionOutcome(double threshold)>;

/// Bisection driver shared by the sequential and parallel engines. Keeps the
/// witness of the last feasible threshold and turns it into labels once.
MisoResult bisect_miso(const RootedTree& tree, const NodeWeights& weights, const Extrema& extrema,
                       std::size_t k, const DecideFn& decide_at, Executor& exec);

MisoResult solve_miso(const RootedTree& tree, const NodeWeights& weights, const Extrema& extrema, std::size_t k);

/// Labels from Cut and eta: an exclusive scan numbers the cut vertices,
/// psi maps cluster number to its cut vertex, and every vertex whose eta is
/// psi(j) receives label j + 1. Residual vertices get 0.
std::vector<std::size_t> extract_labels(const DecisionOutcome& outcome, std::size_t k, Executor& exec);
std::vector<std::size_t> extract_labels(const DecisionOutcome& outcome, std::size_t k);

/// Cost of the subpartition given by labels (0 = outside every set). The
/// number of sets is the largest label; every label in 1..max must occur.
double subpartition_cost(std::span<const std::size_t> labels, const RootedTree& tree, const NodeWeights& weights);

inline constexpr std::size_t kBruteForceMaxVertices = 12;

/// Exhaustive minimum over every labeling with all k sets nonempty,
/// connected or not. Only miso and labels of the result are meaningful.
MisoResult brute_force_miso(const RootedTree& tree, const NodeWeights& weights, std::size_t k);

}  // namespace isoclust
