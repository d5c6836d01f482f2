#pragma once

// Depth-synchronous version of the threshold test.
//
// Vertices of one depth depend only on their own subtree state, so a whole
// depth is evaluated at once (phase 1, read-only), then the results are
// committed into the parents one level up (phase 2). Siblings write the same
// parent cell, so each sibling group commits sequentially in the canonical
// order while distinct groups proceed concurrently. Cut commits stop exactly
// where the sequential scan would reach k clusters, which keeps the outcome
// identical to decide().

#include <cstddef>
#include <functional>
#include <vector>

#include "isoclust/executor.hpp"
#include "isoclust/isoperim.hpp"
#include "isoclust/tree.hpp"

namespace isoclust {

/// Vertices grouped by depth (deepest first) and, within a depth, by parent.
///
/// `order` is tree.bfs_order itself: reversing a BFS sequence keeps each
/// depth contiguous and each sibling run contiguous, so the canonical order
/// within a level is the restriction of bfs_order to that level.
struct DepthSchedule {
    std::vector<std::size_t> order;
    /// Level L spans order[level_offsets[L], level_offsets[L+1]) and holds
    /// depth max_depth - L.
    std::vector<std::size_t> level_offsets;
    /// Sibling group G spans order[group_offsets[G], group_offsets[G+1]).
    std::vector<std::size_t> group_offsets;
    /// Level L owns groups [level_groups[L], level_groups[L+1]).
    std::vector<std::size_t> level_groups;

    std::size_t level_count() const noexcept { return level_offsets.size() - 1; }
};

DepthSchedule build_schedule(const RootedTree& tree);

enum class LevelPhase { evaluate_begin, evaluate_end, commit_begin, commit_end };

/// Called on the coordinating thread at each phase boundary.
using LevelObserver = std::function<void(std::size_t depth, LevelPhase phase)>;

DecisionOutcome par_decide(const RootedTree& tree, const NodeWeights& weights, std::size_t k, double threshold,
                           Executor& exec, const DepthSchedule& schedule, const LevelObserver& observer = {});

DecisionOutcome par_decide(const RootedTree& tree, const NodeWeights& weights, std::size_t k, double threshold,
                           Executor& exec);

/// Same contract as solve_miso, every threshold test running par_decide.
/// Only Cut and eta are kept per feasible step; labels are built once.
MisoResult par_solve_miso(const RootedTree& tree, const NodeWeights& weights, const Extrema& extrema,
                          std::size_t k, Executor& exec);

}  // namespace isoclust
