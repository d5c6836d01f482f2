#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "isoclust/affinity.hpp"
#include "isoclust/executor.hpp"

namespace isoclust {

inline constexpr std::size_t kNoVertex = std::numeric_limits<std::size_t>::max();

/// Parent-list representation of a rooted spanning tree.
///
/// parent[root] == kNoVertex and parent_flow[root] is unused (0). child_id
/// ranks each vertex among its siblings. bfs_order is the breadth-first
/// order from the root, children visited in child_id order, then reversed:
/// leaves come first and the root is last.
struct RootedTree {
    std::vector<std::size_t> parent;
    std::vector<double> parent_flow;
    std::vector<std::size_t> depth;
    std::vector<std::size_t> child_id;
    std::vector<std::size_t> bfs_order;
    std::size_t root = 0;
    std::size_t max_depth = 0;

    std::size_t size() const noexcept { return parent.size(); }

    bool operator==(const RootedTree&) const = default;
};

/// Builds a RootedTree from a parent array. Depth, bfs_order and max_depth
/// are derived; an empty child_id ranks siblings by vertex index. Throws
/// std::invalid_argument unless the parents form one tree with one root and
/// child ids are 0..c-1 within each sibling set.
RootedTree make_rooted_tree(std::vector<std::size_t> parent, std::vector<double> parent_flow,
                            std::vector<std::size_t> child_id = {});

/// Prim's algorithm on the dense distance graph, rooted at `root`.
///
/// Each step takes the frontier vertex of smallest distance to the tree,
/// smallest index on ties, via min_reduce, then relaxes all remaining
/// frontier entries in parallel. Parent, depth and child_id are assigned at
/// insertion; parent_flow is flow(d, sigma) of the parent edge.
RootedTree prim_mst(const DistanceMatrix& dist, double sigma, std::size_t root, Executor& exec);

/// Recomputes the reversed BFS order from parent and child_id.
std::vector<std::size_t> reverse_bfs_order(const RootedTree& tree);

/// Sum of d over the tree's parent edges.
double tree_distance(const RootedTree& tree, const DistanceMatrix& dist);

/// One line per vertex: "id parent depth child_id parent_flow", parent -1 at the root.
void write_tree(std::ostream& out, const RootedTree& tree);

}  // namespace isoclust
