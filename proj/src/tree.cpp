#include "isoclust/tree.hpp"

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "isoclust/parallel.hpp"

namespace isoclust {
namespace {

constexpr std::size_t kRelaxGrain = 4096;

// Children of every vertex laid out contiguously, each run ordered by child_id.
struct ChildIndex {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> children;
};

ChildIndex index_children(const std::vector<std::size_t>& parent, const std::vector<std::size_t>& child_id) {
    const std::size_t n = parent.size();
    ChildIndex idx;
    idx.offsets.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (parent[v] != kNoVertex) ++idx.offsets[parent[v] + 1];
    for (std::size_t v = 0; v < n; ++v) idx.offsets[v + 1] += idx.offsets[v];
    idx.children.assign(idx.offsets[n], kNoVertex);
    for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] == kNoVertex) continue;
        const std::size_t u = parent[v];
        const std::size_t slot = idx.offsets[u] + child_id[v];
        if (child_id[v] >= idx.offsets[u + 1] - idx.offsets[u] || idx.children[slot] != kNoVertex)
            throw std::invalid_argument("child ids of vertex " + std::to_string(u) + " are not 0..c-1");
        idx.children[slot] = v;
    }
    return idx;
}

// Forward BFS order from the root; throws if some vertex is unreachable.
std::vector<std::size_t> bfs_forward(std::size_t root, const ChildIndex& idx, std::size_t n) {
    std::vector<std::size_t> order;
    order.reserve(n);
    order.push_back(root);
    for (std::size_t head = 0; head < order.size(); ++head) {
        const std::size_t u = order[head];
        for (std::size_t s = idx.offsets[u]; s < idx.offsets[u + 1]; ++s) order.push_back(idx.children[s]);
    }
    if (order.size() != n) throw std::invalid_argument("parent array does not form a single tree");
    return order;
}

}  // namespace

RootedTree make_rooted_tree(std::vector<std::size_t> parent, std::vector<double> parent_flow,
                            std::vector<std::size_t> child_id) {
    const std::size_t n = parent.size();
    if (n == 0) throw std::invalid_argument("make_rooted_tree: empty tree");
    if (parent_flow.size() != n) throw std::invalid_argument("make_rooted_tree: parent_flow size mismatch");

    RootedTree tree;
    std::size_t roots = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] == kNoVertex) {
            tree.root = v;
            ++roots;
        } else if (parent[v] >= n || parent[v] == v) {
            throw std::invalid_argument("make_rooted_tree: bad parent of vertex " + std::to_string(v));
        }
    }
    if (roots != 1) throw std::invalid_argument("make_rooted_tree: expected exactly one root");

    if (child_id.empty()) {
        child_id.assign(n, 0);
        std::vector<std::size_t> seen(n, 0);
        for (std::size_t v = 0; v < n; ++v)
            if (parent[v] != kNoVertex) child_id[v] = seen[parent[v]]++;
    } else if (child_id.size() != n) {
        throw std::invalid_argument("make_rooted_tree: child_id size mismatch");
    }
    child_id[tree.root] = 0;
    parent_flow[tree.root] = 0.0;

    const auto idx = index_children(parent, child_id);
    auto order = bfs_forward(tree.root, idx, n);

    tree.depth.assign(n, 0);
    for (const std::size_t v : order)
        if (v != tree.root) tree.depth[v] = tree.depth[parent[v]] + 1;
    tree.max_depth = tree.depth[order.back()];
    tree.parent = std::move(parent);
    tree.parent_flow = std::move(parent_flow);
    tree.child_id = std::move(child_id);
    tree.bfs_order.assign(order.rbegin(), order.rend());
    return tree;
}

std::vector<std::size_t> reverse_bfs_order(const RootedTree& tree) {
    const auto idx = index_children(tree.parent, tree.child_id);
    auto order = bfs_forward(tree.root, idx, tree.size());
    return {order.rbegin(), order.rend()};
}

RootedTree prim_mst(const DistanceMatrix& dist, double sigma, std::size_t root, Executor& exec) {
    const std::size_t n = dist.n;
    if (n == 0 || root >= n) throw std::invalid_argument("prim_mst: root out of range");
    if (!(sigma > 0.0)) throw std::invalid_argument("prim_mst: sigma must be positive");

    constexpr double kOutside = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> parent(n, kNoVertex);
    std::vector<std::size_t> child_id(n, 0);
    std::vector<std::size_t> children(n, 0);
    std::vector<std::uint8_t> in_tree(n, 0);
    // Frontier state: distance to the tree and the tree vertex realizing it.
    std::vector<double> key(n);
    std::vector<std::size_t> from(n, root);

    const auto root_row = dist.row(root);
    for (std::size_t w = 0; w < n; ++w) key[w] = root_row[w];
    key[root] = kOutside;
    in_tree[root] = 1;

    for (std::size_t step = 1; step < n; ++step) {
        const std::size_t v = min_reduce(key, exec).index;
        const std::size_t u = from[v];
        parent[v] = u;
        child_id[v] = children[u]++;
        in_tree[v] = 1;
        key[v] = kOutside;

        const auto row = dist.row(v);
        exec.parallel_for(n, kRelaxGrain, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t w = lo; w < hi; ++w) {
                if (!in_tree[w] && row[w] < key[w]) {
                    key[w] = row[w];
                    from[w] = v;
                }
            }
        });
    }

    std::vector<double> parent_flow(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        if (parent[v] != kNoVertex) parent_flow[v] = flow(dist(v, parent[v]), sigma);
    return make_rooted_tree(std::move(parent), std::move(parent_flow), std::move(child_id));
}

double tree_distance(const RootedTree& tree, const DistanceMatrix& dist) {
    double total = 0.0;
    for (std::size_t v = 0; v < tree.size(); ++v)
        if (tree.parent[v] != kNoVertex) total += dist(v, tree.parent[v]);
    return total;
}

void write_tree(std::ostream& out, const RootedTree& tree) {
    for (std::size_t v = 0; v < tree.size(); ++v) {
        out << v << ' ';
        if (tree.parent[v] == kNoVertex)
            out << -1;
        else
            out << tree.parent[v];
        out << ' ' << tree.depth[v] << ' ' << tree.child_id[v] << ' ' << tree.parent_flow[v] << '\n';
    }
}

}  // namespace isoclust
