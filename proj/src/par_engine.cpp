#include "isoclust/par_engine.hpp"

#include <cstdint>

#include "isoclust/parallel.hpp"

namespace isoclust {
namespace {

constexpr std::size_t kVertexGrain = 2048;
constexpr std::size_t kGroupGrain = 512;

enum Branch : std::uint8_t { kDiscard = 0, kCut = 1, kJoin = 2 };

}  // namespace

DepthSchedule build_schedule(const RootedTree& tree) {
    DepthSchedule s;
    s.order = tree.bfs_order;
    const std::size_t n = s.order.size();
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t v = s.order[pos];
        const bool new_level = pos == 0 || tree.depth[v] != tree.depth[s.order[pos - 1]];
        if (new_level) {
            s.level_offsets.push_back(pos);
            s.level_groups.push_back(s.group_offsets.size());
        }
        if (new_level || tree.parent[v] != tree.parent[s.order[pos - 1]]) s.group_offsets.push_back(pos);
    }
    s.level_offsets.push_back(n);
    s.level_groups.push_back(s.group_offsets.size());
    s.group_offsets.push_back(n);
    return s;
}

DecisionOutcome par_decide(const RootedTree& tree, const NodeWeights& weights, std::size_t k, double threshold,
                           Executor& exec, const DepthSchedule& schedule, const LevelObserver& observer) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (weights.omega.size() != tree.size() || weights.p.size() != tree.size())
        throw std::invalid_argument("tree and weights disagree on n");
    const std::size_t n = tree.size();
    std::vector<double> omega = weights.omega;
    std::vector<double> q = weights.p;
    std::vector<std::uint8_t> cut(n, 0);
    std::vector<std::size_t> joined_to(n, kNoVertex);
    std::vector<double> sparsities(std::min(k, n), 0.0);
    std::vector<std::uint8_t> branch;
    std::vector<std::uint8_t> is_cut;
    std::size_t found = 0;

    auto notify = [&](std::size_t depth, LevelPhase phase) {
        if (observer) observer(depth, phase);
    };

    for (std::size_t level = 0; level < schedule.level_count() && found < k; ++level) {
        const std::size_t lo = schedule.level_offsets[level];
        const std::size_t width = schedule.level_offsets[level + 1] - lo;
        const std::size_t depth = tree.max_depth - level;

        // Phase 1: every vertex of the level tests its own state; no writes
        // outside this level's scratch arrays.
        notify(depth, LevelPhase::evaluate_begin);
        branch.assign(width, kDiscard);
        is_cut.assign(width, 0);
        exec.parallel_for(width, kVertexGrain, [&](std::size_t a, std::size_t b) {
            for (std::size_t i = a; i < b; ++i) {
                const std::size_t v = schedule.order[lo + i];
                const bool is_root = v == tree.root;
                const double f = is_root ? 0.0 : tree.parent_flow[v];
                if (f + q[v] <= threshold * omega[v]) {
                    branch[i] = kCut;
                    is_cut[i] = 1;
                } else if (!is_root && q[v] - f < threshold * omega[v]) {
                    branch[i] = kJoin;
                }
            }
        });
        notify(depth, LevelPhase::evaluate_end);

        // Number the would-be cuts in canonical order and find where the
        // running cluster count reaches k; nothing past that point commits.
        const auto rank = exclusive_scan(std::span<const std::uint8_t>(is_cut), exec);
        const std::size_t level_cuts = rank.back() + is_cut.back();
        const std::size_t remaining = k - found;
        std::size_t limit = width;
        if (level_cuts >= remaining) {
            exec.parallel_for(width, kVertexGrain, [&](std::size_t a, std::size_t b) {
                for (std::size_t i = a; i < b; ++i)
                    if (is_cut[i] && rank[i] + 1 == remaining) limit = i + 1;
            });
        }

        // Phase 2: sibling groups in parallel, members in canonical order.
        notify(depth, LevelPhase::commit_begin);
        const std::size_t g_lo = schedule.level_groups[level];
        const std::size_t g_hi = schedule.level_groups[level + 1];
        exec.parallel_for(g_hi - g_lo, kGroupGrain, [&](std::size_t a, std::size_t b) {
            for (std::size_t g = g_lo + a; g < g_lo + b; ++g) {
                const std::size_t end = std::min(schedule.group_offsets[g + 1], lo + limit);
                for (std::size_t pos = schedule.group_offsets[g]; pos < end; ++pos) {
                    const std::size_t i = pos - lo;
                    const std::size_t v = schedule.order[pos];
                    const bool is_root = v == tree.root;
                    const double f = is_root ? 0.0 : tree.parent_flow[v];
                    switch (branch[i]) {
                        case kCut:
                            cut[v] = 1;
                            sparsities[found + rank[i]] = (f + q[v]) / omega[v];
                            if (!is_root) q[tree.parent[v]] += f;
                            break;
                        case kJoin: {
                            const std::size_t u = tree.parent[v];
                            omega[u] += omega[v];
                            q[u] += q[v];
                            joined_to[v] = u;
                            break;
                        }
                        default:
                            if (!is_root) q[tree.parent[v]] += f;
                            break;
                    }
                }
            }
        });
        found += std::min(level_cuts, remaining);
        notify(depth, LevelPhase::commit_end);
    }

    // eta top-down, one level at a time.
    std::vector<std::size_t> eta(n, kNoVertex);
    for (std::size_t level = schedule.level_count(); level-- > 0;) {
        const std::size_t lo = schedule.level_offsets[level];
        const std::size_t width = schedule.level_offsets[level + 1] - lo;
        exec.parallel_for(width, kVertexGrain, [&](std::size_t a, std::size_t b) {
            for (std::size_t i = a; i < b; ++i) {
                const std::size_t v = schedule.order[lo + i];
                if (cut[v])
                    eta[v] = v;
                else if (joined_to[v] != kNoVertex)
                    eta[v] = eta[joined_to[v]];
            }
        });
    }

    DecisionOutcome out;
    out.feasible = found == k;
    out.clusters_found = found;
    out.cut = std::move(cut);
    out.eta = std::move(eta);
    sparsities.resize(found);
    out.cluster_sparsities = std::move(sparsities);
    return out;
}

DecisionOutcome par_decide(const RootedTree& tree, const NodeWeights& weights, std::size_t k, double threshold,
                           Executor& exec) {
    return par_decide(tree, weights, k, threshold, exec, build_schedule(tree));
}

MisoResult par_solve_miso(const RootedTree& tree, const NodeWeights& weights, const Extrema& extrema,
                          std::size_t k, Executor& exec) {
    const DepthSchedule schedule = build_schedule(tree);
    return bisect_miso(
        tree, weights, extrema, k,
        [&](double threshold) { return par_decide(tree, weights, k, threshold, exec, schedule); }, exec);
}

}  // namespace isoclust
