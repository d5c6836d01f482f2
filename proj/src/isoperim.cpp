#include "isoclust/isoperim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "isoclust/parallel.hpp"

namespace isoclust {
namespace {

void check_inputs(const RootedTree& tree, const NodeWeights& weights, std::size_t k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (weights.omega.size() != tree.size() || weights.p.size() != tree.size())
        throw std::invalid_argument("tree and weights disagree on n");
}

// Relative slack below which further bisection cannot change a double.
constexpr double kBracketResolution = 1e-15;

}  // namespace

DecisionOutcome decide(const RootedTree& tree, const NodeWeights& weights, std::size_t k, double threshold) {
    check_inputs(tree, weights, k);
    const std::size_t n = tree.size();
    std::vector<double> omega = weights.omega;
    std::vector<double> q = weights.p;
    std::vector<std::uint8_t> cut(n, 0);
    std::vector<std::size_t> joined_to(n, kNoVertex);

    DecisionOutcome out;
    std::size_t found = 0;
    for (const std::size_t v : tree.bfs_order) {
        if (found == k) break;
        const bool is_root = v == tree.root;
        const double f = is_root ? 0.0 : tree.parent_flow[v];
        if (f + q[v] <= threshold * omega[v]) {
            cut[v] = 1;
            ++found;
            out.cluster_sparsities.push_back((f + q[v]) / omega[v]);
            if (!is_root) q[tree.parent[v]] += f;
        } else if (is_root) {
            // discard: nothing above the root to charge
        } else if (q[v] - f < threshold * omega[v]) {
            const std::size_t u = tree.parent[v];
            omega[u] += omega[v];
            q[u] += q[v];
            joined_to[v] = u;
        } else {
            q[tree.parent[v]] += f;
        }
    }
    out.feasible = found == k;
    out.clusters_found = found;
    out.eta = resolve_eta(tree, cut, joined_to);
    out.cut = std::move(cut);
    return out;
}

std::vector<std::size_t> resolve_eta(const RootedTree& tree, std::span<const std::uint8_t> cut,
                                     std::span<const std::size_t> joined_to) {
    std::vector<std::size_t> eta(tree.size(), kNoVertex);
    for (auto it = tree.bfs_order.rbegin(); it != tree.bfs_order.rend(); ++it) {
        const std::size_t v = *it;
        if (cut[v])
            eta[v] = v;
        else if (joined_to[v] != kNoVertex)
            eta[v] = eta[joined_to[v]];
    }
    return eta;
}

SearchBracket search_bracket(const Extrema& e) {
    SearchBracket b;
    const double lower = e.phi_star_min + e.p_star_min;
    b.alpha0 = lower / e.omega_star_sum;
    b.beta0 = (e.phi_star_sum + e.p_star_sum) / e.omega_star_min;
    const double width = b.beta0 - b.alpha0;
    if (!(width > 0.0)) {
        b.iterations = 1;
        return b;
    }
    if (!(lower > 0.0)) {
        b.iterations = kMaxBisectionSteps;
        return b;
    }
    const double t = std::ceil(std::log2(2.0 * e.omega_star_sum * e.omega_star_sum * width) - std::log2(lower));
    if (std::isnan(t) || t >= static_cast<double>(kMaxBisectionSteps))
        b.iterations = kMaxBisectionSteps;
    else
        b.iterations = t < 1.0 ? 1 : static_cast<std::size_t>(t);
    return b;
}

MisoResult bisect_miso(const RootedTree& tree, const NodeWeights& weights, const Extrema& extrema,
                       std::size_t k, const DecideFn& decide_at, Executor& exec) {
    check_inputs(tree, weights, k);
    const SearchBracket bracket = search_bracket(extrema);
    double alpha = bracket.alpha0;
    double beta = bracket.beta0;
    std::optional<DecisionOutcome> witness;
    std::size_t used = 0;

    // bracket.iterations is a minimum; bisection runs on to double resolution.
    for (std::size_t step = 0; step < kMaxBisectionSteps; ++step) {
        if (step >= bracket.iterations && beta - alpha <= kBracketResolution * std::max(1.0, beta)) break;
        const double mid = 0.5 * (alpha + beta);
        if (!(mid > alpha && mid < beta)) break;
        DecisionOutcome out = decide_at(mid);
        ++used;
        if (out.feasible) {
            beta = mid;
            witness = std::move(out);
        } else {
            alpha = mid;
        }
    }
    if (!witness) {
        DecisionOutcome out = decide_at(beta);
        if (!out.feasible)
            throw InfeasibleError("no feasible " + std::to_string(k) + "-subpartition found within bracket (found " +
                                  std::to_string(out.clusters_found) + " clusters)");
        witness = std::move(out);
    }

    MisoResult result;
    result.labels = extract_labels(*witness, k, exec);
    result.miso = subpartition_cost(result.labels, tree, weights);
    result.outcome = std::move(*witness);
    result.iterations = used;
    result.alpha_final = alpha;
    result.beta_final = beta;
    return result;
}

MisoResult solve_miso(const RootedTree& tree, const NodeWeights& weights, const Extrema& extrema, std::size_t k) {
    Executor serial(1);
    return bisect_miso(
        tree, weights, extrema, k, [&](double threshold) { return decide(tree, weights, k, threshold); }, serial);
}

std::vector<std::size_t> extract_labels(const DecisionOutcome& outcome, std::size_t k, Executor& exec) {
    if (!outcome.feasible) throw std::invalid_argument("extract_labels: outcome is not feasible");
    const std::size_t n = outcome.cut.size();
    const auto scan = exclusive_scan(std::span<const std::uint8_t>(outcome.cut), exec);
    const std::size_t total = n == 0 ? 0 : scan.back() + outcome.cut.back();
    if (total != k) throw std::invalid_argument("extract_labels: cut count differs from k");

    std::vector<std::size_t> psi(k, kNoVertex);
    exec.parallel_for(n, 4096, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            if (outcome.cut[i]) psi[scan[i]] = i;
    });
    std::vector<std::size_t> labels(n, 0);
    exec.parallel_for(n, 4096, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t head = outcome.eta[i];
            if (head == kNoVertex || !outcome.cut[head]) continue;
            const std::size_t j = scan[head];
            if (psi[j] == head) labels[i] = j + 1;
        }
    });
    return labels;
}

std::vector<std::size_t> extract_labels(const DecisionOutcome& outcome, std::size_t k) {
    Executor serial(1);
    return extract_labels(outcome, k, serial);
}

double subpartition_cost(std::span<const std::size_t> labels, const RootedTree& tree, const NodeWeights& weights) {
    const std::size_t n = tree.size();
    if (labels.size() != n) throw std::invalid_argument("subpartition_cost: label count differs from n");
    const std::size_t sets = n == 0 ? 0 : *std::max_element(labels.begin(), labels.end());
    if (sets == 0) throw std::invalid_argument("subpartition_cost: no labeled vertices");

    std::vector<double> boundary(sets + 1, 0.0), omega(sets + 1, 0.0), p(sets + 1, 0.0);
    std::vector<std::size_t> members(sets + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t a = labels[v];
        if (a) {
            omega[a] += weights.omega[v];
            p[a] += weights.p[v];
            ++members[a];
        }
        if (v == tree.root) continue;
        const std::size_t b = labels[tree.parent[v]];
        if (a == b) continue;
        if (a) boundary[a] += tree.parent_flow[v];
        if (b) boundary[b] += tree.parent_flow[v];
    }
    double cost = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= sets; ++j) {
        if (members[j] == 0) throw std::invalid_argument("subpartition_cost: empty cluster label " + std::to_string(j));
        cost = std::max(cost, (boundary[j] + p[j]) / omega[j]);
    }
    return cost;
}

namespace {

// Depth-first enumeration of labelings in restricted-growth form: new set
// numbers appear in increasing order, so each unordered subpartition is
// visited once. Per-set sums are carried incrementally, each tree edge being
// charged when its later endpoint (by index) is labeled.
class SubpartitionEnumerator {
public:
    SubpartitionEnumerator(const RootedTree& tree, const NodeWeights& weights, std::size_t k)
        : n_(tree.size()), k_(k), omega_(weights.omega), p_(weights.p), earlier_(n_), labels_(n_, 0) {
        for (std::size_t v = 0; v < n_; ++v) {
            if (v == tree.root) continue;
            const std::size_t u = tree.parent[v];
            earlier_[std::max(u, v)].push_back({std::min(u, v), tree.parent_flow[v]});
        }
    }

    void run() {
        Sums sums{std::vector<double>(k_ + 1, 0.0), std::vector<double>(k_ + 1, 0.0),
                  std::vector<double>(k_ + 1, 0.0)};
        visit(0, 0, sums);
    }

    bool found() const { return !best_labels_.empty(); }
    double best_cost() const { return best_cost_; }
    const std::vector<std::size_t>& best_labels() const { return best_labels_; }

private:
    struct Edge {
        std::size_t other;
        double flow;
    };
    struct Sums {
        std::vector<double> boundary, omega, p;
    };

    void visit(std::size_t v, std::size_t used, const Sums& sums) {
        if (k_ - used > n_ - v) return;
        if (v == n_) {
            double cost = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 1; j <= k_; ++j) cost = std::max(cost, (sums.boundary[j] + sums.p[j]) / sums.omega[j]);
            if (best_labels_.empty() || cost < best_cost_) {
                best_cost_ = cost;
                best_labels_ = labels_;
            }
            return;
        }
        const std::size_t top = std::min(used + 1, k_);
        for (std::size_t label = 0; label <= top; ++label) {
            Sums next = sums;
            labels_[v] = label;
            if (label) {
                next.omega[label] += omega_[v];
                next.p[label] += p_[v];
            }
            for (const Edge& e : earlier_[v]) {
                const std::size_t other = labels_[e.other];
                if (other == label) continue;
                if (label) next.boundary[label] += e.flow;
                if (other) next.boundary[other] += e.flow;
            }
            visit(v + 1, label > used ? label : used, next);
        }
        labels_[v] = 0;
    }

    std::size_t n_;
    std::size_t k_;
    const std::vector<double>& omega_;
    const std::vector<double>& p_;
    std::vector<std::vector<Edge>> earlier_;
    std::vector<std::size_t> labels_;
    double best_cost_ = 0.0;
    std::vector<std::size_t> best_labels_;
};

}  // namespace

MisoResult brute_force_miso(const RootedTree& tree, const NodeWeights& weights, std::size_t k) {
    check_inputs(tree, weights, k);
    if (tree.size() > kBruteForceMaxVertices)
        throw std::invalid_argument("brute_force_miso: n = " + std::to_string(tree.size()) + " exceeds " +
                                    std::to_string(kBruteForceMaxVertices));
    SubpartitionEnumerator search(tree, weights, k);
    search.run();
    if (!search.found())
        throw InfeasibleError("brute_force_miso: no " + std::to_string(k) + "-subpartition of " +
                              std::to_string(tree.size()) + " vertices");
    MisoResult r;
    r.miso = search.best_cost();
    r.labels = search.best_labels();
    r.alpha_final = r.beta_final = r.miso;
    return r;
}

}  // namespace isoclust
