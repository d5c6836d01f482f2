#include "isoclust/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace isoclust {

std::vector<std::size_t> optimal_assignment(std::span<const double> cost, std::size_t size) {
    if (cost.size() != size * size) throw std::invalid_argument("optimal_assignment: matrix is not square");
    const double inf = std::numeric_limits<double>::infinity();
    // Shortest augmenting paths with row/column potentials, 1-based with a
    // virtual column 0.
    std::vector<double> u(size + 1, 0.0), v(size + 1, 0.0);
    std::vector<std::size_t> match(size + 1, 0), way(size + 1, 0);
    for (std::size_t row = 1; row <= size; ++row) {
        match[0] = row;
        std::size_t col0 = 0;
        std::vector<double> slack(size + 1, inf);
        std::vector<bool> used(size + 1, false);
        do {
            used[col0] = true;
            const std::size_t r = match[col0];
            double delta = inf;
            std::size_t col1 = 0;
            for (std::size_t c = 1; c <= size; ++c) {
                if (used[c]) continue;
                const double cur = cost[(r - 1) * size + (c - 1)] - u[r] - v[c];
                if (cur < slack[c]) {
                    slack[c] = cur;
                    way[c] = col0;
                }
                if (slack[c] < delta) {
                    delta = slack[c];
                    col1 = c;
                }
            }
            for (std::size_t c = 0; c <= size; ++c) {
                if (used[c]) {
                    u[match[c]] += delta;
                    v[c] -= delta;
                } else {
                    slack[c] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<std::size_t> assignment(size, 0);
    for (std::size_t c = 1; c <= size; ++c) assignment[match[c] - 1] = c - 1;
    return assignment;
}

double misclassification_rate(std::span<const std::size_t> predicted, const ClassLabels& truth) {
    if (predicted.size() != truth.labels.size())
        throw std::invalid_argument("misclassification_rate: prediction and truth lengths differ");
    const std::size_t n = predicted.size();
    if (n == 0) return 0.0;
    const std::size_t clusters = *std::max_element(predicted.begin(), predicted.end());
    const std::size_t classes = static_cast<std::size_t>(truth.class_count);
    const std::size_t size = std::max(clusters, classes);
    if (size == 0) return 1.0;

    std::vector<double> agree(size * size, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (predicted[i] == 0) continue;
        agree[(predicted[i] - 1) * size + static_cast<std::size_t>(truth.labels[i])] += 1.0;
    }
    std::vector<double> cost(agree.size());
    std::transform(agree.begin(), agree.end(), cost.begin(), [](double a) { return -a; });
    const auto assignment = optimal_assignment(cost, size);
    double matched = 0.0;
    for (std::size_t r = 0; r < size; ++r) matched += agree[r * size + assignment[r]];
    return 1.0 - matched / static_cast<double>(n);
}

namespace {

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

void put_number(std::ostream& out, double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    out.write(buf, ptr - buf);
}

}  // namespace

BenchRecord benchmark_dataset(const std::string& name, const DataSet& data, const ClassLabels* truth,
                              const PipelineOptions& options, std::size_t workers, std::size_t repetitions) {
    BenchRecord rec;
    rec.dataset = name;
    rec.n = data.n;
    rec.d = data.d;
    rec.k = options.k;
    rec.engine = options.engine;
    rec.workers = options.engine == Engine::sequential ? 1 : workers;
    repetitions = std::max<std::size_t>(repetitions, 1);

    try {
        Executor exec(rec.workers);
        (void)run_pipeline(data, options, exec);  // warm-up
        std::vector<double> affinity, mst, partition, total;
        PipelineRun last;
        for (std::size_t r = 0; r < repetitions; ++r) {
            last = run_pipeline(data, options, exec);
            affinity.push_back(last.timings.affinity_ms);
            mst.push_back(last.timings.mst_ms);
            partition.push_back(last.timings.partition_ms);
            total.push_back(last.timings.total_ms);
        }
        rec.timings = {median(affinity), median(mst), median(partition), median(total)};
        rec.miso = last.result.miso;
        if (truth) rec.misclassification = misclassification_rate(last.result.labels, *truth);
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

std::vector<BenchRecord> benchmark(const BenchPlan& plan, const BenchProgress& progress) {
    if (plan.sizes.empty() || plan.dims.empty() || plan.ks.empty() || plan.engines.empty() || plan.seeds.empty())
        throw std::invalid_argument("benchmark: every plan axis needs at least one value");
    const std::size_t workers = plan.workers ? plan.workers : default_worker_count();
    std::vector<BenchRecord> records;
    for (const std::size_t n : plan.sizes)
        for (const std::size_t d : plan.dims)
            for (const std::size_t k : plan.ks)
                for (const std::uint64_t seed : plan.seeds) {
                    const auto generated = generate_random({n, d, k, seed, plan.spread});
                    for (const Engine engine : plan.engines) {
                        PipelineOptions options;
                        options.k = k;
                        options.sigma = plan.sigma;
                        options.alpha = plan.alpha;
                        options.engine = engine;
                        records.push_back(benchmark_dataset("random-seed" + std::to_string(seed), generated.data,
                                                            &generated.labels, options, workers, plan.repetitions));
                        if (progress) progress(records.back());
                    }
                }
    return records;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
    out << kBenchCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.dataset << ',' << r.n << ',' << r.d << ',' << r.k << ',' << engine_name(r.engine) << ','
            << r.workers << ',';
        if (!r.error.empty()) {
            out << ",,,,,\n";
            continue;
        }
        put_number(out, r.timings.affinity_ms);
        out << ',';
        put_number(out, r.timings.mst_ms);
        out << ',';
        put_number(out, r.timings.partition_ms);
        out << ',';
        put_number(out, r.timings.total_ms);
        out << ',';
        put_number(out, r.miso);
        out << ',';
        if (r.misclassification) put_number(out, *r.misclassification);
        out << '\n';
    }
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace isoclust
