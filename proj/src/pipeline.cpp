#include "isoclust/pipeline.hpp"

#include <chrono>
#include <stdexcept>

#include "isoclust/par_engine.hpp"

namespace isoclust {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

std::string_view engine_name(Engine engine) {
    return engine == Engine::sequential ? "sequential" : "parallel";
}

PipelineRun run_pipeline(const DataSet& data, const PipelineOptions& options, Executor& exec) {
    if (options.k < 1) throw std::invalid_argument("k must be at least 1");
    if (options.sigma && !(*options.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(options.alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
    if (data.n < 2) throw std::invalid_argument("need at least 2 points");
    if (options.root >= data.n) throw std::invalid_argument("root vertex out of range");

    Executor serial(1);
    Executor& stage_exec = options.engine == Engine::sequential ? serial : exec;

    PipelineRun run;
    const auto start = Clock::now();

    auto t = Clock::now();
    DistanceMatrix dist = distance_matrix(data, stage_exec);
    run.sigma = options.sigma ? *options.sigma : mean_distance(dist, stage_exec);
    if (!(run.sigma > 0.0))
        throw std::invalid_argument("automatic sigma is zero: all points coincide; pass an explicit sigma");
    run.weights = node_weights(dist, run.sigma, options.alpha, stage_exec);
    run.timings.affinity_ms = elapsed_ms(t);

    t = Clock::now();
    run.tree = prim_mst(dist, run.sigma, options.root, stage_exec);
    run.timings.mst_ms = elapsed_ms(t);

    t = Clock::now();
    run.extrema = extrema(run.tree, run.weights, stage_exec);
    run.result = options.engine == Engine::sequential
                     ? solve_miso(run.tree, run.weights, run.extrema, options.k)
                     : par_solve_miso(run.tree, run.weights, run.extrema, options.k, stage_exec);
    run.timings.partition_ms = elapsed_ms(t);

    run.timings.total_ms = elapsed_ms(start);
    if (options.keep_distances) run.distances = std::move(dist);
    return run;
}

}  // namespace isoclust
