#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "isoclust/affinity.hpp"
#include "isoclust/dataset.hpp"
#include "isoclust/executor.hpp"
#include "isoclust/isoperim.hpp"
#include "isoclust/tree.hpp"

namespace isoclust {

enum class Engine { sequential, parallel };

std::string_view engine_name(Engine engine);

struct PipelineOptions {
    std::size_t k = 2;
    std::optional<double> sigma;  // empty: mean off-diagonal distance
    double alpha = 0.0;
    std::size_t root = 0;
    Engine engine = Engine::sequential;
    bool keep_distances = false;
};

struct PhaseTimings {
    double affinity_ms = 0.0;
    double mst_ms = 0.0;
    double partition_ms = 0.0;
    double total_ms = 0.0;
};

struct PipelineRun {
    double sigma = 0.0;
    RootedTree tree;
    NodeWeights weights;
    Extrema extrema;
    MisoResult result;
    PhaseTimings timings;
    std::optional<DistanceMatrix> distances;  // only with keep_distances
};

/// distance matrix -> sigma -> omega, p -> Prim tree -> extrema -> solve.
///
/// The sequential engine runs every stage on one thread and solves with
/// solve_miso; the parallel engine runs every stage on `exec` and solves
/// with par_solve_miso. Both produce identical results.
PipelineRun run_pipeline(const DataSet& data, const PipelineOptions& options, Executor& exec);

}  // namespace isoclust
