#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isoclust/dataset.hpp"
#include "isoclust/pipeline.hpp"

namespace isoclust {

/// Minimum-cost perfect matching on a square cost matrix (row-major,
/// size x size). Returns the column assigned to each row.
std::vector<std::size_t> optimal_assignment(std::span<const double> cost, std::size_t size);

/// Share of points not covered by the best one-to-one matching between
/// predicted clusters 1..k and truth classes. Label 0 always counts as an
/// error.
double misclassification_rate(std::span<const std::size_t> predicted, const ClassLabels& truth);

struct BenchRecord {
    std::string dataset;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    Engine engine = Engine::sequential;
    std::size_t workers = 1;
    PhaseTimings timings;  // medians over repetitions
    double miso = 0.0;
    std::optional<double> misclassification;
    std::string error;  // non-empty when the run failed (e.g. over the size cap)
};

struct BenchPlan {
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> ks;
    std::vector<Engine> engines{Engine::sequential, Engine::parallel};
    std::vector<std::uint64_t> seeds{1};
    std::size_t workers = 0;  // 0: default_worker_count()
    std::size_t repetitions = 3;
    double spread = 1.0;
    std::optional<double> sigma;
    double alpha = 0.0;
};

using BenchProgress = std::function<void(const BenchRecord&)>;

/// Times one data set: a discarded warm-up run, then `repetitions` runs
/// whose per-phase medians are reported. Runs never overlap.
BenchRecord benchmark_dataset(const std::string& name, const DataSet& data, const ClassLabels* truth,
                              const PipelineOptions& options, std::size_t workers, std::size_t repetitions);

/// Every size x dim x k x seed combination on generated blobs, each engine
/// in turn.
std::vector<BenchRecord> benchmark(const BenchPlan& plan, const BenchProgress& progress = {});

inline constexpr const char* kBenchCsvHeader =
    "dataset,n,d,k,engine,workers,affinity_ms,mst_ms,partition_ms,total_ms,miso,misclassification";

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace isoclust
