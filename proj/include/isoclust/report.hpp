#pragma once

#include <iosfwd>
#include <optional>
#include <span>

#include <json.hpp>

#include "isoclust/pipeline.hpp"

namespace isoclust {

inline constexpr int kSummarySchema = 1;

/// One label per line, 0 for residual points.
void write_labels(std::ostream& out, std::span<const std::size_t> labels);

/// {schema, miso, k, n, iterations, alpha_final, beta_final, cluster_sizes,
///  residual_count, sigma, alpha, root, engine, timings_ms}
nlohmann::json summary_json(const PipelineRun& run, std::size_t k, Engine engine, std::size_t root,
                            std::optional<double> misclassification = std::nullopt);

}  // namespace isoclust
