#include "isoclust/report.hpp"

#include <algorithm>
#include <ostream>

namespace isoclust {

void write_labels(std::ostream& out, std::span<const std::size_t> labels) {
    for (const std::size_t l : labels) out << l << '\n';
}

nlohmann::json summary_json(const PipelineRun& run, std::size_t k, Engine engine, std::size_t root,
                            std::optional<double> misclassification) {
    const auto& r = run.result;
    std::vector<std::size_t> sizes(k, 0);
    std::size_t residual = 0;
    for (const std::size_t l : r.labels) {
        if (l == 0)
            ++residual;
        else
            ++sizes[l - 1];
    }
    nlohmann::json j;
    j["schema"] = kSummarySchema;
    j["miso"] = r.miso;
    j["k"] = k;
    j["n"] = r.labels.size();
    j["iterations"] = r.iterations;
    j["alpha_final"] = r.alpha_final;
    j["beta_final"] = r.beta_final;
    j["cluster_sizes"] = sizes;
    j["residual_count"] = residual;
    j["sigma"] = run.sigma;
    j["alpha"] = run.weights.alpha;
    j["root"] = root;
    j["engine"] = engine_name(engine);
    j["timings_ms"] = {{"affinity", run.timings.affinity_ms},
                       {"mst", run.timings.mst_ms},
                       {"partition", run.timings.partition_ms},
                       {"total", run.timings.total_ms}};
    if (misclassification) j["misclassification"] = *misclassification;
    return j;
}

}  // namespace isoclust
