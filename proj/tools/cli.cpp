#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "isoclust/dataset.hpp"
#include "isoclust/eval.hpp"
#include "isoclust/pipeline.hpp"
#include "isoclust/report.hpp"

namespace isoclust::cli {
namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DataOptions {
    std::string input;
    std::string generate;
    std::optional<std::uint64_t> seed;
    bool standardize = false;
    bool header = false;
    std::string format = "csv";
    std::optional<std::size_t> label_column;
    std::string truth;
};

struct ClusterConfig {
    DataOptions data;
    std::size_t k = 0;
    std::string sigma = "auto";
    double alpha = 0.0;
    std::size_t root = 0;
    std::string engine = "seq";
    std::size_t workers = 0;
    std::string labels_out;
    std::string summary_out;
    std::string tree_out;
    std::string matrix_out;
};

struct BenchConfig {
    DataOptions data;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> dims{5};
    std::vector<std::size_t> ks{2};
    std::vector<std::string> engines{"seq", "par"};
    std::vector<std::uint64_t> seeds;
    std::size_t workers = 0;
    std::size_t repetitions = 3;
    double spread = 1.0;
    std::string sigma = "auto";
    double alpha = 0.0;
    std::string csv_out;
};

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

std::optional<double> parse_sigma(const std::string& text) {
    if (text == "auto") return std::nullopt;
    const double sigma = parse_number<double>(text, "sigma");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw UsageError("sigma must be positive or 'auto'");
    return sigma;
}

Engine parse_engine(const std::string& text) {
    if (text == "seq" || text == "sequential") return Engine::sequential;
    if (text == "par" || text == "parallel") return Engine::parallel;
    throw UsageError("unknown engine '" + text + "'");
}

// "n=100,d=5,k=3,seed=1,spread=0.5"
GeneratorSpec parse_generator(const std::string& text, std::optional<std::uint64_t> flag_seed,
                              std::size_t default_k) {
    std::map<std::string, std::string> fields;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("generator field '" + item + "' is not key=value");
        fields[item.substr(0, eq)] = item.substr(eq + 1);
    }
    GeneratorSpec spec;
    spec.k = default_k;
    for (const auto& [key, value] : fields) {
        if (key == "n")
            spec.n = parse_number<std::size_t>(value, "n");
        else if (key == "d")
            spec.d = parse_number<std::size_t>(value, "d");
        else if (key == "k")
            spec.k = parse_number<std::size_t>(value, "k");
        else if (key == "seed")
            spec.seed = parse_number<std::uint64_t>(value, "seed");
        else if (key == "spread")
            spec.spread = parse_number<double>(value, "spread");
        else
            throw UsageError("unknown generator field '" + key + "'");
    }
    if (!fields.count("n") || !fields.count("d")) throw UsageError("generator needs n and d");
    if (flag_seed) {
        if (fields.count("seed") && spec.seed != *flag_seed)
            throw UsageError("--seed conflicts with the generator's seed field");
        spec.seed = *flag_seed;
    }
    return spec;
}

struct Loaded {
    std::string name;
    DataSet data;
    std::optional<ClassLabels> truth;
};

Loaded load_data(const DataOptions& opt, std::size_t default_k) {
    Loaded out;
    if (!opt.input.empty()) {
        LoadOptions lo;
        if (opt.format == "csv")
            lo.format = TextFormat::csv;
        else if (opt.format == "whitespace" || opt.format == "ws")
            lo.format = TextFormat::whitespace;
        else
            throw UsageError("unknown format '" + opt.format + "'");
        lo.header = opt.header;
        lo.label_column = opt.label_column;
        auto loaded = load_points(opt.input, lo);
        out.name = std::filesystem::path(opt.input).stem().string();
        out.data = std::move(loaded.data);
        out.truth = std::move(loaded.labels);
    } else {
        auto generated = generate_random(parse_generator(opt.generate, opt.seed, default_k));
        out.name = "random";
        out.data = std::move(generated.data);
        out.truth = std::move(generated.labels);
    }
    if (!opt.truth.empty()) out.truth = load_labels(opt.truth);
    if (out.truth && out.truth->labels.size() != out.data.n)
        throw UsageError("truth labels: expected " + std::to_string(out.data.n) + " entries, found " +
                         std::to_string(out.truth->labels.size()));
    if (opt.standardize) standardize(out.data);
    return out;
}

void add_data_options(CLI::App& cmd, DataOptions& opt) {
    auto* input = cmd.add_option("--input", opt.input, "Point file, one point per row");
    auto* generate =
        cmd.add_option("--generate", opt.generate, "Synthetic blobs, e.g. n=100,d=5,k=3,seed=1,spread=1");
    input->excludes(generate);
    cmd.add_option("--seed", opt.seed, "Seed for every random choice");
    cmd.add_flag("--standardize", opt.standardize, "z-score every column before clustering");
    cmd.add_flag("--header", opt.header, "Skip the first row of --input");
    cmd.add_option("--format", opt.format, "csv or whitespace")->check(CLI::IsMember({"csv", "whitespace", "ws"}));
    cmd.add_option("--label-column", opt.label_column, "0-based column holding class labels");
    cmd.add_option("--truth", opt.truth, "Ground-truth labels file, one identifier per line");
}

template <typename Write>
void write_file(const std::string& path, Write&& write) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(file);
    file.flush();
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

int cmd_cluster(const ClusterConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.data.input.empty() && cfg.data.generate.empty()) throw UsageError("one of --input or --generate is required");
    const auto sigma = parse_sigma(cfg.sigma);
    const bool both = cfg.engine == "both";
    const Engine engine = both ? Engine::sequential : parse_engine(cfg.engine);
    const Loaded loaded = load_data(cfg.data, cfg.k);
    if (cfg.root >= loaded.data.n) throw UsageError("--root is out of range");

    PipelineOptions options;
    options.k = cfg.k;
    options.sigma = sigma;
    options.alpha = cfg.alpha;
    options.root = cfg.root;
    options.engine = engine;
    options.keep_distances = !cfg.matrix_out.empty();
    Executor exec(cfg.workers ? cfg.workers : default_worker_count());

    const PipelineRun run = run_pipeline(loaded.data, options, exec);
    std::optional<double> rate;
    if (loaded.truth) rate = misclassification_rate(run.result.labels, *loaded.truth);
    auto summary = summary_json(run, cfg.k, engine, cfg.root, rate);

    bool match = true;
    if (both) {
        options.engine = Engine::parallel;
        options.keep_distances = false;
        const PipelineRun par = run_pipeline(loaded.data, options, exec);
        match = par.result == run.result && par.tree == run.tree;
        summary["engine"] = "both";
        summary["match"] = match;
        summary["workers"] = exec.workers();
        summary["parallel_timings_ms"] = {{"affinity", par.timings.affinity_ms},
                                          {"mst", par.timings.mst_ms},
                                          {"partition", par.timings.partition_ms},
                                          {"total", par.timings.total_ms}};
    } else if (engine == Engine::parallel) {
        summary["workers"] = exec.workers();
    }

    if (!cfg.labels_out.empty())
        write_file(cfg.labels_out, [&](std::ostream& o) { write_labels(o, run.result.labels); });
    if (!cfg.tree_out.empty()) write_file(cfg.tree_out, [&](std::ostream& o) { write_tree(o, run.tree); });
    if (!cfg.matrix_out.empty())
        write_file(cfg.matrix_out, [&](std::ostream& o) { write_distance_csv(o, *run.distances); });
    if (!cfg.summary_out.empty())
        write_file(cfg.summary_out, [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
    else
        out << summary.dump(2) << '\n';

    if (!match) {
        err << "error: sequential and parallel engines disagree\n";
        return kEngineMismatch;
    }
    return kOk;
}

int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<Engine> engines;
    for (const auto& e : cfg.engines) engines.push_back(parse_engine(e));
    if (engines.empty()) throw UsageError("--engines must name at least one engine");
    const auto sigma = parse_sigma(cfg.sigma);
    const std::size_t workers = cfg.workers ? cfg.workers : default_worker_count();

    auto report = [&](const BenchRecord& r) {
        err << r.dataset << " n=" << r.n << " d=" << r.d << " k=" << r.k << ' ' << engine_name(r.engine);
        if (r.error.empty())
            err << " total=" << r.timings.total_ms << "ms miso=" << r.miso << '\n';
        else
            err << " error: " << r.error << '\n';
    };

    std::vector<BenchRecord> records;
    if (!cfg.data.input.empty()) {
        if (cfg.ks.size() != 1) throw UsageError("benchmarking a file takes exactly one --k");
        const Loaded loaded = load_data(cfg.data, cfg.ks.front());
        for (const Engine engine : engines) {
            PipelineOptions options;
            options.k = cfg.ks.front();
            options.sigma = sigma;
            options.alpha = cfg.alpha;
            options.engine = engine;
            records.push_back(benchmark_dataset(loaded.name, loaded.data, loaded.truth ? &*loaded.truth : nullptr,
                                                options, workers, cfg.repetitions));
            report(records.back());
        }
    } else {
        if (cfg.sizes.empty()) throw UsageError("--sizes must list at least one size");
        BenchPlan plan;
        plan.sizes = cfg.sizes;
        plan.dims = cfg.dims;
        plan.ks = cfg.ks;
        plan.engines = engines;
        plan.seeds = cfg.seeds.empty() ? std::vector<std::uint64_t>{cfg.data.seed.value_or(1)} : cfg.seeds;
        plan.workers = workers;
        plan.repetitions = cfg.repetitions;
        plan.spread = cfg.spread;
        plan.sigma = sigma;
        plan.alpha = cfg.alpha;
        records = benchmark(plan, report);
    }

    if (!cfg.csv_out.empty())
        write_file(cfg.csv_out, [&](std::ostream& o) { write_bench_csv(o, records); });
    else
        write_bench_csv(out, records);
    for (const auto& r : records)
        if (!r.error.empty()) return kFailure;
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph clustering by minimum isoperimetric subpartitions of a spanning tree", "isoclust"};
    app.require_subcommand(1);

    ClusterConfig cluster;
    auto* c = app.add_subcommand("cluster", "Cluster one data set");
    add_data_options(*c, cluster.data);
    c->add_option("--k", cluster.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
    c->add_option("--sigma", cluster.sigma, "Flow scale: positive number or 'auto' (mean distance)");
    c->add_option("--alpha", cluster.alpha, "Potential scale")->check(CLI::NonNegativeNumber);
    c->add_option("--root", cluster.root, "Root vertex of the spanning tree");
    c->add_option("--engine", cluster.engine, "seq, par or both")->check(CLI::IsMember({"seq", "par", "both"}));
    c->add_option("--workers", cluster.workers, "Worker threads (default: ISOCLUST_WORKERS or all cores)");
    c->add_option("--labels-out", cluster.labels_out, "Write one label per line (0 = residual)");
    c->add_option("--summary-out", cluster.summary_out, "Write the JSON summary here instead of stdout");
    c->add_option("--tree-out", cluster.tree_out, "Write the spanning tree, one vertex per line");
    c->add_option("--matrix-out", cluster.matrix_out, "Write the distance matrix as CSV");

    BenchConfig bench;
    auto* b = app.add_subcommand("bench", "Time both engines on generated or loaded data");
    add_data_options(*b, bench.data);
    b->add_option("--sizes", bench.sizes, "Point counts")->delimiter(',');
    b->add_option("--dim", bench.dims, "Dimensions")->delimiter(',');
    b->add_option("--k", bench.ks, "Cluster counts")->delimiter(',')->check(CLI::PositiveNumber);
    b->add_option("--engines", bench.engines, "seq and/or par")->delimiter(',');
    b->add_option("--seeds", bench.seeds, "Data seeds")->delimiter(',');
    b->add_option("--workers", bench.workers, "Worker threads for the parallel engine");
    b->add_option("--reps", bench.repetitions, "Timed repetitions per record (median reported)")
        ->check(CLI::PositiveNumber);
    b->add_option("--spread", bench.spread, "Blob standard deviation")->check(CLI::PositiveNumber);
    b->add_option("--sigma", bench.sigma, "Flow scale: positive number or 'auto'");
    b->add_option("--alpha", bench.alpha, "Potential scale")->check(CLI::NonNegativeNumber);
    b->add_option("--csv-out", bench.csv_out, "CSV destination (default stdout)");

    std::vector<const char*> argv{"isoclust"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (c->parsed()) return cmd_cluster(cluster, out, err);
        return cmd_bench(bench, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace isoclust::cli
