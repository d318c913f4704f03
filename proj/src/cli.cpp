#include "mvsc/cli.hpp"

#include "mvsc/data.hpp"
#include "mvsc/graph_ops.hpp"
#include "mvsc/manifest.hpp"
#include "mvsc/metrics.hpp"
#include "mvsc/solver.hpp"
#include "mvsc/spectral.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace fs = std::filesystem;

namespace mvsc {

namespace {

// Every flag can also come from MVSC_<FLAG>, e.g. --max-iter <- MVSC_MAX_ITER.
std::string env_for(std::string flag) {
    std::string out = "MVSC_";
    for (char ch : flag) out += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    return app->add_option("--" + name, target, help)->envname(env_for(name))->capture_default_str();
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct SolverFlags {
    SolverConfig config;
    std::string ablation = "full";
    std::string labels_from = "embedding";
    std::string normalize = "none";
    std::string config_file;  // consumed by expand_config before parsing

    void add(CLI::App* app, bool with_lambdas) {
        if (with_lambdas) {
            flag(app, "lambda1", config.lambda1, "weight of the consensus-embedding term");
            flag(app, "lambda2", config.lambda2, "weight of the spectral-norm term");
            flag(app, "lambda3", config.lambda3, "weight of the sparse-error term");
        }
        flag(app, "mu0", config.mu0, "initial penalty");
        flag(app, "rho", config.rho, "penalty growth factor");
        flag(app, "mu-max", config.mu_max, "penalty cap");
        flag(app, "max-iter", config.max_iter, "outer iteration budget");
        flag(app, "tol", config.tol, "stop when all constraint residuals fall below this");
        flag(app, "k-init", config.k_init, "neighbors in the initial kNN graphs");
        flag(app, "clusters", config.n_clusters, "number of clusters (default: distinct labels)");
        flag(app, "ablation", ablation, "full | eq7 (uniform weights) | eq6 (also no spectral norm)")
            ->check(CLI::IsMember({"full", "eq7", "eq6", "uniform_weights", "no_spectral_norm"}));
        flag(app, "labels-from", labels_from, "embedding | graph")->check(CLI::IsMember({"embedding", "graph"}));
        flag(app, "normalize", normalize, "none | l2 | minmax")
            ->check(CLI::IsMember({"none", "l2", "minmax", "unit_l2_per_sample", "minmax_per_feature"}));
        flag(app, "seed", config.seed, "k-means seed");
        flag(app, "threads", config.threads, "worker threads for the per-view updates");
    }

    SolverConfig resolve(const MultiViewDataset& dataset) const {
        SolverConfig out = config;
        out.ablation = parse_ablation(ablation);
        out.label_source = parse_label_source(labels_from);
        if (out.n_clusters == 0) {
            if (!dataset.labels) throw std::invalid_argument("--clusters is required for unlabeled data");
            out.n_clusters = dataset.n_label_classes();
        }
        return out.effective();
    }
};

MultiViewDataset load_normalized(const fs::path& dir, const std::string& scheme) {
    return normalize(load_dataset(dir), parse_normalize_scheme(scheme));
}

fs::path sibling(const fs::path& file, const std::string& suffix) {
    fs::path out = file;
    out.replace_filename(file.stem().string() + suffix);
    return out;
}

void export_matrices(const ClusteringResult& result, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw OutputError(dir.string() + ": " + ec.message());
    write_matrix_csv(result.fused_similarity, dir / "affinity.csv");
    write_matrix_csv(laplacian(result.fused_similarity), dir / "laplacian.csv");
    write_matrix_csv(result.Q, dir / "embedding.csv");
    for (std::size_t v = 0; v < result.weights.size(); ++v) {
        write_matrix_csv(result.weights[v], dir / ("weights_view_" + std::to_string(v + 1) + ".csv"));
    }
    save_labels(result.labels, dir / "labels.csv");
}

void add_synth(CLI::App& app, std::ostream& out) {
    auto* cmd = app.add_subcommand("synth", "write a Gaussian multi-view dataset");
    auto spec = std::make_shared<SynthSpec>();
    auto dir = std::make_shared<std::string>();
    flag(cmd, "clusters", spec->clusters, "number of clusters");
    flag(cmd, "per-cluster", spec->samples_per_cluster, "samples per cluster");
    flag(cmd, "dims", spec->view_dims, "informative features per view")->delimiter(',');
    flag(cmd, "noise", spec->noise_feature_counts, "label-independent features appended per view")->delimiter(',');
    flag(cmd, "std", spec->within_cluster_std, "within-cluster standard deviation");
    flag(cmd, "separation", spec->between_cluster_separation, "closest centroid gap, in units of --std");
    flag(cmd, "noise-std-ratio", spec->noise_std_ratio, "noise feature std, in units of --std");
    flag(cmd, "seed", spec->seed, "generator seed");
    cmd->add_option("-o,--output", *dir, "output directory")->required()->envname(env_for("output"));
    cmd->callback([spec, dir, &out] {
        save_dataset(generate_synthetic(*spec), *dir);
        out << "wrote " << spec->view_dims.size() << " views, "
            << spec->clusters * spec->samples_per_cluster << " samples to " << *dir << '\n';
    });
}

void add_cluster(CLI::App& app, std::ostream& out) {
    auto* cmd = app.add_subcommand("cluster", "run the multi-view solver on a dataset directory");
    auto flags = std::make_shared<SolverFlags>();
    cmd->add_option("--config", flags->config_file, "key = value file with flag names as keys; command-line flags win")
        ->check(CLI::ExistingFile);
    auto data = std::make_shared<std::string>();
    auto output = std::make_shared<std::string>();
    auto trace = std::make_shared<std::string>();
    auto export_dir = std::make_shared<std::string>();
    cmd->add_option("data", *data, "dataset directory")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("-o,--output", *output, "manifest JSON path")->required()->envname(env_for("output"));
    flags->add(cmd, true);
    flag(cmd, "trace", *trace, "trace CSV path (default: <output stem>_trace.csv)");
    flag(cmd, "export-dir", *export_dir, "also write affinity, Laplacian, embedding, weights and labels CSVs");
    cmd->callback([=, &out] {
        const MultiViewDataset dataset = load_normalized(*data, flags->normalize);
        const SolverConfig config = flags->resolve(dataset);
        Stopwatch clock;
        const ClusteringResult result = solve(dataset, config);
        RunRecord record{config_json(config, parse_normalize_scheme(flags->normalize)),
                         dataset_json(dataset),
                         result.labels,
                         result.weights,
                         std::nullopt,
                         result.converged,
                         result.iterations,
                         clock.seconds()};
        if (dataset.labels) record.metrics = evaluate(*dataset.labels, result.labels);

        const fs::path trace_path = trace->empty() ? sibling(*output, "_trace.csv") : fs::path(*trace);
        write_json(manifest_json(record), *output);
        write_trace_csv(result.trace, trace_path);
        if (!export_dir->empty()) export_matrices(result, *export_dir);

        out << (result.converged ? "converged" : "stopped") << " after " << result.iterations << " iterations";
        if (record.metrics) out << ", acc " << record.metrics->acc << ", nmi " << record.metrics->nmi;
        out << '\n';
    });
}

void add_baseline(CLI::App& app, std::ostream& out) {
    auto* cmd = app.add_subcommand("baseline", "spectral clustering of the concatenated views");
    auto data = std::make_shared<std::string>();
    auto output = std::make_shared<std::string>();
    auto clusters = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto ratio = std::make_shared<bool>(false);
    cmd->add_option("data", *data, "dataset directory")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("-o,--output", *output, "manifest JSON path")->required()->envname(env_for("output"));
    flag(cmd, "clusters", *clusters, "number of clusters")->required();
    flag(cmd, "seed", *seed, "k-means seed");
    cmd->add_flag("--ratio-cut", *ratio, "use the unnormalized (ratio-cut) Laplacian")->envname(env_for("ratio-cut"));
    cmd->callback([=, &out] {
        const MultiViewDataset dataset = load_dataset(*data);
        Stopwatch clock;
        const CutVariant variant = *ratio ? CutVariant::ratio : CutVariant::normalized;
        const Labels labels = ncut_baseline(dataset, *clusters, *seed, variant);
        RunRecord record{{{"method", "ncut_baseline"},
                          {"clusters", *clusters},
                          {"seed", *seed},
                          {"variant", *ratio ? "ratio" : "normalized"},
                          {"sigma", 1.0}},
                         dataset_json(dataset),
                         labels,
                         {},
                         std::nullopt,
                         true,
                         0,
                         clock.seconds()};
        if (dataset.labels) record.metrics = evaluate(*dataset.labels, labels);
        write_json(manifest_json(record), *output);
        out << "baseline done";
        if (record.metrics) out << ", acc " << record.metrics->acc;
        out << '\n';
    });
}

void add_sweep(CLI::App& app, std::ostream& out) {
    auto* cmd = app.add_subcommand("sweep", "grid over lambda1 x lambda2 x lambda3");
    auto flags = std::make_shared<SolverFlags>();
    cmd->add_option("--config", flags->config_file, "key = value file with flag names as keys; command-line flags win")
        ->check(CLI::ExistingFile);
    auto data = std::make_shared<std::string>();
    auto output = std::make_shared<std::string>();
    // decades 1e-5 .. 1e2 on every axis unless overridden
    const std::vector<double> decades{1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2};
    auto l1 = std::make_shared<std::vector<double>>(decades);
    auto l2 = std::make_shared<std::vector<double>>(decades);
    auto l3 = std::make_shared<std::vector<double>>(decades);
    auto jobs = std::make_shared<int>(1);
    cmd->add_option("data", *data, "labeled dataset directory")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("-o,--output", *output, "sweep CSV path")->required()->envname(env_for("output"));
    flag(cmd, "lambda1", *l1, "comma-separated values")->delimiter(',');
    flag(cmd, "lambda2", *l2, "comma-separated values")->delimiter(',');
    flag(cmd, "lambda3", *l3, "comma-separated values")->delimiter(',');
    flag(cmd, "jobs", *jobs, "grid points solved concurrently")->check(CLI::PositiveNumber);
    flags->add(cmd, false);
    cmd->callback([=, &out] {
        const MultiViewDataset dataset = load_normalized(*data, flags->normalize);
        if (!dataset.labels) throw std::invalid_argument("sweep needs labels.csv in the dataset directory");
        const SolverConfig base = flags->resolve(dataset);

        std::vector<SweepRow> rows;
        for (double a : *l1) {
            for (double b : *l2) {
                for (double c : *l3) rows.push_back({a, b, c, {}, 0});
            }
        }
        // Each grid point is independent; rows keep grid order whatever the schedule.
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_lock;
        auto work = [&] {
            for (std::size_t i = next++; i < rows.size(); i = next++) {
                try {
                    SolverConfig config = base;
                    config.lambda1 = rows[i].lambda1;
                    config.lambda2 = rows[i].lambda2;
                    config.lambda3 = rows[i].lambda3;
                    const ClusteringResult result = solve(dataset, config.effective());
                    rows[i].metrics = evaluate(*dataset.labels, result.labels);
                    rows[i].iterations = result.iterations;
                } catch (...) {
                    std::lock_guard lock(failure_lock);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            const auto n = std::min<std::size_t>(static_cast<std::size_t>(*jobs), rows.size());
            for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
            work();
        }
        if (failure) std::rethrow_exception(failure);
        write_sweep_csv(rows, *output);
        out << "wrote " << rows.size() << " grid points to " << *output << '\n';
    });
}

void add_eval(CLI::App& app, std::ostream& out) {
    auto* cmd = app.add_subcommand("eval", "metrics between two label files");
    auto truth = std::make_shared<std::string>();
    auto pred = std::make_shared<std::string>();
    auto variant = std::make_shared<std::string>("geometric");
    auto output = std::make_shared<std::string>();
    cmd->add_option("truth", *truth, "ground-truth labels")->required()->check(CLI::ExistingFile);
    cmd->add_option("pred", *pred, "predicted labels")->required()->check(CLI::ExistingFile);
    flag(cmd, "nmi-variant", *variant, "geometric | arithmetic")->check(CLI::IsMember({"geometric", "arithmetic"}));
    cmd->add_option("-o,--output", *output, "also write the metrics JSON here");
    cmd->callback([=, &out] {
        const Labels t = load_labels(*truth);
        const Labels p = load_labels(*pred);
        const nlohmann::json j = metrics_json(evaluate(t, p, parse_nmi_normalization(*variant)));
        if (!output->empty()) write_json(j, *output);
        out << j.dump(2) << '\n';
    });
}

bool has_flag(const std::vector<std::string>& args, const std::string& name) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == name || a.starts_with(name + "="); });
}

// Turns `--config file` into ordinary flags for every key the command line
// does not set itself. Keys may use '-' or '_'; an optional [section] must
// name the subcommand.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    if (args.empty()) return args;
    std::string file;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
        if (args[i].starts_with("--config=")) file = args[i].substr(9);
    }
    if (file.empty()) return args;
    const std::vector<std::string> given = args;
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(file)) {
        if (item.name == "++" || item.name == "--") continue;
        if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == args[0])) continue;
        std::string key = "--" + item.name;
        std::replace(key.begin() + 2, key.end(), '_', '-');
        if (has_flag(given, key)) continue;
        std::string value;
        for (const std::string& input : item.inputs) value += (value.empty() ? "" : ",") + input;
        args.push_back(key + "=" + value);
    }
    return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-view subspace clustering with feature weighting and a consensus embedding", "mvsc"};
    app.require_subcommand(1);
    add_synth(app, out);
    add_cluster(app, out);
    add_baseline(app, out);
    add_sweep(app, out);
    add_eval(app, out);

    try {
        const std::vector<std::string> expanded = expand_config(args);
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace mvsc
