#include "mvsc/manifest.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace mvsc {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

class Fnv1a {
public:
    void bytes(const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            hash_ ^= p[i];
            hash_ *= kFnvPrime;
        }
    }
    template <typename T>
    void value(T v) {
        bytes(&v, sizeof(v));
    }
    std::uint64_t digest() const { return hash_; }

private:
    std::uint64_t hash_ = kFnvOffset;
};

std::ofstream open_output(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw OutputError(file.string() + ": cannot open for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& file) {
    out.flush();
    if (!out) throw OutputError(file.string() + ": write failed");
}

double percent(double x) { return std::round(x * 100.0 * 1e4) / 1e4; }

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::uint64_t dataset_fingerprint(const MultiViewDataset& dataset) {
    Fnv1a h;
    h.value(static_cast<std::uint64_t>(dataset.n_views()));
    for (const Matrix& x : dataset.views) {
        h.value(static_cast<std::uint64_t>(x.rows()));
        h.value(static_cast<std::uint64_t>(x.cols()));
        h.bytes(x.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
    }
    if (dataset.labels) {
        h.value(static_cast<std::uint64_t>(dataset.labels->size()));
        for (int label : *dataset.labels) h.value(static_cast<std::int64_t>(label));
    }
    return h.digest();
}

nlohmann::json dataset_json(const MultiViewDataset& dataset) {
    nlohmann::json dims = nlohmann::json::array();
    for (const Matrix& x : dataset.views) dims.push_back(x.rows());
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(dataset_fingerprint(dataset)));
    return {{"n_samples", dataset.n_samples()},
            {"n_views", dataset.n_views()},
            {"view_dims", dims},
            {"labeled", dataset.labels.has_value()},
            {"fnv1a64", hex}};
}

nlohmann::json config_json(const SolverConfig& config, NormalizeScheme scheme) {
    return {{"method", "mvsc"},
            {"lambda1", config.lambda1},
            {"lambda2", config.lambda2},
            {"lambda3", config.lambda3},
            {"mu0", config.mu0},
            {"rho", config.rho},
            {"mu_max", config.mu_max},
            {"max_iter", config.max_iter},
            {"tol", config.tol},
            {"k_init", config.k_init},
            {"clusters", config.n_clusters},
            {"ablation", to_string(config.ablation)},
            {"labels_from", to_string(config.label_source)},
            {"normalize", to_string(scheme)},
            {"seed", config.seed}};
}

nlohmann::json metrics_json(const MetricReport& report) {
    return {{"acc", percent(report.acc)},
            {"nmi", percent(report.nmi)},
            {"ari", percent(report.ari)},
            {"precision", percent(report.precision)},
            {"fscore", percent(report.fscore)}};
}

nlohmann::json manifest_json(const RunRecord& record) {
    nlohmann::json weights = nlohmann::json::array();
    for (const Vector& w : record.weights) weights.push_back(std::vector<double>(w.data(), w.data() + w.size()));
    nlohmann::json j = {{"config", record.config},
                        {"dataset", record.dataset},
                        {"labels", record.labels},
                        {"weights", weights},
                        {"converged", record.converged},
                        {"iterations", record.iterations},
                        {"timing", {{"wall_seconds", record.seconds}}}};
    if (record.metrics) j["metrics"] = metrics_json(*record.metrics);
    return j;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& file) {
    auto out = open_output(file);
    out << j.dump(2) << '\n';
    finish(out, file);
}

void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& file) {
    auto out = open_output(file);
    out << "iteration,objective,r_recon,r_u,r_a,mu\n";
    for (const TraceRow& row : trace) {
        out << row.iteration << ',' << format_double(row.objective) << ',' << format_double(row.r_recon) << ','
            << format_double(row.r_u) << ',' << format_double(row.r_a) << ',' << format_double(row.mu) << '\n';
    }
    finish(out, file);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& file) {
    auto out = open_output(file);
    out << "lambda1,lambda2,lambda3,acc,nmi,ari,precision,fscore,iterations\n";
    for (const SweepRow& r : rows) {
        out << format_double(r.lambda1) << ',' << format_double(r.lambda2) << ',' << format_double(r.lambda3) << ','
            << format_double(r.metrics.acc) << ',' << format_double(r.metrics.nmi) << ','
            << format_double(r.metrics.ari) << ',' << format_double(r.metrics.precision) << ','
            << format_double(r.metrics.fscore) << ',' << r.iterations << '\n';
    }
    finish(out, file);
}

}  // namespace mvsc
