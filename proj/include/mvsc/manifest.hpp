#pragma once

#include "mvsc/data.hpp"
#include "mvsc/metrics.hpp"
#include "mvsc/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsc {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

/// 64-bit FNV-1a over the view shapes, the raw bytes of every value and the
/// labels. Stable across runs and platforms with IEEE doubles.
std::uint64_t dataset_fingerprint(const MultiViewDataset& dataset);

nlohmann::json dataset_json(const MultiViewDataset& dataset);
nlohmann::json config_json(const SolverConfig& config, NormalizeScheme scheme);

/// Metrics in percent, rounded to 4 decimals.
nlohmann::json metrics_json(const MetricReport& report);

struct RunRecord {
    nlohmann::json config;
    nlohmann::json dataset;
    Labels labels;
    std::vector<Vector> weights;
    std::optional<MetricReport> metrics;
    bool converged = false;
    int iterations = 0;
    double seconds = 0.0;
};

nlohmann::json manifest_json(const RunRecord& record);

void write_json(const nlohmann::json& j, const std::filesystem::path& file);

/// iteration,objective,r_recon,r_u,r_a,mu; one row per iteration.
void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& file);

struct SweepRow {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    MetricReport metrics;
    int iterations = 0;
};

/// lambda1,lambda2,lambda3,acc,nmi,ari,precision,fscore,iterations
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& file);

}  // namespace mvsc
