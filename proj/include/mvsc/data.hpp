#pragma once

#include "mvsc/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsc {

/// Raised for malformed or inconsistent dataset input. The message carries the
/// offending file and, where applicable, the 1-based line number.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A set of feature matrices observed over the same samples.
///
/// Each view is stored features x samples (d_v x n): column i is sample i.
/// Labels, when present, are kept exactly as read.
struct MultiViewDataset {
    std::vector<Matrix> views;
    std::optional<Labels> labels;

    Index n_samples() const { return views.empty() ? 0 : views.front().cols(); }
    std::size_t n_views() const { return views.size(); }

    /// Number of distinct label values; 0 when unlabeled.
    int n_label_classes() const;

    /// Throws DataError unless every view is finite, non-empty, has n >= 2
    /// samples shared across views, and labels (if any) have length n.
    void validate() const;
};

enum class NormalizeScheme { none, unit_l2_per_sample, minmax_per_feature };

NormalizeScheme parse_normalize_scheme(const std::string& name);
std::string to_string(NormalizeScheme scheme);

/// Reads view_1.csv ... view_k.csv (samples as rows) and an optional
/// labels.csv from `directory`.
MultiViewDataset load_dataset(const std::filesystem::path& directory);

/// Writes the layout read by load_dataset, creating `directory` if needed.
/// Values are written with round-trip precision.
void save_dataset(const MultiViewDataset& dataset, const std::filesystem::path& directory);

/// Reads a single-column integer file (labels.csv layout).
Labels load_labels(const std::filesystem::path& file);
void save_labels(const Labels& labels, const std::filesystem::path& file);

/// Reads a samples-as-rows numeric CSV and returns it transposed (d x n).
Matrix read_matrix_csv(const std::filesystem::path& file);
/// Writes `m` row by row as-is (no transpose).
void write_matrix_csv(const Matrix& m, const std::filesystem::path& file);

MultiViewDataset normalize(const MultiViewDataset& dataset, NormalizeScheme scheme);

/// Parameters of the Gaussian multi-view generator.
struct SynthSpec {
    int clusters = 3;
    int samples_per_cluster = 30;
    std::vector<int> view_dims{10, 10, 10};
    double within_cluster_std = 0.1;
    /// Minimum distance between cluster centroids, in units of within_cluster_std.
    double between_cluster_separation = 5.0;
    /// Label-independent features appended to each view (empty = none).
    std::vector<int> noise_feature_counts;
    /// Standard deviation of noise features, in units of within_cluster_std.
    double noise_std_ratio = 5.0;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Draws c Gaussian clusters per view around independently placed centroids
/// (rescaled so the closest pair sits exactly separation * std apart). Noise
/// features are N(0, (noise_std_ratio * std)^2) regardless of label. Samples
/// are ordered cluster by cluster.
MultiViewDataset generate_synthetic(const SynthSpec& spec);

/// Columns of all views stacked into a single (sum d_v) x n matrix.
Matrix concatenate_views(const MultiViewDataset& dataset);

}  // namespace mvsc
