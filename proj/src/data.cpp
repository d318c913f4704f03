#include "mvsc/data.hpp"

#include "mvsc/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string_view>

namespace fs = std::filesystem;

namespace mvsc {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string where(const fs::path& file, std::size_t line) {
    return file.string() + ":" + std::to_string(line);
}

// Returns the non-blank lines of a file with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_lines(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError(file.string() + ": cannot open file");
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) continue;
        lines.emplace_back(number, std::move(line));
    }
    if (lines.empty()) throw DataError(file.string() + ": file is empty");
    return lines;
}

double parse_double(std::string_view cell, const fs::path& file, std::size_t line) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError(where(file, line) + ": non-numeric cell '" + std::string(cell) + "'");
    }
    if (!std::isfinite(value)) {
        throw DataError(where(file, line) + ": non-finite value '" + std::string(cell) + "'");
    }
    return value;
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void ensure_writable(std::ofstream& out, const fs::path& file) {
    if (!out) throw DataError(file.string() + ": cannot open for writing");
}

}  // namespace

int MultiViewDataset::n_label_classes() const {
    if (!labels) return 0;
    return static_cast<int>(std::set<int>(labels->begin(), labels->end()).size());
}

void MultiViewDataset::validate() const {
    if (views.empty()) throw DataError("dataset has no views");
    const Index n = views.front().cols();
    if (n < 2) throw DataError("dataset needs at least 2 samples");
    for (std::size_t v = 0; v < views.size(); ++v) {
        const Matrix& x = views[v];
        if (x.rows() < 1) throw DataError("view " + std::to_string(v + 1) + " has no features");
        if (x.cols() != n) {
            throw DataError("view " + std::to_string(v + 1) + " has " + std::to_string(x.cols()) +
                            " samples, expected " + std::to_string(n));
        }
        if (!x.allFinite()) throw DataError("view " + std::to_string(v + 1) + " has non-finite entries");
    }
    if (labels && static_cast<Index>(labels->size()) != n) {
        throw DataError("labels have length " + std::to_string(labels->size()) + ", expected " +
                        std::to_string(n));
    }
}

NormalizeScheme parse_normalize_scheme(const std::string& name) {
    if (name == "none") return NormalizeScheme::none;
    if (name == "l2" || name == "unit_l2_per_sample") return NormalizeScheme::unit_l2_per_sample;
    if (name == "minmax" || name == "minmax_per_feature") return NormalizeScheme::minmax_per_feature;
    throw std::invalid_argument("unknown normalization scheme '" + name + "'");
}

std::string to_string(NormalizeScheme scheme) {
    switch (scheme) {
        case NormalizeScheme::none: return "none";
        case NormalizeScheme::unit_l2_per_sample: return "unit_l2_per_sample";
        case NormalizeScheme::minmax_per_feature: return "minmax_per_feature";
    }
    return "none";
}

Matrix read_matrix_csv(const fs::path& file) {
    const auto lines = read_lines(file);
    std::vector<std::vector<double>> rows;
    rows.reserve(lines.size());
    std::size_t width = 0;
    for (const auto& [number, text] : lines) {
        std::vector<double> row;
        std::string_view rest(text);
        while (true) {
            const auto comma = rest.find(',');
            row.push_back(parse_double(rest.substr(0, comma), file, number));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw DataError(where(file, number) + ": ragged row with " + std::to_string(row.size()) +
                            " columns, expected " + std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    Matrix out(static_cast<Index>(width), static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < width; ++k) out(static_cast<Index>(k), static_cast<Index>(i)) = rows[i][k];
    }
    return out;
}

void write_matrix_csv(const Matrix& m, const fs::path& file) {
    std::ofstream out(file);
    ensure_writable(out, file);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw DataError(file.string() + ": write failed");
}

Labels load_labels(const fs::path& file) {
    Labels labels;
    for (const auto& [number, text] : read_lines(file)) {
        const std::string_view cell = trim(text);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            throw DataError(where(file, number) + ": label '" + std::string(cell) + "' is not an integer");
        }
        labels.push_back(value);
    }
    return labels;
}

void save_labels(const Labels& labels, const fs::path& file) {
    std::ofstream out(file);
    ensure_writable(out, file);
    for (int label : labels) out << label << '\n';
    if (!out) throw DataError(file.string() + ": write failed");
}

MultiViewDataset load_dataset(const fs::path& directory) {
    if (!fs::is_directory(directory)) throw DataError(directory.string() + ": not a directory");
    MultiViewDataset dataset;
    for (int v = 1;; ++v) {
        const fs::path file = directory / ("view_" + std::to_string(v) + ".csv");
        if (!fs::exists(file)) break;
        Matrix x = read_matrix_csv(file);
        if (!dataset.views.empty() && x.cols() != dataset.n_samples()) {
            throw DataError(file.string() + ": sample-count mismatch, " + std::to_string(x.cols()) +
                            " rows but view_1.csv has " + std::to_string(dataset.n_samples()));
        }
        dataset.views.push_back(std::move(x));
    }
    if (dataset.views.empty()) throw DataError(directory.string() + ": no view_1.csv found");

    const fs::path label_file = directory / "labels.csv";
    if (fs::exists(label_file)) {
        Labels labels = load_labels(label_file);
        if (static_cast<Index>(labels.size()) != dataset.n_samples()) {
            throw DataError(label_file.string() + ": " + std::to_string(labels.size()) +
                            " labels for " + std::to_string(dataset.n_samples()) + " samples");
        }
        dataset.labels = std::move(labels);
    }
    dataset.validate();
    return dataset;
}

void save_dataset(const MultiViewDataset& dataset, const fs::path& directory) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw DataError(directory.string() + ": " + ec.message());
    for (std::size_t v = 0; v < dataset.views.size(); ++v) {
        write_matrix_csv(dataset.views[v].transpose(), directory / ("view_" + std::to_string(v + 1) + ".csv"));
    }
    if (dataset.labels) save_labels(*dataset.labels, directory / "labels.csv");
}

MultiViewDataset normalize(const MultiViewDataset& dataset, NormalizeScheme scheme) {
    MultiViewDataset out = dataset;
    switch (scheme) {
        case NormalizeScheme::none:
            break;
        case NormalizeScheme::unit_l2_per_sample:
            for (Matrix& x : out.views) {
                for (Index i = 0; i < x.cols(); ++i) {
                    const double norm = x.col(i).norm();
                    if (norm > 0.0) x.col(i) /= norm;
                }
            }
            break;
        case NormalizeScheme::minmax_per_feature:
            for (Matrix& x : out.views) {
                for (Index k = 0; k < x.rows(); ++k) {
                    const double lo = x.row(k).minCoeff();
                    const double span = x.row(k).maxCoeff() - lo;
                    if (span > 0.0) {
                        x.row(k) = (x.row(k).array() - lo) / span;
                    } else {
                        x.row(k).setZero();
                    }
                }
            }
            break;
    }
    return out;
}

void SynthSpec::validate() const {
    if (clusters < 2) throw std::invalid_argument("synthetic spec needs at least 2 clusters");
    if (samples_per_cluster < 2) throw std::invalid_argument("synthetic spec needs at least 2 samples per cluster");
    if (view_dims.empty()) throw std::invalid_argument("synthetic spec needs at least one view");
    for (int d : view_dims) {
        if (d < 1) throw std::invalid_argument("view dimensions must be positive");
    }
    if (!(between_cluster_separation > 0.0)) throw std::invalid_argument("separation must be positive");
    if (!(within_cluster_std > 0.0)) throw std::invalid_argument("within-cluster std must be positive");
    if (!noise_feature_counts.empty() && noise_feature_counts.size() != view_dims.size()) {
        throw std::invalid_argument("noise feature counts must match the number of views");
    }
    if (!(noise_std_ratio >= 0.0)) throw std::invalid_argument("noise std ratio must be nonnegative");
    for (int k : noise_feature_counts) {
        if (k < 0) throw std::invalid_argument("noise feature counts must be nonnegative");
    }
}

MultiViewDataset generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const Index c = spec.clusters;
    const Index n = c * spec.samples_per_cluster;

    MultiViewDataset dataset;
    Labels labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i / spec.samples_per_cluster);

    for (std::size_t v = 0; v < spec.view_dims.size(); ++v) {
        const Index d = spec.view_dims[v];
        const Index noise = spec.noise_feature_counts.empty() ? 0 : spec.noise_feature_counts[v];

        Matrix centroids(d, c);
        for (Index j = 0; j < c; ++j) {
            for (Index k = 0; k < d; ++k) centroids(k, j) = rng.normal();
        }
        double min_gap = std::numeric_limits<double>::infinity();
        for (Index a = 0; a < c; ++a) {
            for (Index b = a + 1; b < c; ++b) min_gap = std::min(min_gap, (centroids.col(a) - centroids.col(b)).norm());
        }
        if (min_gap > 0.0) centroids *= spec.between_cluster_separation * spec.within_cluster_std / min_gap;

        Matrix x(d + noise, n);
        for (Index i = 0; i < n; ++i) {
            const Index j = labels[static_cast<std::size_t>(i)];
            for (Index k = 0; k < d; ++k) x(k, i) = centroids(k, j) + spec.within_cluster_std * rng.normal();
        }
        const double noise_std = spec.noise_std_ratio * spec.within_cluster_std;
        for (Index i = 0; i < n; ++i) {
            for (Index k = d; k < d + noise; ++k) x(k, i) = noise_std * rng.normal();
        }
        dataset.views.push_back(std::move(x));
    }
    dataset.labels = std::move(labels);
    return dataset;
}

Matrix concatenate_views(const MultiViewDataset& dataset) {
    Index rows = 0;
    for (const Matrix& x : dataset.views) rows += x.rows();
    Matrix out(rows, dataset.n_samples());
    Index offset = 0;
    for (const Matrix& x : dataset.views) {
        out.middleRows(offset, x.rows()) = x;
        offset += x.rows();
    }
    return out;
}

}  // namespace mvsc
