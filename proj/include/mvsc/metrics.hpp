#pragma once

#include "mvsc/types.hpp"

#include <string>

namespace mvsc {

struct MetricReport {
    double acc = 0.0;
    double nmi = 0.0;
    double ari = 0.0;
    double precision = 0.0;
    double fscore = 0.0;
};

struct PairwiseScores {
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
};

enum class NmiNormalization { geometric, arithmetic };

NmiNormalization parse_nmi_normalization(const std::string& name);

/// Best fraction of matched samples over one-to-one label mappings.
double accuracy(const Labels& truth, const Labels& pred);

/// Mutual information over sqrt(H(truth) H(pred)) (or the arithmetic mean of
/// the entropies). 1 when both partitions are single-cluster, 0 when only one is.
double nmi(const Labels& truth, const Labels& pred, NmiNormalization norm = NmiNormalization::geometric);

/// Adjusted Rand index.
double ari(const Labels& truth, const Labels& pred);

/// Pair-counting precision, recall and F-score over unordered sample pairs.
PairwiseScores pairwise_prf(const Labels& truth, const Labels& pred);

MetricReport evaluate(const Labels& truth, const Labels& pred, NmiNormalization norm = NmiNormalization::geometric);

/// Assignment maximizing sum_i weight(i, match[i]) for a square matrix.
std::vector<Index> max_weight_assignment(const Matrix& weight);

}  // namespace mvsc
