//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_METRICS_METRICS_H_
#define MOLPROBE_METRICS_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace molprobe {

// Fractional ranks starting at 1; tied values share their mean rank.
std::vector<double> mid_ranks(std::span<const double> values);

// Mann-Whitney estimate of P(score_pos > score_neg) + P(equal) / 2. Labels
// are 0/1. nullopt unless both classes are present.
std::optional<double> roc_auc(std::span<const double> scores,
                              std::span<const int> labels);

// nullopt for fewer than two points or zero variance.
std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b);

// Pearson correlation of mid-ranks.
std::optional<double> spearman(std::span<const double> a,
                               std::span<const double> b);

double mse(std::span<const double> pred, std::span<const double> target);

// Mean softmax cross-entropy; one row of logits per example, labels are
// class indices.
double cross_entropy(const Eigen::MatrixXd &logits,
                     std::span<const int> labels);

// Mean sigmoid cross-entropy on raw logits with 0/1 labels.
double binary_cross_entropy(std::span<const double> logits,
                            std::span<const int> labels);

struct MeanStd {
  int n = 0;
  double mean = 0.0;
  double sample_std = 0.0;      // n - 1 denominator, 0 for n < 2
  double population_std = 0.0;  // n denominator
};

MeanStd mean_std(std::span<const double> values);

}  // namespace molprobe

#endif  // MOLPROBE_METRICS_METRICS_H_
