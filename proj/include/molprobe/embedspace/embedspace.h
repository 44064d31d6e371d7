//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_EMBEDSPACE_EMBEDSPACE_H_
#define MOLPROBE_EMBEDSPACE_EMBEDSPACE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "molprobe/core/histogram.h"
#include "molprobe/core/labels.h"

namespace molprobe {

using MoleculePair = std::pair<int, int>;  // first < second

// Positive pairs agree on every task both molecules have a label for (at
// least one such task); negative pairs disagree on at least one.
struct PairSet {
  std::vector<MoleculePair> positives;
  std::vector<MoleculePair> negatives;
  std::string provenance;
  int positive_shortfall = 0;  // requested minus delivered
  int negative_shortfall = 0;
};

enum class PairKind { kNone, kPositive, kNegative };

PairKind classify_pair(const LabelMatrix &labels, int a, int b);

// Seeded sampling without replacement. Small datasets are enumerated
// exactly; large ones use rejection sampling with a bounded number of draws,
// so a shortfall there means "not found", not "does not exist".
PairSet build_pairs(const LabelMatrix &labels, int count, std::uint64_t seed);

double cosine_distance(const Eigen::Ref<const Eigen::VectorXd> &a,
                       const Eigen::Ref<const Eigen::VectorXd> &b);

struct AlignmentReport {
  std::vector<double> positive_distances;
  std::vector<double> negative_distances;
  Histogram positive;
  Histogram negative;
  std::optional<double> separation;  // mean(neg) - mean(pos)
  int skipped = 0;                   // pairs touching a zero-norm row
};

AlignmentReport alignment(const Eigen::MatrixXd &embeddings,
                          const PairSet &pairs, int bins = 40);

nlohmann::ordered_json to_json(const AlignmentReport &report);

struct UniformityReport {
  std::optional<double> value;
  int skipped = 0;  // zero-norm rows
};

// log of the mean over i < j of exp(-t |z_i - z_j|^2) on unit-normalised
// rows. Defined for at least two usable rows.
UniformityReport uniformity(const Eigen::MatrixXd &embeddings, double t = 2.0);

struct SpectrumOptions {
  double threshold = 1e-6;  // relative to the largest singular value
  bool center = false;      // subtract the column means first
};

struct SpectrumReport {
  std::vector<double> singular_values;  // descending, min(rows, cols) of them
  std::vector<double> log_values;       // natural log, -inf for zeros
  int above_threshold = 0;
  double threshold = 0.0;
  double effective_rank = 0.0;  // exp of the entropy of normalised values
  bool collapsed = false;       // above_threshold < cols / 2
};

SpectrumReport spectrum(const Eigen::MatrixXd &embeddings,
                        const SpectrumOptions &options = {});

nlohmann::ordered_json to_json(const SpectrumReport &report);

// index,sigma,log_sigma
void write_spectrum_csv(const SpectrumReport &report,
                        const std::filesystem::path &path);

}  // namespace molprobe

#endif  // MOLPROBE_EMBEDSPACE_EMBEDSPACE_H_
