//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace molprobe {

namespace {

void check_sizes(std::size_t a, std::size_t b, const char *what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": size mismatch ("
                                + std::to_string(a) + " vs "
                                + std::to_string(b) + ")");
  if (a == 0)
    throw std::invalid_argument(std::string(what) + ": empty input");
}

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

std::vector<double> mid_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]])
      ++j;
    const double rank = (i + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> roc_auc(std::span<const double> scores,
                              std::span<const int> labels) {
  check_sizes(scores.size(), labels.size(), "roc_auc");
  std::vector<double> ranks = mid_ranks(scores);
  double pos = 0, neg = 0, rank_sum = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      pos += 1;
      rank_sum += ranks[i];
    } else if (labels[i] == 0) {
      neg += 1;
    } else {
      throw std::invalid_argument("roc_auc: labels must be 0 or 1");
    }
  }
  if (pos == 0 || neg == 0)
    return std::nullopt;
  return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b) {
  check_sizes(a.size(), b.size(), "pearson");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2)
    return std::nullopt;
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - ma, y = b[i] - mb;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  if (saa == 0 || sbb == 0)
    return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<double> spearman(std::span<const double> a,
                               std::span<const double> b) {
  check_sizes(a.size(), b.size(), "spearman");
  std::vector<double> ra = mid_ranks(a), rb = mid_ranks(b);
  return pearson(ra, rb);
}

double mse(std::span<const double> pred, std::span<const double> target) {
  check_sizes(pred.size(), target.size(), "mse");
  double s = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    s += (pred[i] - target[i]) * (pred[i] - target[i]);
  return s / pred.size();
}

double cross_entropy(const Eigen::MatrixXd &logits,
                     std::span<const int> labels) {
  check_sizes(static_cast<std::size_t>(logits.rows()), labels.size(),
              "cross_entropy");
  double total = 0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const int y = labels[i];
    if (y < 0 || y >= logits.cols())
      throw std::invalid_argument("cross_entropy: label out of range");
    const double m = logits.row(i).maxCoeff();
    const double lse = m + std::log((logits.row(i).array() - m).exp().sum());
    total += lse - logits(i, y);
  }
  return total / logits.rows();
}

double binary_cross_entropy(std::span<const double> logits,
                            std::span<const int> labels) {
  check_sizes(logits.size(), labels.size(), "binary_cross_entropy");
  double total = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw std::invalid_argument("binary_cross_entropy: labels must be 0/1");
    total += labels[i] ? softplus(-logits[i]) : softplus(logits[i]);
  }
  return total / logits.size();
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd r;
  r.n = static_cast<int>(values.size());
  if (r.n == 0)
    return r;
  r.mean = std::accumulate(values.begin(), values.end(), 0.0) / r.n;
  double ss = 0;
  for (double v: values)
    ss += (v - r.mean) * (v - r.mean);
  r.population_std = std::sqrt(ss / r.n);
  r.sample_std = r.n > 1 ? std::sqrt(ss / (r.n - 1)) : 0.0;
  return r;
}

}  // namespace molprobe
