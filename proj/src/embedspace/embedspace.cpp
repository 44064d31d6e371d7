//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/embedspace/embedspace.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "molprobe/core/format.h"
#include "molprobe/core/random.h"

namespace molprobe {

PairKind classify_pair(const LabelMatrix &labels, int a, int b) {
  bool shared = false;
  for (int t = 0; t < labels.cols(); ++t) {
    Label x = labels(a, t), y = labels(b, t);
    if (x == Label::kMissing || y == Label::kMissing)
      continue;
    if (x != y)
      return PairKind::kNegative;
    shared = true;
  }
  return shared ? PairKind::kPositive : PairKind::kNone;
}

namespace {

constexpr std::int64_t kEnumerateLimit = 20'000'000;

std::vector<MoleculePair> take(std::vector<MoleculePair> pool, int count,
                               Rng &rng) {
  const std::size_t k = std::min<std::size_t>(pool.size(), count);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

PairSet build_pairs(const LabelMatrix &labels, int count, std::uint64_t seed) {
  if (count < 0)
    throw std::invalid_argument("pair count must be non-negative");
  PairSet out;
  out.provenance = fmt::format(
      "agree on all co-labelled tasks (>=1) vs differ on any; seed={}", seed);

  const std::int64_t n = labels.rows();
  const std::int64_t total = n * (n - 1) / 2;
  if (total <= kEnumerateLimit) {
    std::vector<MoleculePair> pos, neg;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        PairKind k = classify_pair(labels, a, b);
        if (k == PairKind::kPositive)
          pos.emplace_back(a, b);
        else if (k == PairKind::kNegative)
          neg.emplace_back(a, b);
      }
    }
    Rng pos_rng(derive_seed(seed, 1)), neg_rng(derive_seed(seed, 2));
    out.positives = take(std::move(pos), count, pos_rng);
    out.negatives = take(std::move(neg), count, neg_rng);
  } else {
    Rng rng(derive_seed(seed, 3));
    std::unordered_set<std::uint64_t> seen;
    const std::int64_t budget = std::max<std::int64_t>(1000, 200LL * count);
    for (std::int64_t draw = 0; draw < budget; ++draw) {
      if (static_cast<int>(out.positives.size()) == count
          && static_cast<int>(out.negatives.size()) == count)
        break;
      int a = static_cast<int>(rng.below(n));
      int b = static_cast<int>(rng.below(n - 1));
      if (b >= a)
        ++b;
      if (a > b)
        std::swap(a, b);
      if (!seen.insert(static_cast<std::uint64_t>(a) * n + b).second)
        continue;
      PairKind k = classify_pair(labels, a, b);
      auto &dst = k == PairKind::kPositive ? out.positives : out.negatives;
      if (k != PairKind::kNone && static_cast<int>(dst.size()) < count)
        dst.emplace_back(a, b);
    }
  }
  out.positive_shortfall = count - static_cast<int>(out.positives.size());
  out.negative_shortfall = count - static_cast<int>(out.negatives.size());
  return out;
}

double cosine_distance(const Eigen::Ref<const Eigen::VectorXd> &a,
                       const Eigen::Ref<const Eigen::VectorXd> &b) {
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na == 0 || nb == 0)
    throw std::invalid_argument("cosine distance of a zero vector");
  return std::clamp(1.0 - a.dot(b) / std::sqrt(na * nb), 0.0, 2.0);
}

AlignmentReport alignment(const Eigen::MatrixXd &embeddings,
                          const PairSet &pairs, int bins) {
  AlignmentReport r;
  auto collect = [&](const std::vector<MoleculePair> &src,
                     std::vector<double> &dst) {
    for (auto [a, b]: src) {
      if (a < 0 || b < 0 || a >= embeddings.rows() || b >= embeddings.rows())
        throw std::out_of_range(
            fmt::format("pair ({}, {}) outside {} embeddings", a, b,
                        embeddings.rows()));
      auto za = embeddings.row(a).transpose(), zb = embeddings.row(b).transpose();
      if (za.norm() == 0 || zb.norm() == 0) {
        ++r.skipped;
        continue;
      }
      dst.push_back(cosine_distance(za, zb));
    }
  };
  collect(pairs.positives, r.positive_distances);
  collect(pairs.negatives, r.negative_distances);
  r.positive = make_histogram(r.positive_distances, 0.0, 2.0, bins);
  r.negative = make_histogram(r.negative_distances, 0.0, 2.0, bins);

  auto mean = [](const std::vector<double> &v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  if (!r.positive_distances.empty() && !r.negative_distances.empty())
    r.separation = mean(r.negative_distances) - mean(r.positive_distances);
  return r;
}

nlohmann::ordered_json to_json(const AlignmentReport &report) {
  nlohmann::ordered_json j;
  j["positive"] = to_json(report.positive);
  j["negative"] = to_json(report.negative);
  j["separation"] = report.separation ? nlohmann::ordered_json(*report.separation)
                                      : nlohmann::ordered_json(nullptr);
  j["skipped_pairs"] = report.skipped;
  return j;
}

UniformityReport uniformity(const Eigen::MatrixXd &embeddings, double t) {
  if (!(t > 0))
    throw std::invalid_argument("uniformity temperature must be positive");
  UniformityReport r;
  std::vector<Eigen::VectorXd> rows;
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    const double norm = embeddings.row(i).norm();
    if (norm == 0 || !std::isfinite(norm)) {
      ++r.skipped;
      continue;
    }
    rows.push_back(embeddings.row(i).transpose() / norm);
  }
  const std::size_t n = rows.size();
  if (n < 2)
    return r;

  // Two passes for a stable log-mean-exp.
  std::vector<double> exponents;
  exponents.reserve(n * (n - 1) / 2);
  double top = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double e = -t * (rows[i] - rows[j]).squaredNorm();
      exponents.push_back(e);
      top = std::max(top, e);
    }
  }
  double sum = 0.0;
  for (double e: exponents)
    sum += std::exp(e - top);
  r.value = top + std::log(sum / static_cast<double>(exponents.size()));
  return r;
}

SpectrumReport spectrum(const Eigen::MatrixXd &embeddings,
                        const SpectrumOptions &options) {
  if (!embeddings.allFinite())
    throw std::invalid_argument("spectrum of a non-finite matrix");
  SpectrumReport r;
  r.threshold = options.threshold;
  const Eigen::Index k = std::min(embeddings.rows(), embeddings.cols());
  if (k > 0) {
    Eigen::MatrixXd z = embeddings;
    if (options.center)
      z.rowwise() -= z.colwise().mean();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(z);
    const Eigen::VectorXd &s = svd.singularValues();
    r.singular_values.assign(s.data(), s.data() + s.size());
  }

  const double top = r.singular_values.empty() ? 0.0 : r.singular_values[0];
  const double total = std::accumulate(r.singular_values.begin(),
                                       r.singular_values.end(), 0.0);
  double entropy = 0.0;
  for (double s: r.singular_values) {
    r.log_values.push_back(s > 0 ? std::log(s) : -INFINITY);
    if (s > options.threshold * top && s > 0)
      ++r.above_threshold;
    if (s > 0) {
      const double p = s / total;
      entropy -= p * std::log(p);
    }
  }
  r.effective_rank = total > 0 ? std::exp(entropy) : 0.0;
  r.collapsed = 2 * r.above_threshold < embeddings.cols();
  return r;
}

nlohmann::ordered_json to_json(const SpectrumReport &report) {
  nlohmann::ordered_json j;
  j["singular_values"] = report.singular_values;
  nlohmann::ordered_json logs = nlohmann::ordered_json::array();
  for (double v: report.log_values)
    logs.push_back(std::isfinite(v) ? nlohmann::ordered_json(v)
                                    : nlohmann::ordered_json(nullptr));
  j["log_singular_values"] = logs;
  j["threshold"] = report.threshold;
  j["above_threshold"] = report.above_threshold;
  j["effective_rank"] = report.effective_rank;
  j["collapsed"] = report.collapsed;
  return j;
}

void write_spectrum_csv(const SpectrumReport &report,
                        const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << "index,sigma,log_sigma\n";
  for (std::size_t i = 0; i < report.singular_values.size(); ++i) {
    const double lg = report.log_values[i];
    out << i << ',' << format_double(report.singular_values[i]) << ','
        << (std::isfinite(lg) ? format_double(lg) : std::string("-inf"))
        << '\n';
  }
  if (!out)
    throw std::runtime_error("write failed: " + path.string());
}

}  // namespace molprobe
