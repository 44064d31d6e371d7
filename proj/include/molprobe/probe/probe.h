//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_PROBE_PROBE_H_
#define MOLPROBE_PROBE_PROBE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "molprobe/metrics/metrics.h"

namespace molprobe {

enum class TaskKind { kRegression, kBinary, kMulticlass };

std::string_view task_kind_name(TaskKind kind);
TaskKind parse_task_kind(std::string_view name);

struct ProbeConfig {
  int hidden_layers = 1;
  int width = 600;
  int epochs = 100;
  double learning_rate = 1e-3;
  int batch_size = 256;
  std::uint64_t seed = 0;
  TaskKind task = TaskKind::kRegression;
  int num_classes = 2;  // multiclass only
  // z-score features (and regression targets) with training statistics.
  bool standardize = true;

  // Throws std::invalid_argument outside hidden_layers 0..3,
  // width 100..1200 and positive epochs / rate / batch size.
  void validate() const;
};

// Features with one target per row: a real value for regression, 0/1 for
// binary tasks, the class index for multiclass tasks.
struct ProbeData {
  Eigen::MatrixXd features;
  Eigen::VectorXd targets;

  int size() const { return static_cast<int>(features.rows()); }
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
};

class ProbeModel {
public:
  ProbeModel() = default;

  int input_dim() const;
  int output_dim() const;
  TaskKind task() const { return task_; }
  const std::vector<DenseLayer> &layers() const { return layers_; }
  std::vector<DenseLayer> &layers() { return layers_; }

  // Raw outputs (regression value or logits) for unscaled features; the
  // stored standardisation is applied first.
  Eigen::MatrixXd predict(const Eigen::MatrixXd &features) const;

  // Outputs for already standardised features, in the training scale.
  Eigen::MatrixXd forward(const Eigen::MatrixXd &x) const;

  const Eigen::RowVectorXd &feature_mean() const { return feature_mean_; }
  const Eigen::RowVectorXd &feature_scale() const { return feature_scale_; }
  double target_mean() const { return target_mean_; }
  double target_scale() const { return target_scale_; }

  void set_feature_scaling(Eigen::RowVectorXd mean, Eigen::RowVectorXd scale);
  void set_target_scaling(double mean, double scale);

  Eigen::MatrixXd standardize(const Eigen::MatrixXd &features) const;

private:
  friend ProbeModel build_probe(const ProbeConfig &, int, int);
  friend ProbeModel load_probe(const std::filesystem::path &);

  TaskKind task_ = TaskKind::kRegression;
  std::vector<DenseLayer> layers_;
  Eigen::RowVectorXd feature_mean_, feature_scale_;
  double target_mean_ = 0.0, target_scale_ = 1.0;
};

// Glorot-uniform weights and zero biases, deterministic in config.seed.
ProbeModel build_probe(const ProbeConfig &config, int input_dim,
                       int output_dim);

// Output width for a task: 1 for regression and binary, else num_classes.
int output_dim_for(const ProbeConfig &config);

using Gradient = std::vector<DenseLayer>;

// Mean loss over the rows of standardised `x` and its gradient. Targets are
// in the training scale (standardised for regression).
double loss_and_gradient(const ProbeModel &model, const Eigen::MatrixXd &x,
                         const Eigen::VectorXd &targets, Gradient *grad);

class NonFiniteGradientError: public std::runtime_error {
public:
  explicit NonFiniteGradientError(std::string block);
  const std::string &block() const { return block_; }

private:
  std::string block_;
};

struct AdamState {
  Gradient m, v;
  std::int64_t step = 0;

  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;
};

// Bias-corrected Adam update. Throws NonFiniteGradientError (before touching
// anything) when a gradient block holds NaN or infinity.
void adam_step(ProbeModel &model, AdamState &state, const Gradient &grad,
               double learning_rate);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
};

struct TrainResult {
  ProbeModel model;  // best-validation snapshot
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_valid_loss = 0.0;
};

TrainResult train_probe(const ProbeConfig &config, const ProbeData &train,
                        const ProbeData &valid);

struct ProbeScores {
  double loss = 0.0;           // MSE or cross-entropy
  std::optional<double> auc;   // binary tasks with both classes present
};

ProbeScores evaluate_probe(const ProbeModel &model, const ProbeData &data);

nlohmann::ordered_json to_json(const TrainResult &result);

// Stores the snapshot in the embedding file format: one row holding every
// parameter, with the shapes in the provenance string.
void save_probe(const ProbeModel &model, const std::filesystem::path &path);
ProbeModel load_probe(const std::filesystem::path &path);

}  // namespace molprobe

#endif  // MOLPROBE_PROBE_PROBE_H_
