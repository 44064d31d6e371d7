//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/probe/probe.h"

#include <cmath>
#include <numeric>

#include "molprobe/core/init.h"
#include "molprobe/core/random.h"
#include "molprobe/encoder/embedding.h"

namespace molprobe {

namespace {

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0)
    return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_targets(const ProbeData &data, TaskKind task, int classes,
                   const char *split) {
  if (data.size() == 0)
    throw std::invalid_argument(std::string("empty ") + split + " split");
  if (data.targets.size() != data.features.rows())
    throw std::invalid_argument(std::string(split)
                                + " split: targets and features differ");
  if (!data.features.allFinite() || !data.targets.allFinite())
    throw std::invalid_argument(std::string(split)
                                + " split holds non-finite values");
  if (task == TaskKind::kRegression)
    return;
  const int limit = task == TaskKind::kBinary ? 2 : classes;
  for (double t: data.targets) {
    if (t != std::floor(t) || t < 0 || t >= limit)
      throw std::invalid_argument(std::string(split)
                                  + " split: class label out of range");
  }
}

// Loss in original target units for standardised features.
double scaled_loss(const ProbeModel &model, const Eigen::MatrixXd &x,
                   const Eigen::VectorXd &train_scale_targets) {
  double loss = loss_and_gradient(model, x, train_scale_targets, nullptr);
  if (model.task() == TaskKind::kRegression)
    loss *= model.target_scale() * model.target_scale();
  return loss;
}

}  // namespace

std::string_view task_kind_name(TaskKind kind) {
  switch (kind) {
  case TaskKind::kRegression:
    return "regression";
  case TaskKind::kBinary:
    return "binary";
  case TaskKind::kMulticlass:
    return "multiclass";
  }
  return "?";
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "regression")
    return TaskKind::kRegression;
  if (name == "binary")
    return TaskKind::kBinary;
  if (name == "multiclass")
    return TaskKind::kMulticlass;
  throw std::invalid_argument("unknown task kind '" + std::string(name) + "'");
}

void ProbeConfig::validate() const {
  if (hidden_layers < 0 || hidden_layers > 3)
    throw std::invalid_argument("probe hidden_layers must be in 0..3, got "
                                + std::to_string(hidden_layers));
  if (hidden_layers > 0 && (width < 100 || width > 1200))
    throw std::invalid_argument("probe width must be in 100..1200, got "
                                + std::to_string(width));
  if (epochs < 1)
    throw std::invalid_argument("probe epochs must be positive");
  if (!(learning_rate > 0))
    throw std::invalid_argument("probe learning rate must be positive");
  if (batch_size < 1)
    throw std::invalid_argument("probe batch size must be positive");
  if (task == TaskKind::kMulticlass && num_classes < 2)
    throw std::invalid_argument("multiclass probe needs at least 2 classes");
}

int output_dim_for(const ProbeConfig &config) {
  return config.task == TaskKind::kMulticlass ? config.num_classes : 1;
}

int ProbeModel::input_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols());
}

int ProbeModel::output_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

void ProbeModel::set_feature_scaling(Eigen::RowVectorXd mean,
                                     Eigen::RowVectorXd scale) {
  feature_mean_ = std::move(mean);
  feature_scale_ = std::move(scale);
}

void ProbeModel::set_target_scaling(double mean, double scale) {
  target_mean_ = mean;
  target_scale_ = scale;
}

Eigen::MatrixXd ProbeModel::standardize(const Eigen::MatrixXd &features) const {
  if (features.cols() != input_dim())
    throw std::invalid_argument("probe expects " + std::to_string(input_dim())
                                + " features, got "
                                + std::to_string(features.cols()));
  if (feature_mean_.size() == 0)
    return features;
  return (features.rowwise() - feature_mean_).array().rowwise()
         / feature_scale_.array();
}

Eigen::MatrixXd ProbeModel::forward(const Eigen::MatrixXd &x) const {
  Eigen::MatrixXd a = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = (a * layers_[i].weight.transpose()).rowwise()
                        + layers_[i].bias.transpose();
    a = i + 1 < layers_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::MatrixXd ProbeModel::predict(const Eigen::MatrixXd &features) const {
  Eigen::MatrixXd out = forward(standardize(features));
  if (task_ == TaskKind::kRegression)
    out = (out.array() * target_scale_ + target_mean_).matrix();
  return out;
}

ProbeModel build_probe(const ProbeConfig &config, int input_dim,
                       int output_dim) {
  config.validate();
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("probe dimensions must be positive");
  ProbeModel model;
  model.task_ = config.task;
  Rng rng(config.seed);
  int in = input_dim;
  for (int i = 0; i <= config.hidden_layers; ++i) {
    const int out = i == config.hidden_layers ? output_dim : config.width;
    DenseLayer l;
    l.weight.resize(out, in);
    glorot_uniform(l.weight, rng);
    l.bias = Eigen::VectorXd::Zero(out);
    model.layers_.push_back(std::move(l));
    in = out;
  }
  return model;
}

double loss_and_gradient(const ProbeModel &model, const Eigen::MatrixXd &x,
                         const Eigen::VectorXd &targets, Gradient *grad) {
  const auto &layers = model.layers();
  const std::size_t depth = layers.size();
  const double n = static_cast<double>(x.rows());
  if (x.rows() == 0 || targets.size() != x.rows())
    throw std::invalid_argument("loss needs matching non-empty inputs");

  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(depth + 1);
  acts.push_back(x);
  for (std::size_t i = 0; i < depth; ++i) {
    Eigen::MatrixXd z = (acts.back() * layers[i].weight.transpose()).rowwise()
                        + layers[i].bias.transpose();
    acts.push_back(i + 1 < depth ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z);
  }
  const Eigen::MatrixXd &out = acts.back();

  Eigen::MatrixXd delta(out.rows(), out.cols());
  double loss = 0.0;
  switch (model.task()) {
  case TaskKind::kRegression: {
    Eigen::VectorXd diff = out.col(0) - targets;
    loss = diff.squaredNorm() / n;
    delta.col(0) = 2.0 * diff / n;
    break;
  }
  case TaskKind::kBinary:
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const double z = out(r, 0);
      loss += targets(r) > 0.5 ? softplus(-z) : softplus(z);
      delta(r, 0) = (sigmoid(z) - targets(r)) / n;
    }
    loss /= n;
    break;
  case TaskKind::kMulticlass:
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const double m = out.row(r).maxCoeff();
      Eigen::RowVectorXd e = (out.row(r).array() - m).exp();
      const double s = e.sum();
      const int y = static_cast<int>(targets(r));
      loss += m + std::log(s) - out(r, y);
      delta.row(r) = e / (s * n);
      delta(r, y) -= 1.0 / n;
    }
    loss /= n;
    break;
  }

  if (grad) {
    grad->resize(depth);
    for (std::size_t i = depth; i-- > 0;) {
      (*grad)[i].weight = delta.transpose() * acts[i];
      (*grad)[i].bias = delta.colwise().sum().transpose();
      if (i > 0) {
        delta = (delta * layers[i].weight).array()
                * (acts[i].array() > 0.0).cast<double>();
      }
    }
  }
  return loss;
}

NonFiniteGradientError::NonFiniteGradientError(std::string block)
    : std::runtime_error("non-finite gradient in " + block),
      block_(std::move(block)) { }

void adam_step(ProbeModel &model, AdamState &state, const Gradient &grad,
               double learning_rate) {
  auto &layers = model.layers();
  if (grad.size() != layers.size())
    throw std::invalid_argument("gradient does not match the model");
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (grad[i].weight.rows() != layers[i].weight.rows()
        || grad[i].weight.cols() != layers[i].weight.cols()
        || grad[i].bias.size() != layers[i].bias.size())
      throw std::invalid_argument("gradient does not match the model");
    if (!grad[i].weight.allFinite())
      throw NonFiniteGradientError("layer " + std::to_string(i) + " weight");
    if (!grad[i].bias.allFinite())
      throw NonFiniteGradientError("layer " + std::to_string(i) + " bias");
  }
  if (state.m.empty()) {
    state.m.resize(layers.size());
    state.v.resize(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) {
      state.m[i].weight = Eigen::MatrixXd::Zero(layers[i].weight.rows(),
                                                layers[i].weight.cols());
      state.m[i].bias = Eigen::VectorXd::Zero(layers[i].bias.size());
      state.v[i] = state.m[i];
    }
  }

  ++state.step;
  const double b1 = AdamState::kBeta1, b2 = AdamState::kBeta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  auto update = [&](auto &param, auto &m, auto &v, const auto &g) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    param.array() -= learning_rate * (m.array() / c1)
                     / ((v.array() / c2).sqrt() + AdamState::kEpsilon);
  };
  for (std::size_t i = 0; i < layers.size(); ++i) {
    update(layers[i].weight, state.m[i].weight, state.v[i].weight,
           grad[i].weight);
    update(layers[i].bias, state.m[i].bias, state.v[i].bias, grad[i].bias);
  }
}

TrainResult train_probe(const ProbeConfig &config, const ProbeData &train,
                        const ProbeData &valid) {
  config.validate();
  check_targets(train, config.task, config.num_classes, "training");
  check_targets(valid, config.task, config.num_classes, "validation");
  if (valid.features.cols() != train.features.cols())
    throw std::invalid_argument("training and validation widths differ");

  const int dim = static_cast<int>(train.features.cols());
  ProbeModel model = build_probe(config, dim, output_dim_for(config));

  if (config.standardize) {
    Eigen::RowVectorXd mean = train.features.colwise().mean();
    Eigen::RowVectorXd scale =
        ((train.features.rowwise() - mean).array().square().colwise().sum()
         / train.size())
            .sqrt();
    for (Eigen::Index c = 0; c < scale.size(); ++c)
      if (!(scale(c) > 1e-12))
        scale(c) = 1.0;
    model.set_feature_scaling(mean, scale);
    if (config.task == TaskKind::kRegression) {
      const double tm = train.targets.mean();
      const double ts =
          std::sqrt((train.targets.array() - tm).square().mean());
      model.set_target_scaling(tm, ts > 1e-12 ? ts : 1.0);
    }
  }

  const Eigen::MatrixXd xtr = model.standardize(train.features);
  const Eigen::MatrixXd xva = model.standardize(valid.features);
  auto to_train_scale = [&](const Eigen::VectorXd &y) -> Eigen::VectorXd {
    if (config.task != TaskKind::kRegression)
      return y;
    return (y.array() - model.target_mean()) / model.target_scale();
  };
  const Eigen::VectorXd ytr = to_train_scale(train.targets);
  const Eigen::VectorXd yva = to_train_scale(valid.targets);

  TrainResult result;
  AdamState adam;
  Rng rng(derive_seed(config.seed, 0x5eed));
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Gradient grad;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(std::span<int>(order), rng);
    for (int start = 0; start < train.size(); start += config.batch_size) {
      const int len = std::min(config.batch_size, train.size() - start);
      std::span<const int> idx(order.data() + start, len);
      Eigen::MatrixXd xb(len, dim);
      Eigen::VectorXd yb(len);
      for (int k = 0; k < len; ++k) {
        xb.row(k) = xtr.row(idx[k]);
        yb(k) = ytr(idx[k]);
      }
      loss_and_gradient(model, xb, yb, &grad);
      adam_step(model, adam, grad, config.learning_rate);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = scaled_loss(model, xtr, ytr);
    rec.valid_loss = scaled_loss(model, xva, yva);
    result.history.push_back(rec);
    if (epoch == 1 || rec.valid_loss < result.best_valid_loss) {
      result.best_valid_loss = rec.valid_loss;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

ProbeScores evaluate_probe(const ProbeModel &model, const ProbeData &data) {
  if (data.size() == 0)
    throw std::invalid_argument("cannot evaluate on an empty split");
  Eigen::MatrixXd out = model.predict(data.features);
  ProbeScores s;
  const std::size_t n = static_cast<std::size_t>(data.size());
  switch (model.task()) {
  case TaskKind::kRegression: {
    std::vector<double> pred(n), target(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = out(static_cast<Eigen::Index>(i), 0);
      target[i] = data.targets(static_cast<Eigen::Index>(i));
    }
    s.loss = mse(pred, target);
    break;
  }
  case TaskKind::kBinary: {
    std::vector<double> logits(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      logits[i] = out(static_cast<Eigen::Index>(i), 0);
      labels[i] = static_cast<int>(data.targets(static_cast<Eigen::Index>(i)));
    }
    s.loss = binary_cross_entropy(logits, labels);
    s.auc = roc_auc(logits, labels);
    break;
  }
  case TaskKind::kMulticlass: {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i)
      labels[i] = static_cast<int>(data.targets(static_cast<Eigen::Index>(i)));
    s.loss = cross_entropy(out, labels);
    break;
  }
  }
  return s;
}

nlohmann::ordered_json to_json(const TrainResult &result) {
  nlohmann::ordered_json j;
  j["best_epoch"] = result.best_epoch;
  j["best_valid_loss"] = result.best_valid_loss;
  nlohmann::ordered_json hist = nlohmann::ordered_json::array();
  for (const EpochRecord &r: result.history)
    hist.push_back({ { "epoch", r.epoch },
                     { "train_loss", r.train_loss },
                     { "valid_loss", r.valid_loss } });
  j["history"] = std::move(hist);
  return j;
}

void save_probe(const ProbeModel &model, const std::filesystem::path &path) {
  nlohmann::ordered_json meta;
  meta["kind"] = "probe";
  meta["task"] = std::string(task_kind_name(model.task()));
  meta["scaled"] = model.feature_mean().size() > 0;
  nlohmann::ordered_json shapes = nlohmann::ordered_json::array();
  std::vector<double> flat;
  for (double v: model.feature_mean())
    flat.push_back(v);
  for (double v: model.feature_scale())
    flat.push_back(v);
  flat.push_back(model.target_mean());
  flat.push_back(model.target_scale());
  for (const DenseLayer &l: model.layers()) {
    shapes.push_back({ l.weight.rows(), l.weight.cols() });
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
        flat.push_back(l.weight(r, c));
    for (double b: l.bias)
      flat.push_back(b);
  }
  meta["shapes"] = std::move(shapes);

  EmbeddingMatrix m;
  m.level = EmbeddingLevel::kGraph;
  m.provenance = meta.dump();
  m.values = Eigen::Map<Eigen::MatrixXd>(flat.data(), 1,
                                         static_cast<Eigen::Index>(flat.size()));
  m.index = { { 0, -1 } };
  save_embeddings(m, path);
}

ProbeModel load_probe(const std::filesystem::path &path) {
  EmbeddingMatrix m = load_embeddings(path);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(m.provenance);
  } catch (const nlohmann::json::exception &) {
    throw EmbeddingFormatError("probe file metadata is not JSON");
  }
  if (meta.value("kind", "") != "probe" || m.rows() != 1)
    throw EmbeddingFormatError("file does not hold a probe snapshot");

  ProbeModel model;
  model.task_ = parse_task_kind(meta.at("task").get<std::string>());
  std::size_t pos = 0;
  const std::size_t total = static_cast<std::size_t>(m.dim());
  auto take = [&]() {
    if (pos >= total)
      throw EmbeddingFormatError("probe snapshot is truncated");
    return m.values(0, static_cast<Eigen::Index>(pos++));
  };
  const auto &shapes = meta.at("shapes");
  if (shapes.empty())
    throw EmbeddingFormatError("probe snapshot has no layers");
  const int in = shapes[0][1].get<int>();
  if (meta.at("scaled").get<bool>()) {
    Eigen::RowVectorXd mean(in), scale(in);
    for (int i = 0; i < in; ++i)
      mean(i) = take();
    for (int i = 0; i < in; ++i)
      scale(i) = take();
    model.set_feature_scaling(mean, scale);
  }
  const double tm = take();
  const double ts = take();
  model.set_target_scaling(tm, ts);
  for (const auto &s: shapes) {
    DenseLayer l;
    l.weight.resize(s[0].get<int>(), s[1].get<int>());
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
        l.weight(r, c) = take();
    l.bias.resize(l.weight.rows());
    for (Eigen::Index r = 0; r < l.bias.size(); ++r)
      l.bias(r) = take();
    model.layers_.push_back(std::move(l));
  }
  if (pos != total)
    throw EmbeddingFormatError("probe snapshot has extra values");
  return model;
}

}  // namespace molprobe
