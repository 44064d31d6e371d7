//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "molprobe/core/random.h"
#include "molprobe/probe/probe.h"
#include "support/gradcheck.h"

namespace molprobe {
namespace {

ProbeConfig config(int hidden, int width, TaskKind task) {
  ProbeConfig c;
  c.hidden_layers = hidden;
  c.width = width;
  c.task = task;
  c.seed = 17;
  return c;
}

Eigen::MatrixXd random_matrix(Rng &rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m(r, c) = rng.normal();
  return m;
}

TEST(BuildProbe, Shapes) {
  ProbeModel linear = build_probe(config(0, 600, TaskKind::kRegression), 8, 1);
  ASSERT_EQ(linear.layers().size(), 1u);
  EXPECT_EQ(linear.layers()[0].weight.rows(), 1);
  EXPECT_EQ(linear.layers()[0].weight.cols(), 8);

  ProbeModel mlp = build_probe(config(1, 600, TaskKind::kMulticlass), 300, 7);
  ASSERT_EQ(mlp.layers().size(), 2u);
  EXPECT_EQ(mlp.layers()[0].weight.rows(), 600);
  EXPECT_EQ(mlp.layers()[0].weight.cols(), 300);
  EXPECT_EQ(mlp.layers()[1].weight.rows(), 7);
  EXPECT_EQ(mlp.layers()[1].weight.cols(), 600);

  EXPECT_THROW(build_probe(config(4, 600, TaskKind::kBinary), 8, 1),
               std::invalid_argument);
  EXPECT_THROW(build_probe(config(1, 50, TaskKind::kBinary), 8, 1),
               std::invalid_argument);
  EXPECT_THROW(build_probe(config(1, 2000, TaskKind::kBinary), 8, 1),
               std::invalid_argument);
}

TEST(BuildProbe, DefaultsAndDeterminism) {
  ProbeConfig c;
  EXPECT_EQ(c.hidden_layers, 1);
  EXPECT_EQ(c.width, 600);
  EXPECT_EQ(c.epochs, 100);
  EXPECT_EQ(c.learning_rate, 1e-3);
  EXPECT_EQ(c.batch_size, 256);
  ProbeModel a = build_probe(config(2, 100, TaskKind::kBinary), 5, 1);
  ProbeModel b = build_probe(config(2, 100, TaskKind::kBinary), 5, 1);
  for (std::size_t i = 0; i < a.layers().size(); ++i)
    EXPECT_EQ(a.layers()[i].weight, b.layers()[i].weight);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  ProbeModel m = build_probe(config(1, 100, TaskKind::kRegression), 4, 1);
  ProbeModel before = m;
  Gradient g = m.layers();
  for (auto &l: g) {
    l.weight.setZero();
    l.bias.setZero();
  }
  AdamState s;
  adam_step(m, s, g, 1e-3);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(m.layers()[i].weight, before.layers()[i].weight);
    EXPECT_EQ(m.layers()[i].bias, before.layers()[i].bias);
  }
}

TEST(Adam, FirstStepMovesByLearningRate) {
  ProbeModel m = build_probe(config(0, 100, TaskKind::kRegression), 3, 1);
  ProbeModel before = m;
  Gradient g = m.layers();
  g[0].weight.setConstant(0.37);
  g[0].bias.setConstant(-5.0);
  AdamState s;
  adam_step(m, s, g, 1e-3);
  // m_hat = g and v_hat = g^2 after one step.
  const double expected_w = 1e-3 * 0.37 / (0.37 + 1e-8);
  for (int c = 0; c < 3; ++c)
    EXPECT_NEAR(before.layers()[0].weight(0, c) - m.layers()[0].weight(0, c),
                expected_w, 1e-15);
  EXPECT_NEAR(m.layers()[0].bias(0) - before.layers()[0].bias(0),
              1e-3 * 5.0 / (5.0 + 1e-8), 1e-15);
  EXPECT_EQ(s.step, 1);
}

TEST(Adam, NonFiniteGradientNamesBlock) {
  ProbeModel m = build_probe(config(1, 100, TaskKind::kRegression), 3, 1);
  ProbeModel before = m;
  Gradient g = m.layers();
  for (auto &l: g) {
    l.weight.setZero();
    l.bias.setZero();
  }
  g[1].bias(0) = std::nan("");
  AdamState s;
  try {
    adam_step(m, s, g, 1e-3);
    FAIL() << "expected NonFiniteGradientError";
  } catch (const NonFiniteGradientError &e) {
    EXPECT_EQ(e.block(), "layer 1 bias");
  }
  EXPECT_EQ(m.layers()[0].weight, before.layers()[0].weight);
  EXPECT_EQ(s.step, 0);
}

TEST(Gradients, MatchFiniteDifferences) {
  Rng rng(2);
  for (TaskKind task: { TaskKind::kRegression, TaskKind::kBinary,
                        TaskKind::kMulticlass }) {
    for (int hidden = 0; hidden <= 3; ++hidden) {
      for (int width: { 100, 600, 1200 }) {
        if (hidden == 0 && width != 100)
          continue;
        SCOPED_TRACE(::testing::Message()
                     << task_kind_name(task) << " hidden=" << hidden
                     << " width=" << width);
        testing::GradientCase gc =
            testing::gradient_case(task, hidden, width, rng);
        testing::GradientCheck r =
            testing::check_gradients(gc.model, gc.x, gc.y, rng);
        EXPECT_LT(r.worst, 1e-5);
        EXPECT_EQ(r.flat_violations, 0);
        EXPECT_LT(r.skipped * 4, r.total);
        EXPECT_TRUE(r.every_layer_checked());
      }
    }
  }
}

TEST(TrainProbe, LinearTarget) {
  Rng rng(5);
  ProbeData train, valid;
  train.features = random_matrix(rng, 2000, 1);
  train.targets = 2.0 * train.features.col(0).array() + 1.0;
  valid.features = random_matrix(rng, 200, 1);
  valid.targets = 2.0 * valid.features.col(0).array() + 1.0;

  // Least-squares oracle: the target is exactly linear.
  Eigen::MatrixXd design(2000, 2);
  design << train.features, Eigen::VectorXd::Ones(2000);
  Eigen::VectorXd coef = design.colPivHouseholderQr().solve(train.targets);
  EXPECT_NEAR(coef(0), 2.0, 1e-12);
  EXPECT_NEAR(coef(1), 1.0, 1e-12);

  ProbeConfig c = config(0, 100, TaskKind::kRegression);
  c.batch_size = 32;
  TrainResult r = train_probe(c, train, valid);
  EXPECT_EQ(r.history.size(), 100u);
  EXPECT_LT(r.history.back().train_loss, 1e-4);
  EXPECT_LT(evaluate_probe(r.model, valid).loss, 1e-4);
}

TEST(TrainProbe, TargetAsCoordinate) {
  Rng rng(6);
  ProbeData train, valid;
  train.features = random_matrix(rng, 4000, 5);
  train.targets = train.features.col(2);
  valid.features = random_matrix(rng, 200, 5);
  valid.targets = valid.features.col(2);
  ProbeConfig c = config(0, 100, TaskKind::kRegression);
  c.batch_size = 32;
  TrainResult r = train_probe(c, train, valid);
  EXPECT_LT(r.history.back().train_loss, 1e-6);
}

TEST(TrainProbe, IndependentLabelsGiveChanceAuc) {
  for (std::uint64_t seed: { 1, 2, 3 }) {
    Rng rng(seed * 101);
    ProbeData train, test;
    train.features = random_matrix(rng, 1000, 8);
    test.features = random_matrix(rng, 1000, 8);
    train.targets.resize(1000);
    test.targets.resize(1000);
    for (int i = 0; i < 1000; ++i) {
      train.targets(i) = static_cast<double>(rng.below(2));
      test.targets(i) = static_cast<double>(rng.below(2));
    }
    ProbeConfig c = config(1, 100, TaskKind::kBinary);
    c.seed = seed;
    c.epochs = 20;
    TrainResult r = train_probe(c, train, test);
    ProbeScores s = evaluate_probe(r.model, test);
    ASSERT_TRUE(s.auc.has_value());
    EXPECT_GT(*s.auc, 0.4);
    EXPECT_LT(*s.auc, 0.6);
  }
}

TEST(TrainProbe, HistoryDeterminismAndBestSnapshot) {
  Rng rng(8);
  ProbeData train, valid;
  train.features = random_matrix(rng, 300, 4);
  train.targets = (train.features.col(0).array() > 0).cast<double>()
                  + (train.features.col(1).array() > 0.5).cast<double>();
  valid.features = random_matrix(rng, 100, 4);
  valid.targets = (valid.features.col(0).array() > 0).cast<double>()
                  + (valid.features.col(1).array() > 0.5).cast<double>();
  ProbeConfig c = config(2, 100, TaskKind::kMulticlass);
  c.num_classes = 3;
  c.epochs = 15;
  c.batch_size = 64;
  TrainResult a = train_probe(c, train, valid), b = train_probe(c, train, valid);
  ASSERT_EQ(a.history.size(), 15u);
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].valid_loss, b.history[i].valid_loss);
    EXPECT_LE(a.best_valid_loss, a.history[i].valid_loss);
  }
  EXPECT_EQ(evaluate_probe(a.model, valid).loss, a.best_valid_loss);

  c.epochs = 1;
  EXPECT_EQ(train_probe(c, train, valid).history.size(), 1u);
  nlohmann::ordered_json j = to_json(a);
  EXPECT_EQ(j["history"].size(), 15u);
}

TEST(TrainProbe, RejectsBadSplits) {
  ProbeData empty, ok;
  empty.features.resize(0, 3);
  ok.features = Eigen::MatrixXd::Ones(4, 3);
  ok.targets = Eigen::VectorXd::Zero(4);
  ProbeConfig c = config(0, 100, TaskKind::kBinary);
  EXPECT_THROW(train_probe(c, empty, ok), std::invalid_argument);
  EXPECT_THROW(train_probe(c, ok, empty), std::invalid_argument);
  ProbeData bad = ok;
  bad.targets(0) = 3;
  EXPECT_THROW(train_probe(c, bad, ok), std::invalid_argument);
}

TEST(Evaluate, PerfectAndConstantPredictors) {
  ProbeConfig c = config(0, 100, TaskKind::kBinary);
  c.standardize = false;
  ProbeModel m = build_probe(c, 1, 1);
  m.layers()[0].weight(0, 0) = 100.0;
  m.layers()[0].bias(0) = 0.0;
  ProbeData d;
  d.features.resize(4, 1);
  d.features << -1, -2, 1, 2;
  d.targets.resize(4);
  d.targets << 0, 0, 1, 1;
  ProbeScores s = evaluate_probe(m, d);
  EXPECT_EQ(*s.auc, 1.0);
  EXPECT_LT(s.loss, 1e-30);

  c.task = TaskKind::kRegression;
  ProbeModel constant = build_probe(c, 1, 1);
  constant.layers()[0].weight.setZero();
  ProbeData r;
  r.features = Eigen::MatrixXd::Ones(4, 1);
  r.targets.resize(4);
  r.targets << 1, 2, 3, 6;
  constant.layers()[0].bias(0) = r.targets.mean();
  const double variance = (r.targets.array() - 3.0).square().mean();
  EXPECT_NEAR(evaluate_probe(constant, r).loss, variance, 1e-12);

  // A single-class split has no AUC.
  d.targets << 1, 1, 1, 1;
  EXPECT_FALSE(evaluate_probe(m, d).auc.has_value());
}

TEST(Evaluate, SeedAggregation) {
  MeanStd s = mean_std(std::vector<double> { 0.6, 0.7, 0.8 });
  EXPECT_NEAR(s.mean, 0.7, 1e-12);
  EXPECT_NEAR(s.population_std, 0.0816, 1e-4);
  EXPECT_NEAR(s.sample_std, 0.1, 1e-12);
}

TEST(ProbeFile, RoundTrip) {
  Rng rng(12);
  ProbeData train, valid;
  train.features = random_matrix(rng, 100, 3);
  train.targets = train.features.col(1) * 3.0;
  valid = train;
  ProbeConfig c = config(1, 100, TaskKind::kRegression);
  c.epochs = 2;
  TrainResult r = train_probe(c, train, valid);
  auto path = std::filesystem::temp_directory_path() / "molprobe_probe.bin";
  save_probe(r.model, path);
  ProbeModel loaded = load_probe(path);
  EXPECT_EQ(loaded.predict(valid.features), r.model.predict(valid.features));
  EXPECT_EQ(loaded.task(), TaskKind::kRegression);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace molprobe
