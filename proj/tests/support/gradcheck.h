//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_TESTS_SUPPORT_GRADCHECK_H_
#define MOLPROBE_TESTS_SUPPORT_GRADCHECK_H_

#include <vector>

#include <Eigen/Dense>

#include "molprobe/core/random.h"
#include "molprobe/probe/probe.h"

namespace molprobe::testing {

struct GradientCheck {
  double worst = 0.0;     // largest relative error over checked parameters
  int checked = 0;
  int skipped = 0;        // perturbation flipped a ReLU
  int total = 0;
  int flat_violations = 0;  // zero analytic gradient, nonzero numeric one
  std::vector<int> per_layer;  // checked parameters per layer

  bool every_layer_checked() const {
    for (int n: per_layer)
      if (n == 0)
        return false;
    return !per_layer.empty();
  }
  bool passed(double tolerance) const {
    return worst < tolerance && flat_violations == 0 && skipped * 4 < total
           && every_layer_checked();
  }
};

// Signs of every hidden pre-activation.
std::vector<bool> relu_pattern(const ProbeModel &model,
                               const Eigen::MatrixXd &x);

// Central differences (step 1e-4) on sampled weights and biases of each
// layer. Perturbations that flip a ReLU are skipped, since the quotient
// then straddles a kink.
GradientCheck check_gradients(ProbeModel model, const Eigen::MatrixXd &x,
                              const Eigen::VectorXd &y, Rng &rng);

// Probe with jittered biases plus a random batch for a task; the caller
// runs check_gradients on it.
struct GradientCase {
  ProbeModel model;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};
GradientCase gradient_case(TaskKind task, int hidden, int width, Rng &rng);

}  // namespace molprobe::testing

#endif  // MOLPROBE_TESTS_SUPPORT_GRADCHECK_H_
