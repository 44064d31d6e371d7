//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_CORE_INIT_H_
#define MOLPROBE_CORE_INIT_H_

#include <cmath>

#include <Eigen/Core>

#include "molprobe/core/random.h"

namespace molprobe {

// U(-a, a) with a = sqrt(6 / (rows + cols)), filled row by row so the
// result depends only on the generator state.
inline void glorot_uniform(Eigen::MatrixXd &w, Rng &rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      w(r, c) = rng.uniform(-limit, limit);
}

}  // namespace molprobe

#endif  // MOLPROBE_CORE_INIT_H_
