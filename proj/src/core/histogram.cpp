//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/core/histogram.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace molprobe {

std::int64_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t { 0 });
}

Histogram make_histogram(std::span<const double> values, double lo, double hi,
                         int bins) {
  if (bins < 1 || !(hi > lo))
    throw std::invalid_argument("histogram needs bins >= 1 and hi > lo");

  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i)
    h.edges[i] = lo + width * i;
  h.edges.back() = hi;
  h.counts.assign(bins, 0);

  for (double v: values) {
    if (!std::isfinite(v))
      continue;
    int bin = static_cast<int>(std::floor((v - lo) / width));
    bin = std::clamp(bin, 0, bins - 1);
    ++h.counts[bin];
  }
  return h;
}

Histogram make_histogram(std::span<const double> values, int bins) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v: values) {
    if (!std::isfinite(v))
      continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo > hi) {
    lo = 0.0;
    hi = 1.0;
  } else if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return make_histogram(values, lo, hi, bins);
}

nlohmann::ordered_json to_json(const Histogram &h) {
  nlohmann::ordered_json j;
  j["bin_edges"] = h.edges;
  j["counts"] = h.counts;
  return j;
}

}  // namespace molprobe
