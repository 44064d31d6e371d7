//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_CORE_HISTOGRAM_H_
#define MOLPROBE_CORE_HISTOGRAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace molprobe {

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::int64_t> counts;

  std::int64_t total() const;
};

// Fixed-range histogram; values outside [lo, hi] are clamped into the end
// bins, the last bin is closed on the right. Non-finite values are ignored.
Histogram make_histogram(std::span<const double> values, double lo, double hi,
                         int bins);

// Range taken from the data. A constant sample gets a unit-width range
// centred on its value.
Histogram make_histogram(std::span<const double> values, int bins);

nlohmann::ordered_json to_json(const Histogram &h);

}  // namespace molprobe

#endif  // MOLPROBE_CORE_HISTOGRAM_H_
