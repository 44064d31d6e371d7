//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_GRAPHSTATS_BATCH_H_
#define MOLPROBE_GRAPHSTATS_BATCH_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "molprobe/graphstats/graphstats.h"

namespace molprobe {

struct BatchOptions {
  int jobs = 1;
  int katz_length = -1;  // < 0: number of atoms
  double katz_beta = 1.0;
  int histogram_bins = 20;
  CentralityOptions centrality;
};

struct BatchSummary {
  int molecules = 0;
  // Molecules left out of a metric (undefined value or failed computation).
  std::map<std::string, int> skipped;
};

// Writes one CSV per metric into `dir`:
//   node metrics   molecule_index,node_index,value
//   pair metrics   molecule_index,node_u,node_v,value  (every u < v)
//   graph metrics  molecule_index,value
// and histograms.json with the value distribution of every metric.
BatchSummary write_batch_stats(std::span<const MolecularGraph> molecules,
                               const std::filesystem::path &dir,
                               const BatchOptions &options = {});

}  // namespace molprobe

#endif  // MOLPROBE_GRAPHSTATS_BATCH_H_
