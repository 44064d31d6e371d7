//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_PIPELINE_SPLIT_H_
#define MOLPROBE_PIPELINE_SPLIT_H_

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molprobe/molgraph/graph.h"

namespace molprobe {

// Ring atoms plus the linkers between ring systems: degree-1 atoms outside
// rings are stripped until none are left. Acyclic molecules give an empty
// graph. Rings are perceived on the result.
MolecularGraph bemis_murcko_scaffold(const MolecularGraph &g);

enum class SplitTag : std::uint8_t { kTrain = 0, kValid = 1, kTest = 2 };

std::string_view split_tag_name(SplitTag tag);

struct SplitAssignment {
  std::vector<SplitTag> tags;
  std::vector<std::uint64_t> scaffolds;  // canonical hash per molecule
  std::array<double, 3> requested {};
  std::array<double, 3> achieved {};
  int groups = 0;
  int largest_group = 0;
  std::vector<std::string> warnings;

  // Molecule indices with the given tag, ascending.
  std::vector<int> members(SplitTag tag) const;
};

// Groups molecules by scaffold hash, orders groups by size (descending)
// then hash, and fills train until it holds at least the train fraction,
// then valid up to the train + valid fraction; the rest is test. The order
// is fully determined by the molecules, so `seed` only travels along for
// the record.
SplitAssignment scaffold_split(std::span<const MolecularGraph> molecules,
                               std::array<double, 3> fractions = { 0.8, 0.1,
                                                                   0.1 },
                               std::uint64_t seed = 0);

// molecule_index,split,scaffold
void write_split_csv(std::ostream &out, const SplitAssignment &split);

struct NodePair {
  int molecule;
  int u;  // u < v
  int v;

  bool operator==(const NodePair &) const = default;
};

// Uniform with replacement: a molecule with at least two atoms from `pool`,
// then an unordered pair of its atoms. Throws std::invalid_argument when no
// molecule qualifies or count < 1.
std::vector<NodePair> sample_node_pairs(std::span<const MolecularGraph> molecules,
                                        std::span<const int> pool, int count,
                                        std::uint64_t seed);

}  // namespace molprobe

#endif  // MOLPROBE_PIPELINE_SPLIT_H_
