//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_MOLGRAPH_HASH_H_
#define MOLPROBE_MOLGRAPH_HASH_H_

#include <cstdint>
#include <vector>

#include "molprobe/molgraph/graph.h"

namespace molprobe {

// Per-atom labels after Weisfeiler-Lehman refinement to a stable partition.
// Initial labels combine element, aromaticity, charge, hydrogen count,
// degree and the smallest cycle through the atom; each round folds in the
// sorted multiset of (bond order, neighbour label).
std::vector<std::uint64_t> refined_atom_labels(const MolecularGraph &g);

// Order-independent 64-bit digest. Isomorphic graphs always agree; it is
// stable across runs and platforms.
std::uint64_t canonical_hash(const MolecularGraph &g);

}  // namespace molprobe

#endif  // MOLPROBE_MOLGRAPH_HASH_H_
