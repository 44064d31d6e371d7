//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_MOLGRAPH_RINGS_H_
#define MOLPROBE_MOLGRAPH_RINGS_H_

#include <vector>

#include "molprobe/molgraph/graph.h"

namespace molprobe {

// |E| - |V| + #components.
int circuit_rank(const MolecularGraph &g);

// Minimum-weight cycle basis (Horton candidates + GF(2) elimination). Each
// ring lists its atoms in cycle order; rings are sorted by size, then
// lexicographically by their canonical rotation.
std::vector<Ring> minimum_cycle_basis(const MolecularGraph &g);

// Returns a copy of g carrying its minimum cycle basis.
MolecularGraph perceive_rings(const MolecularGraph &g);

// Length of the shortest cycle through each atom, 0 for acyclic atoms.
std::vector<int> smallest_cycle_sizes(const MolecularGraph &g);

// Converts Kekulé rings of the (already ring-perceived) graph whose
// pi-electron count satisfies 4n+2 to aromatic atoms and bonds.
MolecularGraph perceive_aromaticity(const MolecularGraph &g);

}  // namespace molprobe

#endif  // MOLPROBE_MOLGRAPH_RINGS_H_
