//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_TESTS_SUPPORT_GENERATORS_H_
#define MOLPROBE_TESTS_SUPPORT_GENERATORS_H_

#include <string>
#include <vector>

#include "molprobe/core/random.h"
#include "molprobe/molgraph/graph.h"

namespace molprobe::testing {

// G(n, p) over carbon atoms with single bonds; no valence limits.
MolecularGraph random_graph(Rng &rng, int n, double p);

// Connected G(n, p): retries until connected.
MolecularGraph random_connected_graph(Rng &rng, int n, double p);

// Molecule-like graph assembled from common fragments (aromatic rings,
// heterocycles, carbonyls, halogens, chains) joined through atoms that
// carry hydrogens, with occasional extra ring closures. Returned as SMILES
// so it goes through the parser. At most max_atoms heavy atoms.
std::string random_molecule_smiles(Rng &rng, int max_atoms);

// Same atoms and bonds with atom order shuffled.
MolecularGraph permute_atoms(const MolecularGraph &g, Rng &rng,
                             std::vector<int> *new_index_of_old = nullptr);

}  // namespace molprobe::testing

#endif  // MOLPROBE_TESTS_SUPPORT_GENERATORS_H_
