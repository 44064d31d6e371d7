//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_GRAPHSTATS_GRAPHSTATS_H_
#define MOLPROBE_GRAPHSTATS_GRAPHSTATS_H_

#include <optional>
#include <stdexcept>
#include <vector>

#include "molprobe/molgraph/graph.h"

namespace molprobe {

// --- node level ---

std::vector<int> node_degree(const MolecularGraph &g);

class CentralityError: public std::runtime_error {
public:
  explicit CentralityError(int iterations);
  int iterations() const { return iterations_; }

private:
  int iterations_;
};

struct CentralityOptions {
  double tolerance = 1e-12;
  int max_iterations = 100000;
};

// Dominant adjacency eigenvector on the largest connected component, by
// power iteration until the max-abs change between iterates drops below
// the tolerance. Bipartite components oscillate under plain iteration and
// are iterated with x <- normalize(Ax + x) instead. Atoms outside the
// largest component get 0; a lone atom gets 1. Throws CentralityError when
// the iteration budget runs out.
std::vector<double> eigenvector_centrality(const MolecularGraph &g,
                                           CentralityOptions options = {});

// Fraction of closed neighbour pairs, (#edges in N(u)) / C(d_u, 2); 0 for
// degree < 2.
std::vector<double> clustering_coefficient(const MolecularGraph &g);

// --- pair level ---

// 1 iff u and v are bonded. Throws std::invalid_argument for u == v.
int link_label(const MolecularGraph &g, int u, int v);

// |N(u) & N(v)| / |N(u) | N(v)|, 0 when both neighbourhoods are empty.
double jaccard(const MolecularGraph &g, int u, int v);

// sum_{i=1..length} beta^i * A^i[u, v]: walks of each length, weighted.
double katz_truncated(const MolecularGraph &g, int u, int v, int length,
                      double beta = 1.0);

// Katz scores from u to every atom (same definition).
std::vector<double> katz_row(const MolecularGraph &g, int u, int length,
                             double beta = 1.0);

// --- graph level ---

// Largest eccentricity within the largest connected component.
int diameter(const MolecularGraph &g);

// Size of the minimum cycle basis (the circuit rank).
int cycle_count(const MolecularGraph &g);

// Vertex connectivity: minimum number of atoms whose removal disconnects the
// rest; n-1 for complete graphs and 0 for disconnected ones. Throws
// std::invalid_argument for fewer than two atoms.
int connectivity(const MolecularGraph &g);

// Pearson correlation of degrees across bonded pairs (both orientations).
// nullopt without bonds or when every bonded atom has the same degree.
std::optional<double> assortativity(const MolecularGraph &g);

// --- bundles ---

struct NodeStats {
  std::vector<int> degree;
  std::vector<double> centrality;
  std::vector<double> clustering;
};

struct PairStats {
  int link = 0;
  double jaccard = 0.0;
  double katz = 0.0;
};

struct GraphStats {
  int diameter = 0;
  int cycle_count = 0;
  std::optional<int> connectivity;  // undefined for a single atom
  std::optional<double> assortativity;
};

NodeStats compute_node_stats(const MolecularGraph &g,
                             CentralityOptions options = {});

// Katz length defaults to the number of atoms when `katz_length` < 0.
PairStats compute_pair_stats(const MolecularGraph &g, int u, int v,
                             int katz_length = -1, double katz_beta = 1.0);

GraphStats compute_graph_stats(const MolecularGraph &g);

}  // namespace molprobe

#endif  // MOLPROBE_GRAPHSTATS_GRAPHSTATS_H_
