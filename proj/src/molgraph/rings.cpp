//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/molgraph/rings.h"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <utility>
#include <vector>

namespace molprobe {
namespace {

class EdgeSet {
public:
  explicit EdgeSet(int bits): words_((bits + 63) / 64, 0) { }

  void flip(int bit) { words_[bit / 64] ^= std::uint64_t { 1 } << (bit % 64); }
  bool test(int bit) const { return (words_[bit / 64] >> (bit % 64)) & 1; }

  EdgeSet &operator^=(const EdgeSet &other) {
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] ^= other.words_[i];
    return *this;
  }

  int lowest() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] != 0)
        return static_cast<int>(i * 64) + __builtin_ctzll(words_[i]);
    return -1;
  }

  bool operator<(const EdgeSet &o) const { return words_ < o.words_; }

private:
  std::vector<std::uint64_t> words_;
};

struct BfsTree {
  std::vector<int> parent;
  std::vector<int> dist;
};

BfsTree bfs_tree(const MolecularGraph &g, int root) {
  BfsTree t { std::vector<int>(g.num_atoms(), -1),
              std::vector<int>(g.num_atoms(), -1) };
  std::queue<int> queue;
  t.dist[root] = 0;
  queue.push(root);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    for (const Neighbor &nb: g.neighbors(u)) {
      if (t.dist[nb.atom] < 0) {
        t.dist[nb.atom] = t.dist[u] + 1;
        t.parent[nb.atom] = u;
        queue.push(nb.atom);
      }
    }
  }
  return t;
}

// Rotates the cycle to start at its smallest atom, walking towards the
// smaller of that atom's two cycle neighbours.
Ring canonical_rotation(Ring ring) {
  auto it = std::min_element(ring.begin(), ring.end());
  std::rotate(ring.begin(), it, ring.end());
  if (ring.size() > 2 && ring.back() < ring[1])
    std::reverse(ring.begin() + 1, ring.end());
  return ring;
}

struct Candidate {
  Ring atoms;
  EdgeSet edges;
};

}  // namespace

int circuit_rank(const MolecularGraph &g) {
  return g.num_bonds() - g.num_atoms() + g.num_components();
}

std::vector<Ring> minimum_cycle_basis(const MolecularGraph &g) {
  const int rank = circuit_rank(g);
  if (rank <= 0)
    return {};

  const int m = g.num_bonds();
  std::vector<Candidate> candidates;
  std::set<EdgeSet> seen;
  std::vector<char> on_path(g.num_atoms(), 0);

  for (int root = 0; root < g.num_atoms(); ++root) {
    BfsTree tree = bfs_tree(g, root);
    for (int bi = 0; bi < m; ++bi) {
      const Bond &b = g.bond(bi);
      int x = b.begin, y = b.end;
      if (tree.dist[x] < 0 || tree.parent[x] == y || tree.parent[y] == x)
        continue;

      std::vector<int> px, py;
      for (int u = x; u != -1; u = tree.parent[u])
        px.push_back(u);
      for (int u = y; u != -1; u = tree.parent[u])
        py.push_back(u);

      for (int u: px)
        on_path[u] = 1;
      bool disjoint = true;
      for (std::size_t i = 0; i + 1 < py.size(); ++i)
        if (on_path[py[i]]) {
          disjoint = false;
          break;
        }
      for (int u: px)
        on_path[u] = 0;
      if (!disjoint)
        continue;

      // root ... x, y ... (excluding root)
      Ring ring(px.rbegin(), px.rend());
      ring.insert(ring.end(), py.begin(), py.end() - 1);

      EdgeSet edges(m);
      for (std::size_t i = 0; i < ring.size(); ++i)
        edges.flip(g.find_bond(ring[i], ring[(i + 1) % ring.size()]));
      if (!seen.insert(edges).second)
        continue;
      candidates.push_back({ canonical_rotation(std::move(ring)), edges });
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.atoms.size() != b.atoms.size())
                return a.atoms.size() < b.atoms.size();
              return a.atoms < b.atoms;
            });

  std::vector<std::pair<int, EdgeSet>> echelon;
  std::vector<Ring> basis;
  for (const Candidate &c: candidates) {
    EdgeSet v = c.edges;
    for (const auto &[pivot, row]: echelon)
      if (v.test(pivot))
        v ^= row;
    int pivot = v.lowest();
    if (pivot < 0)
      continue;
    echelon.emplace_back(pivot, std::move(v));
    basis.push_back(c.atoms);
    if (static_cast<int>(basis.size()) == rank)
      break;
  }
  return basis;
}

MolecularGraph perceive_rings(const MolecularGraph &g) {
  return MolecularGraph(g.atoms(), g.bonds(), minimum_cycle_basis(g));
}

std::vector<int> smallest_cycle_sizes(const MolecularGraph &g) {
  const int n = g.num_atoms();
  std::vector<int> result(n, 0);
  std::vector<int> dist(n);
  std::queue<int> queue;

  for (int a = 0; a < n; ++a) {
    int best = 0;
    for (const Neighbor &start: g.neighbors(a)) {
      // Shortest path start -> a that avoids the bond a-start.
      std::fill(dist.begin(), dist.end(), -1);
      dist[start.atom] = 0;
      queue = {};
      queue.push(start.atom);
      while (!queue.empty() && dist[a] < 0) {
        int u = queue.front();
        queue.pop();
        for (const Neighbor &nb: g.neighbors(u)) {
          if (nb.bond == start.bond || dist[nb.atom] >= 0)
            continue;
          dist[nb.atom] = dist[u] + 1;
          queue.push(nb.atom);
        }
      }
      if (dist[a] > 0 && (best == 0 || dist[a] + 1 < best))
        best = dist[a] + 1;
    }
    result[a] = best;
  }
  return result;
}

namespace {

bool is_hetero_acceptor(int z) {
  return z == 7 || z == 8 || z == 16;
}

// Pi electrons an atom contributes to `ring`, or -1 if it rules out
// aromaticity.
int pi_electrons(const MolecularGraph &g, const Ring &ring, int pos) {
  const int u = ring[pos];
  const Atom &atom = g.atom(u);
  const int z = atom.atomic_number;
  if (atom.formal_charge != 0)
    return -1;
  if (z != 6 && z != 7 && z != 8 && z != 15 && z != 16 && z != 34)
    return -1;

  const int prev = ring[(pos + ring.size() - 1) % ring.size()];
  const int next = ring[(pos + 1) % ring.size()];

  int doubles = 0;
  bool ring_double = false, fused_double = false, exo_carbonyl = false;
  for (const Neighbor &nb: g.neighbors(u)) {
    BondOrder order = g.bond(nb.bond).order;
    if (order == BondOrder::kTriple || order == BondOrder::kAromatic)
      return -1;
    if (order != BondOrder::kDouble)
      continue;
    ++doubles;
    if (nb.atom == prev || nb.atom == next)
      ring_double = true;
    else if (g.atom_in_ring(nb.atom))
      fused_double = true;
    else if (is_hetero_acceptor(g.atom(nb.atom).atomic_number))
      exo_carbonyl = true;
    else
      return -1;
  }
  if (doubles > 1)
    return -1;
  if (ring_double || fused_double)
    return 1;
  if (exo_carbonyl)
    return z == 6 ? 0 : -1;

  // Only single bonds: heteroatoms donate a lone pair.
  const int connections = g.degree(u) + atom.total_h();
  if ((z == 7 || z == 15) && connections == 3)
    return 2;
  if ((z == 8 || z == 16 || z == 34) && connections == 2)
    return 2;
  return -1;
}

}  // namespace

MolecularGraph perceive_aromaticity(const MolecularGraph &g) {
  std::vector<Atom> atoms = g.atoms();
  std::vector<Bond> bonds = g.bonds();
  bool changed = false;

  for (const Ring &ring: g.rings()) {
    bool any_aromatic = false;
    for (int u: ring)
      any_aromatic = any_aromatic || g.atom(u).aromatic;
    if (any_aromatic)
      continue;

    int electrons = 0;
    bool ok = true;
    for (std::size_t i = 0; i < ring.size() && ok; ++i) {
      int e = pi_electrons(g, ring, static_cast<int>(i));
      if (e < 0)
        ok = false;
      electrons += e;
    }
    if (!ok || electrons % 4 != 2)
      continue;

    for (std::size_t i = 0; i < ring.size(); ++i) {
      atoms[ring[i]].aromatic = true;
      int b = g.find_bond(ring[i], ring[(i + 1) % ring.size()]);
      bonds[b].order = BondOrder::kAromatic;
    }
    changed = true;
  }

  if (!changed)
    return g;
  return MolecularGraph(std::move(atoms), std::move(bonds), g.rings());
}

}  // namespace molprobe
