//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/molgraph/graph.h"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "molprobe/molgraph/element.h"

namespace molprobe {

std::string_view Atom::symbol() const {
  return element_symbol(atomic_number);
}

std::string_view bond_order_name(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
    return "single";
  case BondOrder::kDouble:
    return "double";
  case BondOrder::kTriple:
    return "triple";
  case BondOrder::kAromatic:
    return "aromatic";
  }
  return "?";
}

MolecularGraph::MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  build_adjacency();
}

MolecularGraph::MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds,
                               std::vector<Ring> rings)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  build_adjacency();
  set_rings(std::move(rings));
}

void MolecularGraph::build_adjacency() {
  const int n = num_atoms();
  for (const Atom &a: atoms_) {
    if (a.explicit_h < 0 || a.implicit_h < 0)
      throw std::invalid_argument("negative hydrogen count");
  }

  std::vector<int> deg(n, 0);
  for (const Bond &b: bonds_) {
    if (b.begin < 0 || b.begin >= n || b.end < 0 || b.end >= n)
      throw std::invalid_argument(
          fmt::format("bond {}-{} references a missing atom", b.begin, b.end));
    if (b.begin == b.end)
      throw std::invalid_argument(
          fmt::format("self-loop on atom {}", b.begin));
    ++deg[b.begin];
    ++deg[b.end];
  }

  offsets_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    offsets_[i + 1] = offsets_[i] + deg[i];
  adjacency_.resize(offsets_[n]);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int bi = 0; bi < num_bonds(); ++bi) {
    const Bond &b = bonds_[bi];
    adjacency_[fill[b.begin]++] = { b.end, bi };
    adjacency_[fill[b.end]++] = { b.begin, bi };
  }
  for (int i = 0; i < n; ++i) {
    auto first = adjacency_.begin() + offsets_[i];
    auto last = adjacency_.begin() + offsets_[i + 1];
    std::sort(first, last, [](const Neighbor &x, const Neighbor &y) {
      return x.atom < y.atom;
    });
    auto dup = std::adjacent_find(first, last,
                                  [](const Neighbor &x, const Neighbor &y) {
                                    return x.atom == y.atom;
                                  });
    if (dup != last)
      throw std::invalid_argument(
          fmt::format("duplicate bond between atoms {} and {}", i, dup->atom));
  }

  components_.assign(n, -1);
  num_components_ = 0;
  std::queue<int> queue;
  for (int s = 0; s < n; ++s) {
    if (components_[s] >= 0)
      continue;
    components_[s] = num_components_;
    queue.push(s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (const Neighbor &nb: neighbors(u)) {
        if (components_[nb.atom] < 0) {
          components_[nb.atom] = num_components_;
          queue.push(nb.atom);
        }
      }
    }
    ++num_components_;
  }

  atom_in_ring_.assign(n, 0);
  bond_in_ring_.assign(num_bonds(), 0);
}

void MolecularGraph::set_rings(std::vector<Ring> rings) {
  for (const Ring &ring: rings) {
    if (ring.size() < 3)
      throw std::invalid_argument("ring with fewer than 3 atoms");
    for (std::size_t i = 0; i < ring.size(); ++i) {
      int u = ring[i], v = ring[(i + 1) % ring.size()];
      if (u < 0 || u >= num_atoms() || v < 0 || v >= num_atoms())
        throw std::invalid_argument("ring references a missing atom");
      int b = find_bond(u, v);
      if (b < 0)
        throw std::invalid_argument(
            fmt::format("ring edge {}-{} is not a bond", u, v));
      atom_in_ring_[u] = 1;
      bond_in_ring_[b] = 1;
    }
  }
  rings_ = std::move(rings);
  rings_perceived_ = true;
}

int MolecularGraph::find_bond(int u, int v) const {
  auto nbs = neighbors(u);
  auto it = std::lower_bound(
      nbs.begin(), nbs.end(), v,
      [](const Neighbor &nb, int atom) { return nb.atom < atom; });
  if (it != nbs.end() && it->atom == v)
    return it->bond;
  return -1;
}

std::vector<int> MolecularGraph::largest_component() const {
  std::vector<int> sizes(num_components_, 0);
  for (int c: components_)
    ++sizes[c];
  int best = 0;
  for (int c = 1; c < num_components_; ++c)
    if (sizes[c] > sizes[best])
      best = c;

  std::vector<int> atoms;
  for (int i = 0; i < num_atoms(); ++i)
    if (components_[i] == best)
      atoms.push_back(i);
  return atoms;
}

MolecularGraph MolecularGraph::induced_subgraph(std::span<const int> keep) const {
  std::vector<int> remap(num_atoms(), -1);
  std::vector<Atom> atoms;
  atoms.reserve(keep.size());
  for (int old: keep) {
    if (old < 0 || old >= num_atoms() || remap[old] >= 0)
      throw std::invalid_argument("invalid or repeated atom in subgraph");
    remap[old] = static_cast<int>(atoms.size());
    atoms.push_back(atoms_[old]);
  }

  std::vector<Bond> bonds;
  for (const Bond &b: bonds_) {
    if (remap[b.begin] >= 0 && remap[b.end] >= 0)
      bonds.push_back({ remap[b.begin], remap[b.end], b.order });
  }

  MolecularGraph sub(atoms, bonds);
  for (int i = 0; i < sub.num_atoms(); ++i) {
    if (atoms[i].bracket)
      continue;
    atoms[i].implicit_h =
        std::max(0, implied_hydrogens(atoms[i], bond_valence(sub, i)));
  }
  return MolecularGraph(std::move(atoms), std::move(bonds));
}

BondValence bond_valence(const MolecularGraph &g, int atom) {
  BondValence v;
  for (const Neighbor &nb: g.neighbors(atom)) {
    BondOrder order = g.bond(nb.bond).order;
    if (order == BondOrder::kAromatic) {
      ++v.sum;
      ++v.aromatic;
    } else {
      v.sum += static_cast<int>(order);
    }
  }
  return v;
}

int implied_hydrogens(const Atom &atom, BondValence valence) {
  auto allowed = organic_valences(atom.atomic_number);
  if (allowed.empty())
    return 0;
  if (valence.sum > allowed.back())
    return -1;

  if (atom.aromatic) {
    // B, C, N and P donate one electron to the pi system; O and S donate a
    // lone pair and keep their sigma valence.
    const int z = atom.atomic_number;
    const bool donates_one = z == 5 || z == 6 || z == 7 || z == 15;
    const int pi = valence.aromatic > 0 && donates_one ? 1 : 0;
    return std::max(0, allowed.front() - valence.sum - pi);
  }

  for (int v: allowed)
    if (v >= valence.sum)
      return v - valence.sum;
  return -1;
}

}  // namespace molprobe
