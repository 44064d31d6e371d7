//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_MOLGRAPH_GRAPH_H_
#define MOLPROBE_MOLGRAPH_GRAPH_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace molprobe {

struct Atom {
  int atomic_number = 6;
  bool aromatic = false;
  int formal_charge = 0;
  // Hydrogens written in a bracket atom.
  int explicit_h = 0;
  // Hydrogens implied by standard valence (organic-subset atoms only).
  int implicit_h = 0;
  // Written as a bracket atom; its hydrogen count is fixed.
  bool bracket = false;

  int total_h() const { return explicit_h + implicit_h; }
  std::string_view symbol() const;
};

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

std::string_view bond_order_name(BondOrder order);

struct Bond {
  int begin;
  int end;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

using Ring = std::vector<int>;

// Heavy-atom molecular graph. Immutable once constructed; all derived
// structures (adjacency, ring membership) are built in the constructor.
class MolecularGraph {
public:
  MolecularGraph() = default;

  // Throws std::invalid_argument on self-loops, out-of-range endpoints or
  // duplicate atom pairs.
  MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  // Same, with a ring list; every ring must be a cycle of existing bonds.
  MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds,
                 std::vector<Ring> rings);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  const std::vector<Atom> &atoms() const { return atoms_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const Bond &bond(int i) const { return bonds_[i]; }

  // Neighbours sorted by atom index.
  std::span<const Neighbor> neighbors(int atom) const {
    return { adjacency_.data() + offsets_[atom],
             adjacency_.data() + offsets_[atom + 1] };
  }
  int degree(int atom) const { return offsets_[atom + 1] - offsets_[atom]; }

  // Index of the bond joining u and v, or -1.
  int find_bond(int u, int v) const;
  bool adjacent(int u, int v) const { return find_bond(u, v) >= 0; }

  bool rings_perceived() const { return rings_perceived_; }
  const std::vector<Ring> &rings() const { return rings_; }
  bool atom_in_ring(int atom) const { return atom_in_ring_[atom]; }
  bool bond_in_ring(int bond) const { return bond_in_ring_[bond]; }

  // Component id per atom, numbered by first occurrence.
  const std::vector<int> &components() const { return components_; }
  int num_components() const { return num_components_; }

  // Atoms of the component with the most atoms (lowest id on ties).
  std::vector<int> largest_component() const;

  // Subgraph on `keep` (renumbered in the given order). Implicit hydrogens
  // of non-bracket atoms are recomputed for the reduced bonding; rings are
  // not carried over.
  MolecularGraph induced_subgraph(std::span<const int> keep) const;

private:
  void build_adjacency();
  void set_rings(std::vector<Ring> rings);

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> offsets_ { 0 };
  std::vector<Neighbor> adjacency_;
  std::vector<int> components_;
  int num_components_ = 0;

  bool rings_perceived_ = false;
  std::vector<Ring> rings_;
  std::vector<char> atom_in_ring_;
  std::vector<char> bond_in_ring_;
};

// Bond-valence sum of an atom with aromatic bonds counted as 1, and the
// number of aromatic bonds.
struct BondValence {
  int sum = 0;
  int aromatic = 0;
};

BondValence bond_valence(const MolecularGraph &g, int atom);

// Implicit hydrogen count of an unbracketed atom with the given bonding, or
// -1 when the bonding exceeds every standard valence of the element.
int implied_hydrogens(const Atom &atom, BondValence valence);

}  // namespace molprobe

#endif  // MOLPROBE_MOLGRAPH_GRAPH_H_
