//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_SUBSTRUCTURE_PATTERN_H_
#define MOLPROBE_SUBSTRUCTURE_PATTERN_H_

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molprobe/molgraph/graph.h"

namespace molprobe {

// Substructure patterns are written in a SMILES-like notation.
//
// Atoms outside brackets: organic symbols (B C N O P S F Cl Br I) match
// aliphatic atoms of that element, lowercase (b c n o p s) aromatic ones,
// and '*' anything.
//
// Bracket atoms hold primitives joined by ',' (or) and ';' (and, lower
// precedence); '!' negates a primitive:
//   C, c, Cl     element with aromaticity     #7    element, any aromaticity
//   *            any atom                     a, A  aromatic / aliphatic
//   R            in a ring                    D<n>  n heavy neighbours
//   H<n>         n hydrogens in total         h     at least one hydrogen
//   u            has a double, triple or aromatic bond
//   z<n>         n neighbours that are not carbon
//   +<n>, -<n>   formal charge (+0 for neutral)
//   $(...)       the atom starts an embedding of the nested pattern
//
// Bonds: '-' single, '=' double, '#' triple, ':' aromatic, '~' any. An
// unwritten bond is single or aromatic. Branches and ring-closure digits work
// as in SMILES; the pattern must be connected.
//
// Embeddings are induced: two pattern atoms are bonded exactly when their
// images are.

class PatternError: public std::runtime_error {
public:
  PatternError(const std::string &what, std::size_t offset);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

struct Pattern;

struct AtomPrimitive {
  enum class Kind {
    kAny,
    kElement,
    kAromatic,
    kAliphatic,
    kRing,
    kDegree,
    kHydrogens,
    kHasHydrogen,
    kUnsaturated,
    kHeteroNeighbors,
    kCharge,
    kRecursive,
  };

  Kind kind = Kind::kAny;
  int value = 0;
  int aromatic = -1;  // kElement: -1 either, 0 aliphatic, 1 aromatic
  bool negated = false;
  std::shared_ptr<const Pattern> nested;
};

// Conjunction of disjunctions.
struct AtomQuery {
  std::vector<std::vector<AtomPrimitive>> all_of;
};

struct BondQuery {
  unsigned order_mask = 0;  // bit (1 << BondOrder)

  bool accepts(BondOrder order) const {
    return (order_mask >> static_cast<int>(order)) & 1u;
  }
};

struct PatternBond {
  int begin = 0;
  int end = 0;
  BondQuery query;
};

struct Pattern {
  std::string source;
  std::vector<AtomQuery> atoms;
  std::vector<PatternBond> bonds;

  int num_atoms() const { return static_cast<int>(atoms.size()); }
  // Bond index between two pattern atoms, or -1.
  int find_bond(int u, int v) const;
};

Pattern parse_pattern(std::string_view text);

bool atom_matches(const MolecularGraph &g, int atom, const AtomQuery &query);

// Distinct matched atom sets (each sorted ascending), in ascending order.
std::vector<std::vector<int>> match_atom_sets(const MolecularGraph &g,
                                              const Pattern &p);

// Number of distinct matched atom sets.
int count_matches(const MolecularGraph &g, const Pattern &p);

// True if some embedding maps pattern atom 0 onto `atom`.
bool matches_at(const MolecularGraph &g, const Pattern &p, int atom);

}  // namespace molprobe

#endif  // MOLPROBE_SUBSTRUCTURE_PATTERN_H_
