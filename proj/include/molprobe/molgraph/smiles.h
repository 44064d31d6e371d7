//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_MOLGRAPH_SMILES_H_
#define MOLPROBE_MOLGRAPH_SMILES_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molprobe/molgraph/graph.h"

namespace molprobe {

class SmilesParseError: public std::runtime_error {
public:
  SmilesParseError(const std::string &what, std::size_t offset);

  // Byte offset into the input where the problem was detected.
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Parses a SMILES string into a heavy-atom graph with rings and aromaticity
// perceived. Supported: organic subset, bracket atoms with H count and
// charge, branches, ring closures up to %99, '.' fragments. Isotopes,
// chirality, atom classes and '/' '\' bond directions are accepted and
// ignored; one warning per kind is appended to `warnings` if given.
//
// Atoms keep SMILES token order. Kekulé rings that satisfy the 4n+2 rule
// are converted to aromatic form. Aromatic bonds outside rings are demoted
// to single bonds.
MolecularGraph parse_smiles(std::string_view smiles,
                            std::vector<std::string> *warnings = nullptr);

// Writes a SMILES string that parses back to an isomorphic graph. Atom
// order follows Weisfeiler-Lehman ranks, so graphs that differ only in
// atom numbering usually (not always) serialize identically.
std::string write_smiles(const MolecularGraph &g);

// Line-oriented debug listing:
//   atoms <n>
//   <index> <symbol> aromatic=<0|1> charge=<q> h=<total>
//   bonds <m>
//   <begin> <end> <order>
//   rings <k>
//   <atom indices...>
std::string dump_graph(const MolecularGraph &g);

}  // namespace molprobe

#endif  // MOLPROBE_MOLGRAPH_SMILES_H_
