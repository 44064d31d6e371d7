//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_MOLGRAPH_ELEMENT_H_
#define MOLPROBE_MOLGRAPH_ELEMENT_H_

#include <span>
#include <string_view>

namespace molprobe {

inline constexpr int kMaxAtomicNumber = 118;

// Returns 0 for unknown symbols. Symbols are case-sensitive ("Cl", not "CL").
int atomic_number(std::string_view symbol);

// Returns "?" outside [1, kMaxAtomicNumber].
std::string_view element_symbol(int atomic_number);

// Standard valences for the SMILES organic subset, ascending; empty for
// every other element.
std::span<const int> organic_valences(int atomic_number);

bool is_organic_subset(int atomic_number);

// Elements that may be written as bare lowercase aromatic symbols.
bool is_aromatic_organic(int atomic_number);

// Elements accepted as lowercase aromatic symbols inside brackets.
bool is_aromatic_bracket(int atomic_number);

}  // namespace molprobe

#endif  // MOLPROBE_MOLGRAPH_ELEMENT_H_
