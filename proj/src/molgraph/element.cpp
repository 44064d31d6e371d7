//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/molgraph/element.h"

#include <array>
#include <string_view>

namespace molprobe {
namespace {

constexpr std::array<std::string_view, kMaxAtomicNumber + 1> kSymbols {
  "?",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
  "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
  "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
  "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
  "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
  "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
  "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
  "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
  "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

constexpr int kB = 5, kC = 6, kN = 7, kO = 8, kF = 9, kP = 15, kS = 16,
              kCl = 17, kAs = 33, kSe = 34, kBr = 35, kTe = 52, kI = 53;

constexpr std::array<int, 1> kVal1 { 1 };
constexpr std::array<int, 1> kVal2 { 2 };
constexpr std::array<int, 1> kVal3 { 3 };
constexpr std::array<int, 1> kVal4 { 4 };
constexpr std::array<int, 2> kVal35 { 3, 5 };
constexpr std::array<int, 3> kVal246 { 2, 4, 6 };

}  // namespace

int atomic_number(std::string_view symbol) {
  for (int z = 1; z <= kMaxAtomicNumber; ++z)
    if (kSymbols[z] == symbol)
      return z;
  return 0;
}

std::string_view element_symbol(int z) {
  if (z < 1 || z > kMaxAtomicNumber)
    return kSymbols[0];
  return kSymbols[z];
}

std::span<const int> organic_valences(int z) {
  switch (z) {
  case kB:
    return kVal3;
  case kC:
    return kVal4;
  case kN:
  case kP:
    return kVal35;
  case kO:
    return kVal2;
  case kS:
    return kVal246;
  case kF:
  case kCl:
  case kBr:
  case kI:
    return kVal1;
  default:
    return {};
  }
}

bool is_organic_subset(int z) {
  return !organic_valences(z).empty();
}

bool is_aromatic_organic(int z) {
  return z == kB || z == kC || z == kN || z == kO || z == kP || z == kS;
}

bool is_aromatic_bracket(int z) {
  return is_aromatic_organic(z) || z == kSe || z == kAs || z == kTe;
}

}  // namespace molprobe
