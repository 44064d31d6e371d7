//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "molprobe/molgraph/element.h"
#include "molprobe/molgraph/hash.h"
#include "molprobe/molgraph/rings.h"
#include "molprobe/molgraph/smiles.h"
#include "support/generators.h"
#include "support/oracles.h"

namespace molprobe {
namespace {

std::size_t error_offset(std::string_view smiles) {
  try {
    parse_smiles(smiles);
  } catch (const SmilesParseError &e) {
    return e.offset();
  }
  ADD_FAILURE() << "expected a parse error for " << smiles;
  return std::string::npos;
}

TEST(SmilesParse, LinearChain) {
  MolecularGraph g = parse_smiles("CCO");
  ASSERT_EQ(g.num_atoms(), 3);
  ASSERT_EQ(g.num_bonds(), 2);
  EXPECT_EQ(g.atom(0).symbol(), "C");
  EXPECT_EQ(g.atom(2).symbol(), "O");
  for (const Bond &b: g.bonds())
    EXPECT_EQ(b.order, BondOrder::kSingle);
  EXPECT_EQ(g.atom(0).implicit_h, 3);
  EXPECT_EQ(g.atom(1).implicit_h, 2);
  EXPECT_EQ(g.atom(2).implicit_h, 1);
  EXPECT_TRUE(g.rings().empty());
}

TEST(SmilesParse, RingClosure) {
  MolecularGraph g = parse_smiles("C1CC1");
  EXPECT_EQ(g.num_atoms(), 3);
  EXPECT_EQ(g.num_bonds(), 3);
  ASSERT_EQ(g.rings().size(), 1);
  EXPECT_EQ(g.rings()[0].size(), 3);
}

TEST(SmilesParse, Benzene) {
  MolecularGraph g = parse_smiles("c1ccccc1");
  ASSERT_EQ(g.num_atoms(), 6);
  ASSERT_EQ(g.num_bonds(), 6);
  for (const Atom &a: g.atoms()) {
    EXPECT_TRUE(a.aromatic);
    EXPECT_EQ(a.total_h(), 1);
  }
  for (const Bond &b: g.bonds())
    EXPECT_EQ(b.order, BondOrder::kAromatic);
}

TEST(SmilesParse, UnclosedRing) {
  try {
    parse_smiles("C1CC");
    FAIL() << "expected failure";
  } catch (const SmilesParseError &e) {
    EXPECT_NE(std::string(e.what()).find("unclosed ring closure 1"),
              std::string::npos);
    EXPECT_EQ(e.offset(), 1);
  }
}

TEST(SmilesParse, ErrorOffsets) {
  EXPECT_EQ(error_offset("CC(C"), 2);
  EXPECT_EQ(error_offset("CC)C"), 2);
  EXPECT_EQ(error_offset("C[NH4+"), 1);
  EXPECT_EQ(error_offset("CCXC"), 2);
  EXPECT_EQ(error_offset("C[Xy]"), 2);
  EXPECT_EQ(error_offset("CC(C)(C)(C)C"), 1);  // five bonds on carbon
  EXPECT_EQ(error_offset("CO(C)C"), 1);
  EXPECT_EQ(error_offset("C1C1"), 3);  // second bond between the same pair
  EXPECT_EQ(error_offset("C="), 1);
  EXPECT_EQ(error_offset("=C"), 0);
  EXPECT_EQ(error_offset("C()C"), 2);
  EXPECT_EQ(error_offset(""), 0);
  EXPECT_EQ(error_offset("C%1C"), 1);
}

TEST(SmilesParse, BracketAtoms) {
  MolecularGraph g = parse_smiles("[NH4+].[O-]C(=O)C");
  EXPECT_EQ(g.atom(0).formal_charge, 1);
  EXPECT_EQ(g.atom(0).total_h(), 4);
  EXPECT_EQ(g.atom(1).formal_charge, -1);
  EXPECT_EQ(g.atom(1).total_h(), 0);
  EXPECT_EQ(g.num_components(), 2);

  g = parse_smiles("[Fe+2]");
  EXPECT_EQ(g.atom(0).atomic_number, 26);
  EXPECT_EQ(g.atom(0).formal_charge, 2);
  g = parse_smiles("[Co--]");
  EXPECT_EQ(g.atom(0).formal_charge, -2);
}

TEST(SmilesParse, IgnoredFeaturesWarn) {
  std::vector<std::string> warnings;
  MolecularGraph g = parse_smiles("[13CH3]/C=C/[C@@H](O)Cl", &warnings);
  EXPECT_EQ(g.num_atoms(), 6);
  EXPECT_EQ(g.atom(0).total_h(), 3);
  EXPECT_EQ(g.atom(3).total_h(), 1);
  EXPECT_EQ(warnings.size(), 3);  // isotopes, bond directions, chirality
}

TEST(SmilesParse, AromaticHydrogens) {
  MolecularGraph pyridine = parse_smiles("n1ccccc1");
  EXPECT_EQ(pyridine.atom(0).total_h(), 0);
  MolecularGraph pyrrole = parse_smiles("c1cc[nH]c1");
  EXPECT_EQ(pyrrole.atom(3).total_h(), 1);
  MolecularGraph naphthalene = parse_smiles("c1ccc2ccccc2c1");
  EXPECT_EQ(naphthalene.atom(3).total_h(), 0);  // ring fusion atom
  EXPECT_EQ(naphthalene.atom(0).total_h(), 1);
}

TEST(SmilesParse, KekuleRingsBecomeAromatic) {
  MolecularGraph g = parse_smiles("C1=CC=CC=C1");
  for (const Atom &a: g.atoms())
    EXPECT_TRUE(a.aromatic);
  for (const Bond &b: g.bonds())
    EXPECT_EQ(b.order, BondOrder::kAromatic);

  MolecularGraph thiophene = parse_smiles("C1=CSC=C1");
  EXPECT_TRUE(thiophene.atom(2).aromatic);

  MolecularGraph naphthalene = parse_smiles("C1=CC=C2C=CC=CC2=C1");
  EXPECT_EQ(std::count_if(naphthalene.atoms().begin(),
                          naphthalene.atoms().end(),
                          [](const Atom &a) { return a.aromatic; }),
            10);

  MolecularGraph cyclohexene = parse_smiles("C1=CCCCC1");
  EXPECT_FALSE(cyclohexene.atom(0).aromatic);
  MolecularGraph cyclooctatetraene = parse_smiles("C1=CC=CC=CC=C1");
  EXPECT_FALSE(cyclooctatetraene.atom(0).aromatic);
}

TEST(SmilesParse, AromaticBondOutsideRingIsSingle) {
  MolecularGraph biphenyl = parse_smiles("c1ccccc1c1ccccc1");
  int link = biphenyl.find_bond(5, 6);
  ASSERT_GE(link, 0);
  EXPECT_EQ(biphenyl.bond(link).order, BondOrder::kSingle);
  EXPECT_EQ(biphenyl.atom(5).total_h(), 0);
}

TEST(SmilesParse, TwoDigitRingClosure) {
  MolecularGraph g = parse_smiles("C%12CCC%12");
  EXPECT_EQ(g.num_bonds(), 4);
  EXPECT_EQ(g.rings().size(), 1);
}

TEST(MolecularGraph, AdjacencyIsSymmetric) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    MolecularGraph g = parse_smiles(testing::random_molecule_smiles(rng, 20));
    for (int u = 0; u < g.num_atoms(); ++u)
      for (int v = 0; v < g.num_atoms(); ++v)
        EXPECT_EQ(g.adjacent(u, v), g.adjacent(v, u));
    int degree_sum = 0;
    for (int u = 0; u < g.num_atoms(); ++u) {
      EXPECT_FALSE(g.adjacent(u, u));
      degree_sum += g.degree(u);
    }
    EXPECT_EQ(degree_sum, 2 * g.num_bonds());
  }
}

TEST(MolecularGraph, RejectsInvalidBonds) {
  std::vector<Atom> atoms(2);
  EXPECT_THROW(MolecularGraph(atoms, { { 0, 0 } }), std::invalid_argument);
  EXPECT_THROW(MolecularGraph(atoms, { { 0, 2 } }), std::invalid_argument);
  EXPECT_THROW(MolecularGraph(atoms, { { 0, 1 }, { 1, 0 } }),
               std::invalid_argument);
  EXPECT_THROW(MolecularGraph(atoms, { { 0, 1 } }, { { 0, 1, 0 } }),
               std::invalid_argument);
}

TEST(Rings, Examples) {
  EXPECT_EQ(parse_smiles("c1ccccc1").rings().size(), 1);
  EXPECT_EQ(parse_smiles("c1ccccc1").rings()[0].size(), 6);
  EXPECT_TRUE(parse_smiles("CCO").rings().empty());

  MolecularGraph naphthalene = parse_smiles("c1ccc2ccccc2c1");
  EXPECT_EQ(circuit_rank(naphthalene), 11 - 10 + 1);
  ASSERT_EQ(naphthalene.rings().size(), 2);
  EXPECT_EQ(naphthalene.rings()[0].size(), 6);
  EXPECT_EQ(naphthalene.rings()[1].size(), 6);

  MolecularGraph cubane = parse_smiles("C12C3C4C1C5C2C3C45");
  ASSERT_EQ(cubane.rings().size(), 5);
  for (const Ring &r: cubane.rings())
    EXPECT_EQ(r.size(), 4);
}

TEST(Rings, BasisSizeIsCircuitRank) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng.below(9));
    MolecularGraph g = testing::random_graph(rng, n, rng.uniform(0.1, 0.7));
    EXPECT_EQ(static_cast<int>(g.rings().size()),
              g.num_bonds() - g.num_atoms() + g.num_components());
  }
}

TEST(Rings, BasisIsMinimumWeight) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 3 + static_cast<int>(rng.below(6));
    MolecularGraph g = testing::random_graph(rng, n, rng.uniform(0.2, 0.8));
    int weight = 0;
    for (const Ring &r: g.rings())
      weight += static_cast<int>(r.size());
    EXPECT_EQ(weight, testing::minimum_cycle_basis_weight(g));
  }
}

TEST(Rings, SmallestCycleSizes) {
  MolecularGraph g = parse_smiles("C1CC1CC2CCCC2C");
  std::vector<int> sizes = smallest_cycle_sizes(g);
  EXPECT_EQ(sizes, (std::vector<int> { 3, 3, 3, 0, 5, 5, 5, 5, 5, 0 }));
}

TEST(CanonicalHash, Examples) {
  EXPECT_EQ(canonical_hash(parse_smiles("CCO")),
            canonical_hash(parse_smiles("OCC")));
  EXPECT_NE(canonical_hash(parse_smiles("CCO")),
            canonical_hash(parse_smiles("CCN")));

  MolecularGraph a = parse_smiles("c1ccccc1C");
  MolecularGraph b = parse_smiles("Cc2ccccc2");
  MolecularGraph c = parse_smiles("c3cc(C)ccc3");
  ASSERT_TRUE(testing::isomorphic(a, b));
  ASSERT_TRUE(testing::isomorphic(a, c));
  EXPECT_EQ(canonical_hash(a), canonical_hash(b));
  EXPECT_EQ(canonical_hash(a), canonical_hash(c));
}

TEST(CanonicalHash, DistinguishesRingArrangements) {
  // Same atom and bond counts, same degree sequence.
  EXPECT_NE(canonical_hash(parse_smiles("C1CCCCCCCCCCC1")),
            canonical_hash(parse_smiles("C1CCCCC1.C1CCCCC1")));
  EXPECT_NE(canonical_hash(parse_smiles("C1CCC2CCCCC2C1")),
            canonical_hash(parse_smiles("C1CCC(C1)C1CCCC1")));
}

TEST(CanonicalHash, InvariantUnderAtomPermutation) {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    MolecularGraph g = parse_smiles(testing::random_molecule_smiles(rng, 25));
    MolecularGraph p = testing::permute_atoms(g, rng);
    EXPECT_EQ(canonical_hash(g), canonical_hash(p));
  }
}

TEST(CanonicalHash, NoCollisionsOnDistinctCorpus) {
  Rng rng(2024);
  std::map<std::uint64_t, std::vector<MolecularGraph>> by_hash;
  int distinct = 0, collisions = 0, attempts = 0;
  while (distinct < 1000 && attempts < 50000) {
    ++attempts;
    MolecularGraph g = parse_smiles(testing::random_molecule_smiles(rng, 12));
    auto &bucket = by_hash[canonical_hash(g)];
    bool duplicate = false;
    for (const MolecularGraph &other: bucket) {
      if (testing::isomorphic(g, other)) {
        duplicate = true;
        break;
      }
    }
    if (duplicate)
      continue;
    if (!bucket.empty())
      ++collisions;
    bucket.push_back(g);
    ++distinct;
  }
  EXPECT_EQ(distinct, 1000);
  EXPECT_EQ(collisions, 0);
}

TEST(WriteSmiles, RoundTripIsIsomorphic) {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    std::string smiles = testing::random_molecule_smiles(rng, 12);
    MolecularGraph g = parse_smiles(smiles);
    std::string written = write_smiles(g);
    MolecularGraph back = parse_smiles(written);
    EXPECT_TRUE(testing::isomorphic(g, back)) << smiles << " -> " << written;
  }
  for (const char *smiles:
       { "[NH4+].[O-]C(=O)C", "c1cc[nH]c1", "O=c1cccc[nH]1", "C#N",
         "c1ccc2ccccc2c1", "C12C3C4C1C5C2C3C45", "[Fe+2]", "Oc1ccccc1-c1ccccc1",
         "OB(O)c1ccccc1", "c1ccc2c(c1)oc1ccccc12" }) {
    MolecularGraph g = parse_smiles(smiles);
    EXPECT_TRUE(testing::isomorphic(g, parse_smiles(write_smiles(g))))
        << smiles << " -> " << write_smiles(g);
  }
}

TEST(DumpGraph, LineFormat) {
  EXPECT_EQ(dump_graph(parse_smiles("C1CO1")),
            "atoms 3\n"
            "0 C aromatic=0 charge=0 h=2\n"
            "1 C aromatic=0 charge=0 h=2\n"
            "2 O aromatic=0 charge=0 h=0\n"
            "bonds 3\n"
            "0 1 single\n"
            "1 2 single\n"
            "0 2 single\n"
            "rings 1\n"
            "0 1 2\n");
}

TEST(Elements, Lookup) {
  EXPECT_EQ(atomic_number("Cl"), 17);
  EXPECT_EQ(atomic_number("CL"), 0);
  EXPECT_EQ(element_symbol(35), "Br");
  EXPECT_TRUE(is_organic_subset(9));
  EXPECT_FALSE(is_organic_subset(26));
}

}  // namespace
}  // namespace molprobe
