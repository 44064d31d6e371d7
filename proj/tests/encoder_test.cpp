//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <filesystem>
#include <fstream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "molprobe/encoder/embedding.h"
#include "molprobe/encoder/gin.h"
#include "molprobe/molgraph/smiles.h"
#include "support/generators.h"
#include "support/oracles.h"

namespace molprobe {
namespace {

EncoderConfig small_config(std::uint64_t seed = 1) {
  EncoderConfig c;
  c.layers = 5;
  c.hidden_dim = 32;
  c.seed = seed;
  return c;
}

std::filesystem::path temp_file(const std::string &name) {
  return std::filesystem::temp_directory_path() / ("molprobe_" + name);
}

std::vector<int> distances_from(const MolecularGraph &g, int source) {
  std::vector<int> dist(g.num_atoms(), 1 << 20);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const Neighbor &nb: g.neighbors(u))
      if (dist[nb.atom] > dist[u] + 1) {
        dist[nb.atom] = dist[u] + 1;
        q.push(nb.atom);
      }
  }
  return dist;
}

TEST(EncoderInit, Deterministic) {
  EXPECT_EQ(GinEncoder(small_config(7)).checksum(),
            GinEncoder(small_config(7)).checksum());
  EXPECT_NE(GinEncoder(small_config(7)).checksum(),
            GinEncoder(small_config(8)).checksum());
  EncoderConfig bad = small_config();
  bad.hidden_dim = 0;
  EXPECT_THROW(GinEncoder { bad }, std::invalid_argument);
  bad = small_config();
  bad.layers = 0;
  EXPECT_THROW(GinEncoder { bad }, std::invalid_argument);
}

TEST(EncoderInit, DefaultsMatchBackbone) {
  EncoderConfig c;
  EXPECT_EQ(c.layers, 5);
  EXPECT_EQ(c.hidden_dim, 300);
  EXPECT_EQ(c.readout, Readout::kMean);
}

TEST(Encode, ShapesAndLayers) {
  GinEncoder enc(small_config());
  EncodeResult r = enc.encode(parse_smiles("CC(=O)Nc1ccccc1"));
  ASSERT_EQ(r.node_layers.size(), 6u);
  for (const auto &h: r.node_layers) {
    EXPECT_EQ(h.rows(), 10);
    EXPECT_EQ(h.cols(), 32);
    EXPECT_TRUE(h.allFinite());
  }
  EXPECT_EQ(r.graph.size(), 32);
  EXPECT_THROW(enc.encode(MolecularGraph()), std::invalid_argument);
}

TEST(Encode, PermutationEquivariance) {
  GinEncoder enc(small_config(3));
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    MolecularGraph g = parse_smiles(testing::random_molecule_smiles(rng, 25));
    std::vector<int> where;
    MolecularGraph h = testing::permute_atoms(g, rng, &where);
    EncodeResult a = enc.encode(g), b = enc.encode(h);
    EXPECT_LT((a.graph - b.graph).cwiseAbs().maxCoeff(),
              1e-9 * (1 + a.graph.cwiseAbs().maxCoeff()));
    for (std::size_t t = 0; t < a.node_layers.size(); ++t) {
      for (int u = 0; u < g.num_atoms(); ++u) {
        double diff = (a.node_layers[t].row(u) - b.node_layers[t].row(where[u]))
                          .cwiseAbs()
                          .maxCoeff();
        double scale = 1 + a.node_layers[t].row(u).cwiseAbs().maxCoeff();
        EXPECT_LT(diff, 1e-9 * scale);
      }
    }
  }
}

TEST(Encode, IsomorphicSmilesGiveEqualGraphEmbeddings) {
  GinEncoder enc(small_config(5));
  Rng rng(30);
  for (int trial = 0; trial < 30; ++trial) {
    MolecularGraph g = parse_smiles(testing::random_molecule_smiles(rng, 25));
    MolecularGraph h = parse_smiles(
        write_smiles(testing::permute_atoms(g, rng, nullptr)));
    ASSERT_TRUE(testing::isomorphic(g, h));
    Eigen::VectorXd a = enc.encode(g).graph, b = enc.encode(h).graph;
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(),
              1e-9 * (1 + a.cwiseAbs().maxCoeff()));
  }
}

TEST(Encode, SingleAtomMeanReadout) {
  GinEncoder enc(small_config());
  EncodeResult r = enc.encode(parse_smiles("O"));
  EXPECT_EQ((r.graph - r.node_layers.back().row(0).transpose())
                .cwiseAbs()
                .maxCoeff(),
            0.0);
}

TEST(Encode, LayerZeroIsAtomLocal) {
  GinEncoder enc(small_config());
  EncodeResult a = enc.encode(parse_smiles("CCO"));
  EncodeResult b = enc.encode(parse_smiles("CC(C)(C)N"));
  EXPECT_EQ(a.node_layers[0].row(0), b.node_layers[0].row(0));
  EXPECT_NE(a.node_layers[0].row(2), b.node_layers[0].row(4));
}

TEST(Encode, LayerTSeesOnlyTHopNeighbourhood) {
  GinEncoder enc(small_config(9));
  Rng rng(44);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    MolecularGraph g = parse_smiles(testing::random_molecule_smiles(rng, 30));
    const int w = static_cast<int>(rng.below(g.num_atoms()));
    std::vector<Atom> atoms = g.atoms();
    atoms[w].atomic_number = atoms[w].atomic_number == 9 ? 17 : 9;
    atoms[w].aromatic = false;
    MolecularGraph edited(atoms, g.bonds());
    EncodeResult a = enc.encode(g), b = enc.encode(edited);
    std::vector<int> dist = distances_from(g, w);
    for (std::size_t t = 0; t < a.node_layers.size(); ++t) {
      for (int u = 0; u < g.num_atoms(); ++u) {
        if (dist[u] > static_cast<int>(t)) {
          EXPECT_EQ(a.node_layers[t].row(u), b.node_layers[t].row(u));
          ++compared;
        }
      }
      EXPECT_NE(a.node_layers[t].row(w), b.node_layers[t].row(w));
    }
  }
  EXPECT_GT(compared, 100);
}

TEST(Encode, ReadoutUnderDuplication) {
  EncoderConfig c = small_config(2);
  GinEncoder mean(c);
  c.readout = Readout::kSum;
  GinEncoder sum(c);
  MolecularGraph one = parse_smiles("CC(=O)Oc1ccccc1"),
                 two = parse_smiles("CC(=O)Oc1ccccc1.CC(=O)Oc1ccccc1");
  Eigen::VectorXd s1 = sum.encode(one).graph, s2 = sum.encode(two).graph;
  Eigen::VectorXd m1 = mean.encode(one).graph, m2 = mean.encode(two).graph;
  EXPECT_LT((s2 - 2 * s1).cwiseAbs().maxCoeff(),
            1e-9 * (1 + s1.cwiseAbs().maxCoeff()));
  EXPECT_LT((m2 - m1).cwiseAbs().maxCoeff(),
            1e-9 * (1 + m1.cwiseAbs().maxCoeff()));
}

TEST(Encode, DatasetStackingMatchesSingleMolecules) {
  GinEncoder enc(small_config(6));
  std::vector<MolecularGraph> mols = { parse_smiles("CCO"),
                                       parse_smiles("c1ccccc1"),
                                       parse_smiles("N") };
  DatasetEmbeddings one = encode_dataset(enc, mols, 1);
  DatasetEmbeddings many = encode_dataset(enc, mols, 3);
  ASSERT_EQ(one.node_layers.size(), 6u);
  for (int t = 0; t < 6; ++t) {
    EXPECT_EQ(one.node_layers[t].values, many.node_layers[t].values);
    EXPECT_EQ(one.node_layers[t].rows(), 10);
    EXPECT_EQ(one.graph_layers[t].rows(), 3);
    EXPECT_NO_THROW(one.node_layers[t].validate());
    EXPECT_NO_THROW(one.graph_layers[t].validate());
  }
  EncodeResult benzene = enc.encode(mols[1]);
  EXPECT_EQ(one.node_layers[5].values.row(4), benzene.node_layers[5].row(1));
  EXPECT_EQ(one.node_layers[5].index[4], (EmbeddingIndex { 1, 1 }));
  EXPECT_EQ(one.graph_layers[5].values.row(1), benzene.graph.transpose());
}

EmbeddingMatrix sample_matrix() {
  EmbeddingMatrix m;
  m.level = EmbeddingLevel::kNode;
  m.layer = 3;
  m.provenance = "unit test";
  m.values.resize(3, 2);
  m.values << 0.1, -2.5e300, 1.0 / 3.0, 4e-320, -0.0, 7;
  m.index = { { 0, 0 }, { 0, 1 }, { 2, 0 } };
  return m;
}

TEST(EmbeddingFile, RoundTripIsBitExact) {
  auto path = temp_file("roundtrip.bin");
  EmbeddingMatrix m = sample_matrix();
  save_embeddings(m, path);
  EmbeddingMatrix r = load_embeddings(path);
  EXPECT_EQ(r.level, m.level);
  EXPECT_EQ(r.layer, 3);
  EXPECT_EQ(r.provenance, "unit test");
  EXPECT_EQ(r.index, m.index);
  ASSERT_EQ(r.values.rows(), 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      EXPECT_EQ(std::bit_cast<std::uint64_t>(r.values(i, j)),
                std::bit_cast<std::uint64_t>(m.values(i, j)));
  std::filesystem::remove(path);
}

TEST(EmbeddingFile, EmptyMatrix) {
  auto path = temp_file("empty.bin");
  EmbeddingMatrix m;
  m.values.resize(0, 4);
  save_embeddings(m, path);
  EmbeddingMatrix r = load_embeddings(path);
  EXPECT_EQ(r.rows(), 0);
  EXPECT_EQ(r.dim(), 4);
  std::filesystem::remove(path);
}

TEST(EmbeddingFile, RejectsDamage) {
  auto path = temp_file("damaged.bin");
  save_embeddings(sample_matrix(), path);
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [&](const std::string &b) {
    std::ofstream out(path, std::ios::binary);
    out.write(b.data(), static_cast<std::streamsize>(b.size()));
  };

  write(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(load_embeddings(path), EmbeddingFormatError);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  write(bad_magic);
  EXPECT_THROW(load_embeddings(path), EmbeddingFormatError);

  // Second index entry duplicates the first.
  std::string dup = bytes;
  const std::size_t index_start = bytes.size() - 3 * 8;
  dup.replace(index_start + 8, 8, bytes.substr(index_start, 8));
  write(dup);
  EXPECT_THROW(load_embeddings(path), EmbeddingFormatError);

  // A NaN value.
  std::string nan = bytes;
  const std::size_t values_start = index_start - 6 * 8;
  std::uint64_t bits = std::bit_cast<std::uint64_t>(std::nan(""));
  for (int i = 0; i < 8; ++i)
    nan[values_start + i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  write(nan);
  EXPECT_THROW(load_embeddings(path), EmbeddingFormatError);

  write(bytes + "x");
  EXPECT_THROW(load_embeddings(path), EmbeddingFormatError);
  std::filesystem::remove(path);
}

TEST(EmbeddingFile, SaveValidates) {
  EmbeddingMatrix m = sample_matrix();
  m.values(0, 0) = INFINITY;
  EXPECT_THROW(save_embeddings(m, temp_file("bad.bin")),
               std::invalid_argument);
  m = sample_matrix();
  m.index.pop_back();
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = sample_matrix();
  m.level = EmbeddingLevel::kGraph;
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(EmbeddingFile, CsvExport) {
  std::ostringstream out;
  write_embeddings_csv(out, sample_matrix());
  std::istringstream in(out.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "molecule,atom,f0,f1");
  EXPECT_EQ(first, "0,0,0.1,-2.5e+300");
}

}  // namespace
}  // namespace molprobe
