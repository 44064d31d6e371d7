//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_ENCODER_GIN_H_
#define MOLPROBE_ENCODER_GIN_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "molprobe/encoder/embedding.h"
#include "molprobe/molgraph/graph.h"

namespace molprobe {

enum class Readout { kMean, kSum };

struct EncoderConfig {
  int layers = 5;
  int hidden_dim = 300;
  std::uint64_t seed = 0;
  Readout readout = Readout::kMean;

  // Throws std::invalid_argument for non-positive layers or width.
  void validate() const;
};

// Integer coding of atom and bond features.
struct FeatureVocabulary {
  static constexpr int kUnknownElement = 0;
  static constexpr int kChargeBuckets = 5;  // <=-2, -1, 0, +1, >=+2
  static constexpr int kBondTypes = 4;      // single, double, triple, aromatic

  static int num_elements();
  static int element_id(int atomic_number);
  static int charge_bucket(int formal_charge);
  static int bond_id(BondOrder order);
};

struct EncodeResult {
  // Node states per layer, layer 0 being the input features; n x d each.
  std::vector<Eigen::MatrixXd> node_layers;
  // Readout of the final layer.
  Eigen::VectorXd graph;
};

// Randomly initialised GIN: every layer computes
//   h'_u = MLP(h_u + sum_{v in N(u)} (h_v + E[bond uv]))
// with a two-layer ReLU MLP (d -> 2d -> d) and a ReLU between layers. The
// encoder is never trained.
class GinEncoder {
public:
  explicit GinEncoder(const EncoderConfig &config);

  const EncoderConfig &config() const { return config_; }
  int dim() const { return config_.hidden_dim; }

  EncodeResult encode(const MolecularGraph &g) const;

  // Pools node states into one vector with the configured readout.
  Eigen::VectorXd readout(const Eigen::MatrixXd &nodes) const;

  // Stable digest of every weight.
  std::uint64_t checksum() const;

private:
  struct Layer {
    Eigen::MatrixXd edge;        // bond types x d
    Eigen::MatrixXd w1, w2;      // (2d x d), (d x 2d)
    Eigen::VectorXd b1, b2;
  };

  EncoderConfig config_;
  Eigen::MatrixXd element_, aromatic_, charge_;
  std::vector<Layer> layers_;
};

// Stacked embeddings for a whole dataset, one matrix per kept layer (all of
// 0..T by default), in the order requested.
struct DatasetEmbeddings {
  std::vector<EmbeddingMatrix> node_layers;
  std::vector<EmbeddingMatrix> graph_layers;  // readout of each layer
};

DatasetEmbeddings encode_dataset(const GinEncoder &encoder,
                                 std::span<const MolecularGraph> molecules,
                                 int jobs = 1,
                                 std::span<const int> layers = {});

}  // namespace molprobe

#endif  // MOLPROBE_ENCODER_GIN_H_
