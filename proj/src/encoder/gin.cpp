//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/encoder/gin.h"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

#include <fmt/format.h>

#include "molprobe/core/hash.h"
#include "molprobe/core/init.h"
#include "molprobe/core/parallel.h"

namespace molprobe {

namespace {

// Elements with their own embedding row; everything else shares row 0.
constexpr std::array<int, 22> kElements = { 1,  3,  5,  6,  7,  8,  9,  11,
                                            12, 14, 15, 16, 17, 19, 20, 26,
                                            29, 30, 34, 35, 53, 33 };

std::uint64_t digest(std::uint64_t h, const Eigen::MatrixXd &m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      h = hash_combine(h, std::bit_cast<std::uint64_t>(m(r, c)));
  return h;
}

}  // namespace

void EncoderConfig::validate() const {
  if (layers < 1)
    throw std::invalid_argument("encoder needs at least one layer");
  if (hidden_dim < 1)
    throw std::invalid_argument("encoder hidden_dim must be positive");
}

int FeatureVocabulary::num_elements() {
  return static_cast<int>(kElements.size()) + 1;
}

int FeatureVocabulary::element_id(int atomic_number) {
  for (std::size_t i = 0; i < kElements.size(); ++i)
    if (kElements[i] == atomic_number)
      return static_cast<int>(i) + 1;
  return kUnknownElement;
}

int FeatureVocabulary::charge_bucket(int formal_charge) {
  return std::clamp(formal_charge, -2, 2) + 2;
}

int FeatureVocabulary::bond_id(BondOrder order) {
  return static_cast<int>(order) - 1;
}

GinEncoder::GinEncoder(const EncoderConfig &config): config_(config) {
  config.validate();
  const int d = config.hidden_dim;
  Rng rng(config.seed);
  element_.resize(FeatureVocabulary::num_elements(), d);
  aromatic_.resize(2, d);
  charge_.resize(FeatureVocabulary::kChargeBuckets, d);
  glorot_uniform(element_, rng);
  glorot_uniform(aromatic_, rng);
  glorot_uniform(charge_, rng);
  layers_.resize(config.layers);
  for (Layer &l: layers_) {
    l.edge.resize(FeatureVocabulary::kBondTypes, d);
    l.w1.resize(2 * d, d);
    l.w2.resize(d, 2 * d);
    glorot_uniform(l.edge, rng);
    glorot_uniform(l.w1, rng);
    glorot_uniform(l.w2, rng);
    l.b1 = Eigen::VectorXd::Zero(2 * d);
    l.b2 = Eigen::VectorXd::Zero(d);
  }
}

EncodeResult GinEncoder::encode(const MolecularGraph &g) const {
  if (g.empty())
    throw std::invalid_argument("cannot encode an empty molecule");
  const int n = g.num_atoms(), d = dim();
  EncodeResult out;

  Eigen::MatrixXd h(n, d);
  for (int u = 0; u < n; ++u) {
    const Atom &a = g.atom(u);
    h.row(u) = element_.row(FeatureVocabulary::element_id(a.atomic_number))
               + aromatic_.row(a.aromatic ? 1 : 0)
               + charge_.row(FeatureVocabulary::charge_bucket(a.formal_charge));
  }
  out.node_layers.push_back(h);

  for (std::size_t t = 0; t < layers_.size(); ++t) {
    const Layer &l = layers_[t];
    Eigen::MatrixXd agg = h;
    for (int u = 0; u < n; ++u) {
      for (const Neighbor &nb: g.neighbors(u)) {
        agg.row(u) += h.row(nb.atom);
        agg.row(u) +=
            l.edge.row(FeatureVocabulary::bond_id(g.bond(nb.bond).order));
      }
    }
    Eigen::MatrixXd hidden = ((agg * l.w1.transpose()).rowwise()
                              + l.b1.transpose())
                                 .cwiseMax(0.0);
    h = (hidden * l.w2.transpose()).rowwise() + l.b2.transpose();
    if (t + 1 < layers_.size())
      h = h.cwiseMax(0.0);
    out.node_layers.push_back(h);
  }
  out.graph = readout(h);
  return out;
}

Eigen::VectorXd GinEncoder::readout(const Eigen::MatrixXd &nodes) const {
  Eigen::VectorXd s = nodes.colwise().sum().transpose();
  if (config_.readout == Readout::kMean && nodes.rows() > 0)
    s /= static_cast<double>(nodes.rows());
  return s;
}

std::uint64_t GinEncoder::checksum() const {
  std::uint64_t h = digest(0, element_);
  h = digest(h, aromatic_);
  h = digest(h, charge_);
  for (const Layer &l: layers_) {
    h = digest(h, l.edge);
    h = digest(h, l.w1);
    h = digest(h, l.w2);
    h = digest(h, l.b1);
    h = digest(h, l.b2);
  }
  return h;
}

DatasetEmbeddings encode_dataset(const GinEncoder &encoder,
                                 std::span<const MolecularGraph> molecules,
                                 int jobs, std::span<const int> layers) {
  const int d = encoder.dim();
  std::vector<int> keep(layers.begin(), layers.end());
  if (keep.empty())
    for (int t = 0; t <= encoder.config().layers; ++t)
      keep.push_back(t);
  for (int t: keep)
    if (t < 0 || t > encoder.config().layers)
      throw std::invalid_argument(
          fmt::format("layer {} outside 0..{}", t, encoder.config().layers));

  std::vector<Eigen::Index> offset(molecules.size() + 1, 0);
  for (std::size_t m = 0; m < molecules.size(); ++m)
    offset[m + 1] = offset[m] + molecules[m].num_atoms();
  const std::string provenance =
      fmt::format("random-gin layers={} dim={} seed={} readout={}",
                  encoder.config().layers, d, encoder.config().seed,
                  encoder.config().readout == Readout::kMean ? "mean" : "sum");

  DatasetEmbeddings out;
  for (int t: keep) {
    EmbeddingMatrix node, graph;
    node.level = EmbeddingLevel::kNode;
    graph.level = EmbeddingLevel::kGraph;
    node.layer = graph.layer = t;
    node.provenance = graph.provenance = provenance;
    node.values.resize(offset.back(), d);
    graph.values.resize(static_cast<Eigen::Index>(molecules.size()), d);
    for (std::size_t m = 0; m < molecules.size(); ++m) {
      for (int a = 0; a < molecules[m].num_atoms(); ++a)
        node.index.push_back({ static_cast<std::int32_t>(m), a });
      graph.index.push_back({ static_cast<std::int32_t>(m), -1 });
    }
    out.node_layers.push_back(std::move(node));
    out.graph_layers.push_back(std::move(graph));
  }

  // Each molecule owns its rows, so workers never share a destination.
  parallel_for(molecules.size(), jobs, [&](std::size_t m) {
    EncodeResult r = encoder.encode(molecules[m]);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const Eigen::MatrixXd &h = r.node_layers[keep[k]];
      out.node_layers[k].values.middleRows(offset[m], h.rows()) = h;
      out.graph_layers[k].values.row(static_cast<Eigen::Index>(m)) =
          encoder.readout(h).transpose();
    }
  });
  return out;
}

}  // namespace molprobe
