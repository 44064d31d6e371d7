//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_ENCODER_EMBEDDING_H_
#define MOLPROBE_ENCODER_EMBEDDING_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace molprobe {

enum class EmbeddingLevel : std::uint32_t {
  kNode = 0,
  kGraph = 1,
};

// Which molecule (and atom, for node rows) a row belongs to. Graph rows use
// atom = -1.
struct EmbeddingIndex {
  std::int32_t molecule = 0;
  std::int32_t atom = -1;

  friend bool operator==(const EmbeddingIndex &,
                         const EmbeddingIndex &) = default;
  friend auto operator<=>(const EmbeddingIndex &,
                          const EmbeddingIndex &) = default;
};

struct EmbeddingMatrix {
  Eigen::MatrixXd values;  // N x d
  EmbeddingLevel level = EmbeddingLevel::kGraph;
  int layer = 0;
  std::string provenance;
  std::vector<EmbeddingIndex> index;  // one entry per row

  int rows() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }

  // Throws std::invalid_argument on non-finite values, an index map of the
  // wrong length, repeated entries or atom ids that do not fit the level.
  void validate() const;
};

class EmbeddingFormatError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Binary layout, little endian:
//   "MPEMBED1" | u32 version | u32 level | i32 layer | u64 rows | u64 dim |
//   u32 provenance length | provenance bytes | rows*dim f64 row-major |
//   rows * (i32 molecule, i32 atom)
void save_embeddings(const EmbeddingMatrix &m,
                     const std::filesystem::path &path);
EmbeddingMatrix load_embeddings(const std::filesystem::path &path);

// molecule,atom,f0,...,f{d-1}
void write_embeddings_csv(std::ostream &out, const EmbeddingMatrix &m);

}  // namespace molprobe

#endif  // MOLPROBE_ENCODER_EMBEDDING_H_
