//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_PIPELINE_DATASET_H_
#define MOLPROBE_PIPELINE_DATASET_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molprobe/core/labels.h"
#include "molprobe/molgraph/graph.h"

namespace molprobe {

class DatasetError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SkippedRow {
  int line = 0;  // 1-based, header is line 1
  std::string smiles;
  std::string reason;
};

struct Dataset {
  std::string name;
  std::vector<std::string> smiles;
  std::vector<MolecularGraph> molecules;
  std::vector<std::string> tasks;  // label column names
  LabelMatrix labels;              // molecules x tasks
  std::vector<SkippedRow> skipped;
  std::vector<std::string> ignored_columns;  // non-binary, non-SMILES

  int size() const { return static_cast<int>(molecules.size()); }
};

// RFC 4180 style: comma separated, double quotes with "" escapes.
std::vector<std::vector<std::string>> read_csv(std::string_view text);

// The SMILES column is the one named "smiles" (any case) unless
// `smiles_column` is given. Every other column whose non-blank cells are
// all 0 or 1 becomes a task; blanks are missing labels. Rows whose SMILES
// fails to parse are skipped and recorded. Without `require_labels` a
// file with no label column is accepted (zero tasks).
Dataset parse_dataset(std::string_view csv, std::string name,
                      std::string_view smiles_column = {},
                      bool require_labels = true);
Dataset load_dataset(const std::filesystem::path &path,
                     std::string_view smiles_column = {},
                     bool require_labels = true);

}  // namespace molprobe

#endif  // MOLPROBE_PIPELINE_DATASET_H_
