//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_SUBSTRUCTURE_CRAMERS_H_
#define MOLPROBE_SUBSTRUCTURE_CRAMERS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "molprobe/core/labels.h"
#include "molprobe/substructure/registry.h"

namespace molprobe {

// Counts of (category, outcome) pairs.
class ContingencyTable {
public:
  ContingencyTable(int rows, int cols);
  explicit ContingencyTable(std::vector<std::vector<std::int64_t>> cells);

  int rows() const { return static_cast<int>(cells_.size()); }
  int cols() const { return cols_; }
  std::int64_t operator()(int r, int c) const { return cells_[r][c]; }
  std::int64_t &operator()(int r, int c) { return cells_[r][c]; }

  std::int64_t row_total(int r) const;
  std::int64_t col_total(int c) const;
  std::int64_t total() const;

  // Pearson chi-squared statistic over rows and columns with a nonzero
  // margin.
  double chi_squared() const;

private:
  std::vector<std::vector<std::int64_t>> cells_;
  int cols_;
};

// Rows are substructure counts 0, 1, ..., cap where the last row collects
// every count >= cap; columns are negative/positive outcomes. Missing labels
// are skipped.
ContingencyTable count_table(std::span<const int> counts,
                             std::span<const Label> labels, int cap = 10);

// sqrt(chi^2 / (n * min(k - 1, r - 1))) after dropping empty rows and
// columns; nullopt when fewer than two rows or columns remain.
std::optional<double> cramers_v(const ContingencyTable &table);

// sqrt(chi^2 / n), the two-column form. Throws unless the table has two
// columns.
std::optional<double> cramers_v_binary(const ContingencyTable &table);

struct SubstructureDataset {
  std::string name;
  std::vector<SubstructureCounts> counts;  // one per molecule
  LabelMatrix labels;                      // molecules x tasks
};

struct SubstructureRank {
  std::string name;
  // Mean V over each dataset's tasks with a defined value.
  std::vector<std::optional<double>> per_dataset;
  std::optional<double> avg_task;  // mean over all defined tasks
  std::optional<double> avg_data;  // mean of the per-dataset means
};

enum class RankBy { kTask, kData };

struct RankTable {
  std::vector<std::string> datasets;
  std::vector<int> molecules;  // per dataset
  std::vector<int> tasks;      // per dataset
  // [dataset][task][substructure]
  std::vector<std::vector<std::vector<std::optional<double>>>> task_values;
  // Sorted by the chosen average, descending; undefined last, then by name.
  std::vector<SubstructureRank> ranking;

  std::vector<std::string> top(int k) const;
};

RankTable rank_substructures(const SubstructureRegistry &registry,
                             std::span<const SubstructureDataset> datasets,
                             RankBy by = RankBy::kTask, int cap = 10);

// substructure, one column per dataset, avg_task, avg_data; preceded by
// molecule and task count rows. Undefined values are written as "-".
void write_cramers_csv(std::ostream &out, const RankTable &table);

}  // namespace molprobe

#endif  // MOLPROBE_SUBSTRUCTURE_CRAMERS_H_
