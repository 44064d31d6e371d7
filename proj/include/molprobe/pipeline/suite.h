//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_PIPELINE_SUITE_H_
#define MOLPROBE_PIPELINE_SUITE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "molprobe/embedspace/embedspace.h"
#include "molprobe/encoder/gin.h"
#include "molprobe/pipeline/config.h"
#include "molprobe/probe/probe.h"
#include "molprobe/substructure/cramers.h"

namespace molprobe {

enum class TaskLevel { kNode, kPair, kGraph };

std::string_view task_level_name(TaskLevel level);

// Built-in topology tasks and how they are probed: degree is classified
// (classes 0..max, the last collecting higher degrees), link is binary,
// everything else is regression.
struct TopologyTask {
  std::string_view name;
  TaskLevel level;
  TaskKind kind;
};

const std::vector<TopologyTask> &topology_tasks();

struct SourceSpec {
  std::string name;
  enum class Kind { kRandom, kFiles } kind = Kind::kRandom;
  EncoderConfig encoder;      // kRandom
  std::filesystem::path dir;  // kFiles: <dataset>.{node,graph}.L<k>.bin
};

// "random layers=5 dim=300 seed=0 readout=mean" or "files <dir>".
SourceSpec parse_source(std::string name, std::string_view text);

struct SuiteConfig {
  std::vector<std::filesystem::path> datasets;
  std::string smiles_column;
  std::vector<SourceSpec> sources;
  std::string layers = "last";  // "last", "all" or a comma list
  std::vector<std::string> tasks;
  std::string substructures = "top:5";  // "top:k", "all" or names
  int pairs = 10000;                    // node pairs per dataset
  int seeds = 3;
  std::uint64_t seed = 0;
  ProbeConfig probe;
  int max_examples = 0;  // per split, 0 = no cap
  std::array<double, 3> split { 0.8, 0.1, 0.1 };
  int katz_length = -1;  // -1: number of atoms
  double katz_beta = 1.0;
  bool katz_log1p = true;
  int degree_classes = 7;
  bool space = true;
  int space_pairs = 10000;
  int space_max_rows = 2000;
  double uniformity_t = 2.0;
  SpectrumOptions spectrum;
  int alignment_bins = 40;
  bool baseline = true;
  int cramers_cap = 10;
  std::map<std::string, double> reference;  // source -> downstream score
  std::filesystem::path out;
  int jobs = 1;

  std::string canonical_text;  // hashed into the manifest

  // Reads every suite key; unknown keys and invalid values throw
  // ConfigError.
  static SuiteConfig from(const KeyValueConfig &kv);
  void validate() const;
};

struct CellResult {
  std::string dataset;
  std::string source;
  int layer = -1;  // -1 for the substructure-count baseline
  std::string task;
  TaskLevel level = TaskLevel::kGraph;
  TaskKind kind = TaskKind::kRegression;
  int seed_index = 0;
  std::uint64_t seed = 0;
  std::string metric;  // mse, ce or auc
  std::optional<double> score;
  std::optional<double> loss;
  std::optional<double> normalized_loss;  // loss over the constant predictor
  std::optional<double> auc;
  int n_train = 0, n_valid = 0, n_test = 0;
  int best_epoch = 0;
  std::string error;
};

struct TaskSummary {
  std::string dataset;
  std::string source;
  int layer = -1;
  std::string task;
  TaskLevel level = TaskLevel::kGraph;
  std::string metric;
  int n = 0;  // seeds with a score
  std::optional<double> mean;
  std::optional<double> std;         // population
  std::optional<double> sample_std;  // n - 1
  std::optional<double> normalized_mean;
  std::string status;  // ok, failed, undefined
  std::string error;
};

struct RankEntry {
  std::string dataset;
  std::string task;
  int layer = 0;
  std::string source;
  double score = 0.0;
  double rank = 0.0;  // 1 is best, ties share the mean rank
};

struct SourceRank {
  std::string source;
  int layer = 0;
  int tasks = 0;
  double average_rank = 0.0;
  std::optional<double> reference;
};

struct RankSummary {
  std::vector<RankEntry> entries;
  std::vector<SourceRank> sources;
  // Spearman of (-average rank) against the reference score, per layer.
  std::map<int, std::optional<double>> rank_correlation;
};

struct SpaceResult {
  std::string dataset;
  std::string source;
  int layer = 0;
  UniformityReport uniformity;
  AlignmentReport alignment;
  SpectrumReport spectrum;
  int positive_pairs = 0;
  int negative_pairs = 0;
  std::string error;
};

struct DatasetSummary {
  std::string name;
  int molecules = 0;
  int skipped = 0;
  std::vector<std::string> tasks;
  std::array<double, 3> achieved {};
  int scaffold_groups = 0;
  int largest_group = 0;
  std::vector<std::string> warnings;
  std::string error;
};

struct ProbeReport {
  std::string config_text;
  std::uint64_t config_hash = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<DatasetSummary> datasets;
  std::vector<std::string> substructures;
  std::vector<CellResult> cells;
  std::vector<TaskSummary> summaries;
  RankSummary ranks;
  std::vector<SpaceResult> space;
  std::optional<RankTable> cramers;
  std::vector<std::string> notes;

  int failures() const;
  bool empty() const { return datasets.empty() && cells.empty(); }
};

ProbeReport run_suite(const SuiteConfig &config);

// Mean and spread of each (dataset, source, layer, task) over its seeds;
// cells are grouped in first-seen order.
std::vector<TaskSummary> summarize(const std::vector<CellResult> &cells);

RankSummary rank_sources(const std::vector<TaskSummary> &summaries,
                         const std::map<std::string, double> &reference);

nlohmann::ordered_json to_json(const ProbeReport &report);

// Writes report.json, scores.csv, summary.csv, ranks.csv, space.csv,
// uniformity.csv, cramers.csv, spectrum/ and alignment/ data and
// manifest.json. An empty report produces the manifest only. Returns the
// files written, relative to `dir`.
std::vector<std::string> emit_report(const ProbeReport &report,
                                     const std::filesystem::path &dir);

}  // namespace molprobe

#endif  // MOLPROBE_PIPELINE_SUITE_H_
