//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <array>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <fmt/core.h>
#include <fmt/ostream.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "molprobe/core/format.h"
#include "molprobe/embedspace/embedspace.h"
#include "molprobe/encoder/embedding.h"
#include "molprobe/encoder/gin.h"
#include "molprobe/graphstats/batch.h"
#include "molprobe/metrics/metrics.h"
#include "molprobe/molgraph/hash.h"
#include "molprobe/molgraph/smiles.h"
#include "molprobe/pipeline/config.h"
#include "molprobe/pipeline/dataset.h"
#include "molprobe/pipeline/split.h"
#include "molprobe/pipeline/suite.h"
#include "molprobe/probe/probe.h"
#include "molprobe/substructure/cramers.h"
#include "molprobe/substructure/registry.h"

namespace fs = std::filesystem;

namespace molprobe {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitPartial = 2;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
  bool verbose = false;
};

KeyValueConfig load_config(const Globals &g) {
  KeyValueConfig kv;
  if (!g.config_path.empty())
    kv = KeyValueConfig::load(g.config_path);
  if (g.seed)
    kv.set("seed", std::to_string(*g.seed));
  if (!g.out.empty())
    kv.set("out", g.out);
  if (g.jobs)
    kv.set("jobs", std::to_string(*g.jobs));
  return kv;
}

// Opens out/<name>, or stdout when no output directory was given.
class Sink {
public:
  Sink(const std::string &dir, const std::string &name) {
    if (dir.empty())
      return;
    fs::create_directories(dir);
    path_ = fs::path(dir) / name;
    file_.open(path_, std::ios::binary);
    if (!file_)
      throw std::runtime_error("cannot write " + path_.string());
  }

  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

  void close() {
    if (!file_.is_open())
      return;
    file_.close();
    if (!file_)
      throw std::runtime_error("failed writing " + path_.string());
    spdlog::info("wrote {}", path_.string());
  }

private:
  fs::path path_;
  std::ofstream file_;
};

std::array<double, 3> parse_fractions(const std::string &text) {
  auto parts = split_list(text);
  if (parts.size() != 3)
    throw ConfigError("split needs three fractions: " + text);
  std::array<double, 3> f {};
  for (int i = 0; i < 3; ++i) {
    try {
      f[i] = std::stod(parts[i]);
    } catch (const std::exception &) {
      throw ConfigError("bad split fraction: " + parts[i]);
    }
  }
  return f;
}

void report_skipped(const Dataset &d) {
  for (const auto &s: d.skipped)
    spdlog::warn("{}:{}: skipped '{}': {}", d.name, s.line, s.smiles,
                 s.reason);
}

Dataset read_molecules(const std::string &path, const KeyValueConfig &kv,
                       bool require_labels) {
  Dataset d = load_dataset(path, kv.get_string("smiles_column", ""),
                           require_labels);
  report_skipped(d);
  return d;
}

// ---------------------------------------------------------------- parse

int cmd_parse(const std::vector<std::string> &inputs, bool canonical) {
  int status = kExitOk;
  for (const auto &s: inputs) {
    try {
      std::vector<std::string> warnings;
      MolecularGraph g = parse_smiles(s, &warnings);
      for (const auto &w: warnings)
        spdlog::warn("{}: {}", s, w);
      if (canonical) {
        fmt::print("{}\t{:016x}\n", write_smiles(g), canonical_hash(g));
      } else {
        fmt::print("# {}\n{}", s, dump_graph(g));
      }
    } catch (const SmilesParseError &e) {
      spdlog::error("{}: {}", s, e.what());
      status = kExitInput;
    }
  }
  return status;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const std::string &csv, const KeyValueConfig &kv) {
  Dataset d = read_molecules(csv, kv, false);
  BatchOptions opt;
  opt.jobs = static_cast<int>(kv.get_int("jobs", 1));
  opt.katz_length = static_cast<int>(kv.get_int("katz.length", -1));
  opt.katz_beta = kv.get_double("katz.beta", 1.0);
  opt.histogram_bins = static_cast<int>(kv.get_int("histogram.bins", 20));
  std::string out = kv.get_string("out", "stats");
  kv.reject_unused();

  BatchSummary s = write_batch_stats(d.molecules, out, opt);
  spdlog::info("{} molecules, statistics in {}", s.molecules, out);
  for (const auto &[metric, n]: s.skipped)
    if (n > 0)
      spdlog::warn("{}: {} molecules left out", metric, n);
  return kExitOk;
}

// ---------------------------------------------------------- substructure

SubstructureRegistry pick_registry(const KeyValueConfig &kv) {
  std::string path = kv.get_string("registry", "");
  if (path.empty())
    return SubstructureRegistry::builtin();
  return SubstructureRegistry::load(path);
}

int cmd_substructure(const std::string &csv, const KeyValueConfig &kv) {
  Dataset d = read_molecules(csv, kv, false);
  SubstructureRegistry reg = pick_registry(kv);
  int jobs = static_cast<int>(kv.get_int("jobs", 1));
  std::string out = kv.get_string("out", "");
  kv.reject_unused();

  auto counts = count_all(reg, d.molecules, jobs);
  Sink sink(out, d.name + ".substructures.csv");
  write_counts_csv(sink.stream(), reg, counts);
  sink.close();
  return kExitOk;
}

// ---------------------------------------------------------------- split

int cmd_split(const std::string &csv, const KeyValueConfig &kv) {
  Dataset d = read_molecules(csv, kv, false);
  auto fractions = parse_fractions(kv.get_string("split", "0.8,0.1,0.1"));
  auto seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
  std::string out = kv.get_string("out", "");
  kv.reject_unused();

  SplitAssignment split = scaffold_split(d.molecules, fractions, seed);
  for (const auto &w: split.warnings)
    spdlog::warn("{}", w);
  spdlog::info("{} scaffolds, achieved {:.4f}/{:.4f}/{:.4f}", split.groups,
               split.achieved[0], split.achieved[1], split.achieved[2]);
  Sink sink(out, d.name + ".split.csv");
  write_split_csv(sink.stream(), split);
  sink.close();
  return kExitOk;
}

// ---------------------------------------------------------------- embed

int cmd_embed(const std::string &csv, const KeyValueConfig &kv,
              bool write_csv) {
  Dataset d = read_molecules(csv, kv, false);
  EncoderConfig ec;
  ec.layers = static_cast<int>(kv.get_int("encoder.layers", 5));
  ec.hidden_dim = static_cast<int>(kv.get_int("encoder.dim", 300));
  ec.seed = static_cast<std::uint64_t>(
      kv.get_int("encoder.seed", kv.get_int("seed", 0)));
  std::string readout = kv.get_string("encoder.readout", "mean");
  if (readout == "mean")
    ec.readout = Readout::kMean;
  else if (readout == "sum")
    ec.readout = Readout::kSum;
  else
    throw ConfigError("encoder.readout must be mean or sum: " + readout);
  int jobs = static_cast<int>(kv.get_int("jobs", 1));
  fs::path out = kv.get_string("out", "embeddings");
  kv.reject_unused();
  try {
    ec.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }

  GinEncoder encoder(ec);
  DatasetEmbeddings emb = encode_dataset(encoder, d.molecules, jobs);
  fs::create_directories(out);
  auto dump = [&](const EmbeddingMatrix &m, const char *level) {
    fs::path base =
        out / fmt::format("{}.{}.L{}", d.name, level, m.layer);
    save_embeddings(m, base.string() + ".bin");
    if (write_csv) {
      std::ofstream f(base.string() + ".csv");
      write_embeddings_csv(f, m);
    }
  };
  for (const auto &m: emb.node_layers)
    dump(m, "node");
  for (const auto &m: emb.graph_layers)
    dump(m, "graph");
  spdlog::info("encoder {:016x}: {} molecules, layers 0..{} in {}",
               encoder.checksum(), d.size(), ec.layers, out.string());
  return kExitOk;
}

// ---------------------------------------------------------------- probe

// target column plus an optional split column (train/valid/test); rows
// align with the embedding rows.
struct Targets {
  Eigen::VectorXd values;
  std::vector<SplitTag> tags;
};

Targets read_targets(const std::string &path, int rows) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DatasetError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto table = read_csv(buf.str());
  if (table.empty())
    throw DatasetError(path + ": empty file");
  int target_col = -1, split_col = -1;
  for (std::size_t c = 0; c < table[0].size(); ++c) {
    if (table[0][c] == "target")
      target_col = static_cast<int>(c);
    else if (table[0][c] == "split")
      split_col = static_cast<int>(c);
  }
  if (target_col < 0)
    throw DatasetError(path + ": no 'target' column");
  if (static_cast<int>(table.size()) - 1 != rows)
    throw DatasetError(fmt::format("{}: {} targets for {} embedding rows", path,
                                   table.size() - 1, rows));
  Targets t;
  t.values.resize(rows);
  t.tags.resize(rows, SplitTag::kTrain);
  for (int r = 0; r < rows; ++r) {
    const auto &row = table[r + 1];
    if (row.size() != table[0].size())
      throw DatasetError(fmt::format("{}:{}: wrong field count", path, r + 2));
    try {
      t.values[r] = std::stod(row[target_col]);
    } catch (const std::exception &) {
      throw DatasetError(fmt::format("{}:{}: bad target '{}'", path, r + 2,
                                     row[target_col]));
    }
    if (split_col >= 0) {
      const auto &s = row[split_col];
      if (s == "train")
        t.tags[r] = SplitTag::kTrain;
      else if (s == "valid")
        t.tags[r] = SplitTag::kValid;
      else if (s == "test")
        t.tags[r] = SplitTag::kTest;
      else
        throw DatasetError(
            fmt::format("{}:{}: unknown split '{}'", path, r + 2, s));
    }
  }
  return t;
}

ProbeData gather(const Eigen::MatrixXd &x, const Targets &t, SplitTag tag) {
  std::vector<int> rows;
  for (int i = 0; i < static_cast<int>(t.tags.size()); ++i)
    if (t.tags[i] == tag)
      rows.push_back(i);
  ProbeData d;
  d.features.resize(static_cast<Eigen::Index>(rows.size()), x.cols());
  d.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.features.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
    d.targets[static_cast<Eigen::Index>(i)] = t.values[rows[i]];
  }
  return d;
}

int cmd_probe(const std::string &emb_path, const std::string &target_path,
              const KeyValueConfig &kv) {
  ProbeConfig pc;
  pc.task = parse_task_kind(kv.get_string("task", "regression"));
  pc.num_classes = static_cast<int>(kv.get_int("num_classes", 2));
  pc.hidden_layers = static_cast<int>(kv.get_int("probe.hidden_layers", 1));
  pc.width = static_cast<int>(kv.get_int("probe.width", 600));
  pc.epochs = static_cast<int>(kv.get_int("probe.epochs", 100));
  pc.learning_rate = kv.get_double("probe.learning_rate", 1e-3);
  pc.batch_size = static_cast<int>(kv.get_int("probe.batch_size", 256));
  pc.standardize = kv.get_bool("probe.standardize", true);
  pc.seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
  fs::path out = kv.get_string("out", "probe");
  kv.reject_unused();
  try {
    pc.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }

  EmbeddingMatrix m = load_embeddings(emb_path);
  Targets t = read_targets(target_path, m.rows());
  ProbeData train = gather(m.values, t, SplitTag::kTrain);
  ProbeData valid = gather(m.values, t, SplitTag::kValid);
  ProbeData test = gather(m.values, t, SplitTag::kTest);
  if (train.size() == 0)
    throw DatasetError("no training rows");
  if (valid.size() == 0) {
    spdlog::warn("no validation rows; selecting on the training split");
    valid = train;
  }

  TrainResult r = train_probe(pc, train, valid);
  fs::create_directories(out);
  save_probe(r.model, out / "probe.bin");

  nlohmann::ordered_json j = to_json(r);
  auto score = [&](const char *name, const ProbeData &d) {
    if (d.size() == 0)
      return;
    ProbeScores s = evaluate_probe(r.model, d);
    nlohmann::ordered_json e;
    e["rows"] = d.size();
    e["loss"] = s.loss;
    if (s.auc)
      e["auc"] = *s.auc;
    else
      e["auc"] = nullptr;
    j["scores"][name] = e;
    fmt::print("{}\t{}\tloss={}{}\n", name, d.size(), format_double(s.loss),
               s.auc ? " auc=" + format_double(*s.auc) : std::string());
  };
  score("train", train);
  score("valid", valid);
  score("test", test);
  std::ofstream f(out / "probe.json");
  f << j.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- space

int cmd_space(const std::string &emb_path, const std::string &labels_path,
              const KeyValueConfig &kv) {
  double t = kv.get_double("uniformity.t", 2.0);
  SpectrumOptions so;
  so.threshold = kv.get_double("spectrum.threshold", so.threshold);
  so.center = kv.get_bool("spectrum.center", so.center);
  int bins = static_cast<int>(kv.get_int("alignment.bins", 40));
  int pair_count = static_cast<int>(kv.get_int("space.pairs", 10000));
  auto seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
  fs::path out = kv.get_string("out", "space");
  std::string smiles_col = kv.get_string("smiles_column", "");
  kv.reject_unused();

  EmbeddingMatrix m = load_embeddings(emb_path);
  fs::create_directories(out);
  nlohmann::ordered_json j;
  j["embedding"] = emb_path;
  j["rows"] = m.rows();
  j["dim"] = m.dim();

  UniformityReport u = uniformity(m.values, t);
  j["uniformity"]["t"] = t;
  if (u.value)
    j["uniformity"]["value"] = *u.value;
  else
    j["uniformity"]["value"] = nullptr;
  j["uniformity"]["skipped"] = u.skipped;

  SpectrumReport s = spectrum(m.values, so);
  j["spectrum"] = to_json(s);
  write_spectrum_csv(s, out / "spectrum.csv");

  if (!labels_path.empty()) {
    if (m.level != EmbeddingLevel::kGraph)
      throw DatasetError("alignment needs graph-level embeddings");
    Dataset d = load_dataset(labels_path, smiles_col);
    report_skipped(d);
    if (d.size() != m.rows())
      throw DatasetError(fmt::format("{} molecules for {} embedding rows",
                                     d.size(), m.rows()));
    PairSet pairs = build_pairs(d.labels, pair_count, seed);
    AlignmentReport a = alignment(m.values, pairs, bins);
    j["alignment"] = to_json(a);
  }

  std::ofstream f(out / "space.json");
  f << j.dump(2) << '\n';
  fmt::print("uniformity\t{}\n",
             u.value ? format_double(*u.value) : std::string("undefined"));
  fmt::print("effective_rank\t{}\n", format_double(s.effective_rank));
  fmt::print("above_threshold\t{}/{}\n", s.above_threshold, m.dim());
  return kExitOk;
}

// -------------------------------------------------------------- cramers

int cmd_cramers(const std::vector<std::string> &paths,
                const KeyValueConfig &kv) {
  SubstructureRegistry reg = pick_registry(kv);
  int cap = static_cast<int>(kv.get_int("cramers.cap", 10));
  std::string by = kv.get_string("cramers.rank_by", "task");
  int jobs = static_cast<int>(kv.get_int("jobs", 1));
  std::string smiles_col = kv.get_string("smiles_column", "");
  std::string out = kv.get_string("out", "");
  kv.reject_unused();
  if (by != "task" && by != "data")
    throw ConfigError("cramers.rank_by must be task or data: " + by);

  std::vector<SubstructureDataset> sets;
  for (const auto &p: paths) {
    Dataset d = load_dataset(p, smiles_col);
    report_skipped(d);
    sets.push_back({ d.name, count_all(reg, d.molecules, jobs), d.labels });
  }
  RankTable table = rank_substructures(
      reg, sets, by == "task" ? RankBy::kTask : RankBy::kData, cap);
  Sink sink(out, "cramers.csv");
  write_cramers_csv(sink.stream(), table);
  sink.close();
  return kExitOk;
}

// ---------------------------------------------------------------- suite

int cmd_suite(const KeyValueConfig &kv) {
  SuiteConfig cfg = SuiteConfig::from(kv);
  if (cfg.out.empty())
    throw ConfigError("suite needs an output directory (out= or --out)");
  ProbeReport report = run_suite(cfg);
  auto files = emit_report(report, cfg.out);
  spdlog::info("{} files in {}", files.size(), cfg.out.string());
  for (const auto &n: report.notes)
    spdlog::debug("{}", n);
  int failed = report.failures();
  if (failed > 0) {
    spdlog::warn("{} failures recorded in the report", failed);
    return kExitPartial;
  }
  return kExitOk;
}

}  // namespace
}  // namespace molprobe

int main(int argc, char **argv) {
  using namespace molprobe;

  CLI::App app("Probe molecular representations for topology and "
               "substructure information.");
  app.require_subcommand(1);
  app.set_version_flag("--version", MOLPROBE_VERSION);

  Globals g;
  app.add_option("-c,--config", g.config_path, "key=value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "base seed (overrides seed=)");
  app.add_option("-o,--out", g.out, "output directory (overrides out=)");
  app.add_option("-j,--jobs", g.jobs, "worker threads (overrides jobs=)")
      ->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", g.verbose, "debug logging");

  std::function<int()> run;

  std::vector<std::string> smiles;
  bool canonical = false;
  auto *parse = app.add_subcommand("parse", "parse SMILES and dump graphs");
  parse->add_option("smiles", smiles, "SMILES strings")->required();
  parse->add_flag("--canonical", canonical,
                  "print canonical SMILES and hash instead");
  parse->callback([&] { run = [&] { return cmd_parse(smiles, canonical); }; });

  std::string csv;
  auto *stats = app.add_subcommand("stats", "graph statistics for a dataset");
  stats->add_option("dataset", csv, "CSV with a SMILES column")
      ->required()
      ->check(CLI::ExistingFile);
  stats->callback([&] {
    run = [&] { return cmd_stats(csv, load_config(g)); };
  });

  auto *sub =
      app.add_subcommand("substructure", "substructure counts per molecule");
  sub->add_option("dataset", csv)->required()->check(CLI::ExistingFile);
  sub->callback([&] {
    run = [&] { return cmd_substructure(csv, load_config(g)); };
  });

  auto *split = app.add_subcommand("split", "scaffold split");
  split->add_option("dataset", csv)->required()->check(CLI::ExistingFile);
  split->callback([&] {
    run = [&] { return cmd_split(csv, load_config(g)); };
  });

  bool embed_csv = false;
  auto *embed =
      app.add_subcommand("embed", "encode a dataset with a random GIN");
  embed->add_option("dataset", csv)->required()->check(CLI::ExistingFile);
  embed->add_flag("--csv", embed_csv, "also write CSV copies");
  embed->callback([&] {
    run = [&] { return cmd_embed(csv, load_config(g), embed_csv); };
  });

  std::string emb_path, target_path;
  auto *probe = app.add_subcommand("probe", "train a probe on embeddings");
  probe->add_option("embeddings", emb_path, "embedding .bin file")
      ->required()
      ->check(CLI::ExistingFile);
  probe->add_option("targets", target_path,
                    "CSV with a target column and optional split column")
      ->required()
      ->check(CLI::ExistingFile);
  probe->callback([&] {
    run = [&] { return cmd_probe(emb_path, target_path, load_config(g)); };
  });

  std::string labels_path;
  auto *space =
      app.add_subcommand("space", "uniformity, spectrum and alignment");
  space->add_option("embeddings", emb_path)
      ->required()
      ->check(CLI::ExistingFile);
  space->add_option("labels", labels_path,
                    "labelled dataset (rows aligned) for alignment")
      ->check(CLI::ExistingFile);
  space->callback([&] {
    run = [&] { return cmd_space(emb_path, labels_path, load_config(g)); };
  });

  std::vector<std::string> datasets;
  auto *cramers =
      app.add_subcommand("cramers", "rank substructures against labels");
  cramers->add_option("datasets", datasets)
      ->required()
      ->check(CLI::ExistingFile);
  cramers->callback([&] {
    run = [&] { return cmd_cramers(datasets, load_config(g)); };
  });

  auto *suite = app.add_subcommand("suite", "run the full probing suite");
  suite->callback([&] {
    run = [&] { return cmd_suite(load_config(g)); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(g.verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    return run();
  } catch (const ConfigError &e) {
    spdlog::error("config: {}", e.what());
  } catch (const DatasetError &e) {
    spdlog::error("dataset: {}", e.what());
  } catch (const EmbeddingFormatError &e) {
    spdlog::error("embeddings: {}", e.what());
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
  }
  return kExitInput;
}
