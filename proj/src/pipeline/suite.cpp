//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/pipeline/suite.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "molprobe/core/format.h"
#include "molprobe/core/hash.h"
#include "molprobe/core/parallel.h"
#include "molprobe/core/random.h"
#include "molprobe/encoder/embedding.h"
#include "molprobe/graphstats/graphstats.h"
#include "molprobe/metrics/metrics.h"
#include "molprobe/pipeline/dataset.h"
#include "molprobe/pipeline/split.h"
#include "molprobe/substructure/registry.h"

#ifndef MOLPROBE_VERSION
#define MOLPROBE_VERSION "unknown"
#endif

namespace molprobe {

std::string_view task_level_name(TaskLevel level) {
  switch (level) {
  case TaskLevel::kNode: return "node";
  case TaskLevel::kPair: return "pair";
  case TaskLevel::kGraph: return "graph";
  }
  return "?";
}

const std::vector<TopologyTask> &topology_tasks() {
  static const std::vector<TopologyTask> tasks = {
    { "degree", TaskLevel::kNode, TaskKind::kMulticlass },
    { "centrality", TaskLevel::kNode, TaskKind::kRegression },
    { "clustering", TaskLevel::kNode, TaskKind::kRegression },
    { "link", TaskLevel::kPair, TaskKind::kBinary },
    { "jaccard", TaskLevel::kPair, TaskKind::kRegression },
    { "katz", TaskLevel::kPair, TaskKind::kRegression },
    { "diameter", TaskLevel::kGraph, TaskKind::kRegression },
    { "cycle_count", TaskLevel::kGraph, TaskKind::kRegression },
    { "connectivity", TaskLevel::kGraph, TaskKind::kRegression },
    { "assortativity", TaskLevel::kGraph, TaskKind::kRegression },
  };
  return tasks;
}

namespace {

const TopologyTask *find_topology(std::string_view name) {
  for (const TopologyTask &t: topology_tasks())
    if (t.name == name)
      return &t;
  return nullptr;
}

constexpr std::string_view kSubPrefix = "sub:";
constexpr std::string_view kLabelPrefix = "label:";
constexpr std::string_view kBaselineSource = "substructure-counts";

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

SourceSpec parse_source(std::string name, std::string_view text) {
  SourceSpec s;
  s.name = std::move(name);
  std::istringstream in { std::string(text) };
  std::string kind;
  in >> kind;
  if (kind == "files") {
    s.kind = SourceSpec::Kind::kFiles;
    std::string dir;
    in >> dir;
    if (dir.empty())
      throw ConfigError(fmt::format("source.{}: files needs a directory",
                                    s.name));
    s.dir = dir;
    return s;
  }
  if (kind != "random")
    throw ConfigError(fmt::format(
        "source.{}: expected 'random ...' or 'files <dir>', got '{}'", s.name,
        text));
  s.kind = SourceSpec::Kind::kRandom;
  std::string item;
  while (in >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("source.{}: bad option '{}'", s.name, item));
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      if (key == "layers")
        s.encoder.layers = std::stoi(value);
      else if (key == "dim")
        s.encoder.hidden_dim = std::stoi(value);
      else if (key == "seed")
        s.encoder.seed = std::stoull(value);
      else if (key == "readout" && (value == "mean" || value == "sum"))
        s.encoder.readout = value == "mean" ? Readout::kMean : Readout::kSum;
      else
        throw ConfigError("");
    } catch (const std::exception &) {
      throw ConfigError(
          fmt::format("source.{}: bad option '{}'", s.name, item));
    }
  }
  try {
    s.encoder.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(fmt::format("source.{}: {}", s.name, e.what()));
  }
  return s;
}

SuiteConfig SuiteConfig::from(const KeyValueConfig &kv) {
  SuiteConfig c;
  for (const std::string &d: kv.get_all("dataset"))
    c.datasets.emplace_back(d);
  if (auto list = kv.get("datasets"))
    for (const std::string &d: split_list(*list))
      c.datasets.emplace_back(d);
  c.smiles_column = kv.get_string("smiles_column", "");

  for (const std::string &key: kv.keys_with_prefix("source.")) {
    c.sources.push_back(
        parse_source(key.substr(7), *kv.get(key)));
  }
  if (c.sources.empty())
    c.sources.push_back(parse_source("random", "random"));

  c.layers = kv.get_string("layers", c.layers);
  c.tasks = split_list(kv.get_string(
      "tasks", "degree,centrality,clustering,link,jaccard,katz,diameter,"
               "cycle_count,connectivity,assortativity,substructures,labels"));
  if (c.tasks.size() == 1 && c.tasks[0] == "all")
    c.tasks = split_list(
        "degree,centrality,clustering,link,jaccard,katz,diameter,"
        "cycle_count,connectivity,assortativity,substructures,labels");
  c.substructures = kv.get_string("substructures", c.substructures);
  c.pairs = static_cast<int>(kv.get_int("pairs", c.pairs));
  c.seeds = static_cast<int>(kv.get_int("seeds", c.seeds));
  c.seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));

  c.probe.hidden_layers =
      static_cast<int>(kv.get_int("probe.hidden_layers", c.probe.hidden_layers));
  c.probe.width = static_cast<int>(kv.get_int("probe.width", c.probe.width));
  c.probe.epochs = static_cast<int>(kv.get_int("probe.epochs", c.probe.epochs));
  c.probe.learning_rate =
      kv.get_double("probe.learning_rate", c.probe.learning_rate);
  c.probe.batch_size =
      static_cast<int>(kv.get_int("probe.batch_size", c.probe.batch_size));
  c.probe.standardize = kv.get_bool("probe.standardize", c.probe.standardize);
  c.max_examples = static_cast<int>(kv.get_int("max_examples", 0));

  if (auto s = kv.get("split")) {
    std::vector<std::string> parts = split_list(*s);
    if (parts.size() != 3)
      throw ConfigError("split: expected three fractions");
    for (int i = 0; i < 3; ++i) {
      try {
        std::size_t used = 0;
        c.split[i] = std::stod(parts[i], &used);
        if (used != parts[i].size())
          throw ConfigError("");
      } catch (const std::exception &) {
        throw ConfigError(fmt::format("split: '{}' is not a number", parts[i]));
      }
    }
  }
  c.katz_length = static_cast<int>(kv.get_int("katz.length", c.katz_length));
  c.katz_beta = kv.get_double("katz.beta", c.katz_beta);
  const std::string transform = kv.get_string("katz.transform", "log1p");
  if (transform != "log1p" && transform != "none")
    throw ConfigError("katz.transform: expected log1p or none");
  c.katz_log1p = transform == "log1p";
  c.degree_classes =
      static_cast<int>(kv.get_int("degree.classes", c.degree_classes));

  c.space = kv.get_bool("space", c.space);
  c.space_pairs = static_cast<int>(kv.get_int("space.pairs", c.space_pairs));
  c.space_max_rows =
      static_cast<int>(kv.get_int("space.max_rows", c.space_max_rows));
  c.uniformity_t = kv.get_double("uniformity.t", c.uniformity_t);
  c.spectrum.threshold =
      kv.get_double("spectrum.threshold", c.spectrum.threshold);
  c.spectrum.center = kv.get_bool("spectrum.center", c.spectrum.center);
  c.alignment_bins =
      static_cast<int>(kv.get_int("alignment.bins", c.alignment_bins));
  c.baseline = kv.get_bool("baseline", c.baseline);
  c.cramers_cap = static_cast<int>(kv.get_int("cramers.cap", c.cramers_cap));

  for (const std::string &key: kv.keys_with_prefix("reference."))
    c.reference[key.substr(10)] = kv.get_double(key, 0);

  c.out = kv.get_string("out", "");
  c.jobs = static_cast<int>(kv.get_int("jobs", 1));
  kv.reject_unused();
  c.canonical_text = kv.canonical();
  c.validate();
  return c;
}

void SuiteConfig::validate() const {
  if (tasks.empty())
    throw ConfigError("no tasks selected");
  for (const std::string &t: tasks) {
    if (t == "substructures" || t == "labels" || find_topology(t)
        || t.starts_with(kSubPrefix))
      continue;
    throw ConfigError(fmt::format("unknown task '{}'", t));
  }
  if (seeds < 1)
    throw ConfigError("seeds must be at least 1");
  if (pairs < 3)
    throw ConfigError("pairs must be at least 3");
  if (max_examples < 0)
    throw ConfigError("max_examples must be non-negative");
  if (jobs < 1)
    throw ConfigError("jobs must be at least 1");
  if (degree_classes < 2)
    throw ConfigError("degree.classes must be at least 2");
  if (!(katz_beta > 0))
    throw ConfigError("katz.beta must be positive");
  if (!(uniformity_t > 0))
    throw ConfigError("uniformity.t must be positive");
  if (space_pairs < 1 || space_max_rows < 2 || alignment_bins < 1)
    throw ConfigError("space.pairs, space.max_rows, alignment.bins too small");
  double sum = 0;
  for (double f: split) {
    if (!(f >= 0))
      throw ConfigError("split fractions must be non-negative");
    sum += f;
  }
  if (std::abs(sum - 1) > 1e-9)
    throw ConfigError("split fractions must sum to 1");
  std::set<std::string> names;
  for (const SourceSpec &s: sources) {
    if (s.name.empty() || s.name == kBaselineSource)
      throw ConfigError(fmt::format("invalid source name '{}'", s.name));
    if (!names.insert(s.name).second)
      throw ConfigError(fmt::format("duplicate source '{}'", s.name));
  }
  ProbeConfig p = probe;
  p.task = TaskKind::kRegression;
  try {
    p.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("probe: ") + e.what());
  }
  if (!(layers == "last" || layers == "all")) {
    for (const std::string &l: split_list(layers))
      if (l.empty()
          || !std::all_of(l.begin(), l.end(), [](char ch) {
               return ch >= '0' && ch <= '9';
             }))
        throw ConfigError(fmt::format("layers: bad entry '{}'", l));
  }
}

// ---------------------------------------------------------------------------
// Summaries and ranks

int ProbeReport::failures() const {
  int n = 0;
  for (const TaskSummary &s: summaries)
    n += s.status != "ok";
  for (const DatasetSummary &d: datasets)
    n += !d.error.empty();
  for (const SpaceResult &s: space)
    n += !s.error.empty();
  return n;
}

std::vector<TaskSummary> summarize(const std::vector<CellResult> &cells) {
  std::vector<TaskSummary> out;
  std::map<std::tuple<std::string, std::string, int, std::string>, std::size_t>
      slot;
  std::vector<std::vector<const CellResult *>> groups;
  for (const CellResult &c: cells) {
    auto key = std::make_tuple(c.dataset, c.source, c.layer, c.task);
    auto [it, fresh] = slot.emplace(key, groups.size());
    if (fresh) {
      groups.emplace_back();
      TaskSummary s;
      s.dataset = c.dataset;
      s.source = c.source;
      s.layer = c.layer;
      s.task = c.task;
      s.level = c.level;
      s.metric = c.metric;
      out.push_back(std::move(s));
    }
    groups[it->second].push_back(&c);
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    TaskSummary &s = out[g];
    std::vector<double> scores, normalized;
    std::string first_error;
    for (const CellResult *c: groups[g]) {
      if (!c->error.empty()) {
        if (first_error.empty())
          first_error = c->error;
        continue;
      }
      if (c->score)
        scores.push_back(*c->score);
      if (c->normalized_loss)
        normalized.push_back(*c->normalized_loss);
    }
    s.n = static_cast<int>(scores.size());
    if (!scores.empty()) {
      MeanStd ms = mean_std(scores);
      s.mean = ms.mean;
      s.std = ms.population_std;
      s.sample_std = ms.sample_std;
      s.status = "ok";
    } else if (!first_error.empty()) {
      s.status = "failed";
      s.error = first_error;
    } else {
      s.status = "undefined";
      s.error = "no seed produced a defined score";
    }
    if (!normalized.empty())
      s.normalized_mean = mean_std(normalized).mean;
  }
  return out;
}

RankSummary rank_sources(const std::vector<TaskSummary> &summaries,
                         const std::map<std::string, double> &reference) {
  RankSummary r;
  // (dataset, task, layer) -> summaries with a mean
  std::map<std::tuple<std::string, std::string, int>,
           std::vector<const TaskSummary *>>
      groups;
  std::vector<std::tuple<std::string, std::string, int>> order;
  for (const TaskSummary &s: summaries) {
    if (s.source == kBaselineSource || !s.mean)
      continue;
    auto key = std::make_tuple(s.dataset, s.task, s.layer);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh)
      order.push_back(key);
    it->second.push_back(&s);
  }

  std::map<std::pair<std::string, int>, std::pair<double, int>> totals;
  std::vector<std::pair<std::string, int>> source_order;
  for (const auto &key: order) {
    const auto &members = groups[key];
    std::vector<double> keyed;
    for (const TaskSummary *s: members)
      keyed.push_back(s->metric == "auc" ? -*s->mean : *s->mean);
    std::vector<double> ranks = mid_ranks(keyed);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const TaskSummary &s = *members[i];
      r.entries.push_back(
          { s.dataset, s.task, s.layer, s.source, *s.mean, ranks[i] });
      auto sk = std::make_pair(s.source, s.layer);
      auto [it, fresh] = totals.try_emplace(sk, 0.0, 0);
      if (fresh)
        source_order.push_back(sk);
      it->second.first += ranks[i];
      it->second.second += 1;
    }
  }

  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_layer;
  for (const auto &sk: source_order) {
    SourceRank sr;
    sr.source = sk.first;
    sr.layer = sk.second;
    sr.tasks = totals[sk].second;
    sr.average_rank = totals[sk].first / sr.tasks;
    if (auto it = reference.find(sr.source); it != reference.end()) {
      sr.reference = it->second;
      by_layer[sr.layer].first.push_back(-sr.average_rank);
      by_layer[sr.layer].second.push_back(it->second);
    }
    r.sources.push_back(std::move(sr));
  }
  if (!reference.empty())
    for (const auto &[layer, xy]: by_layer)
      r.rank_correlation[layer] = spearman(xy.first, xy.second);
  return r;
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct Rows {
  // (a, b): node/graph row a, or the node pair (a, b) for pair tasks.
  std::array<std::vector<std::array<int, 2>>, 3> rows;
  std::array<std::vector<double>, 3> y;
};

struct TaskDef {
  std::string name;
  TaskLevel level;
  TaskKind kind;
  int classes = 2;
  std::string metric;
};

struct Prepared {
  Dataset data;
  SplitAssignment split;
  std::array<std::vector<int>, 3> members;
  std::vector<int> node_offset;
  std::vector<SubstructureCounts> counts;
  std::vector<TaskDef> tasks;
  // [task][seed]
  std::vector<std::vector<Rows>> rows;
  std::string error;
};

double constant_loss(const TaskDef &task, const Rows &rows) {
  const auto &train = rows.y[0];
  const auto &test = rows.y[2];
  if (train.empty() || test.empty())
    return NAN;
  if (task.kind == TaskKind::kRegression) {
    const double mean =
        std::accumulate(train.begin(), train.end(), 0.0) / train.size();
    double s = 0;
    for (double y: test)
      s += (y - mean) * (y - mean);
    return s / test.size();
  }
  const int k = task.kind == TaskKind::kBinary ? 2 : task.classes;
  std::vector<double> freq(k, 1.0);  // add-one smoothing
  for (double y: train)
    freq[static_cast<int>(y)] += 1;
  double loss = 0;
  for (double y: test)
    loss -= std::log(freq[static_cast<int>(y)] / (train.size() + k));
  return loss / test.size();
}

void cap_rows(Rows &r, int cap, std::uint64_t seed) {
  if (cap <= 0)
    return;
  for (int s = 0; s < 3; ++s) {
    const std::size_t n = r.rows[s].size();
    if (n <= static_cast<std::size_t>(cap))
      continue;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, 100 + s));
    shuffle(std::span(idx), rng);
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    Rows kept;
    for (std::size_t i: idx) {
      kept.rows[s].push_back(r.rows[s][i]);
      kept.y[s].push_back(r.y[s][i]);
    }
    r.rows[s] = std::move(kept.rows[s]);
    r.y[s] = std::move(kept.y[s]);
  }
}

std::array<int, 3> pair_counts(int total, const std::array<double, 3> &f) {
  std::array<int, 3> c;
  c[0] = static_cast<int>(std::lround(total * f[0]));
  c[1] = static_cast<int>(std::lround(total * f[1]));
  c[2] = std::max(0, total - c[0] - c[1]);
  return c;
}

// Builds the rows of every task and seed for one dataset. Targets come from
// the molecular graphs only.
void prepare_rows(Prepared &p, const SuiteConfig &cfg,
                  const std::vector<std::uint64_t> &seeds,
                  const SubstructureRegistry &registry) {
  const Dataset &d = p.data;
  const int n = d.size();

  // Per-molecule node targets.
  std::map<std::string, std::vector<std::vector<double>>> node_targets;
  std::map<std::string, std::vector<double>> graph_targets;
  bool need_node = false, need_graph = false;
  for (const TaskDef &t: p.tasks) {
    need_node |= t.level == TaskLevel::kNode;
    need_graph |= t.level == TaskLevel::kGraph && find_topology(t.name);
  }
  if (need_node) {
    auto &deg = node_targets["degree"];
    auto &cen = node_targets["centrality"];
    auto &clu = node_targets["clustering"];
    deg.resize(n);
    cen.resize(n);
    clu.resize(n);
    parallel_for(n, cfg.jobs, [&](std::size_t m) {
      const MolecularGraph &g = d.molecules[m];
      for (int a = 0; a < g.num_atoms(); ++a)
        deg[m].push_back(std::min(g.degree(a), cfg.degree_classes - 1));
      try {
        cen[m] = eigenvector_centrality(g);
      } catch (const CentralityError &) {
        cen[m].assign(g.num_atoms(), NAN);
      }
      clu[m] = clustering_coefficient(g);
    });
  }
  if (need_graph) {
    auto &dia = graph_targets["diameter"];
    auto &cyc = graph_targets["cycle_count"];
    auto &con = graph_targets["connectivity"];
    auto &ass = graph_targets["assortativity"];
    for (auto *v: { &dia, &cyc, &con, &ass })
      v->assign(n, NAN);
    parallel_for(n, cfg.jobs, [&](std::size_t m) {
      GraphStats s = compute_graph_stats(d.molecules[m]);
      dia[m] = s.diameter;
      cyc[m] = s.cycle_count;
      if (s.connectivity)
        con[m] = *s.connectivity;
      if (s.assortativity)
        ass[m] = *s.assortativity;
    });
  }

  // Node pairs per seed and split, shared by every pair task and source.
  bool need_pairs = false;
  for (const TaskDef &t: p.tasks)
    need_pairs |= t.level == TaskLevel::kPair;
  std::vector<std::array<std::vector<NodePair>, 3>> pairs(seeds.size());
  if (need_pairs) {
    const auto counts = pair_counts(cfg.pairs, cfg.split);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      for (int k = 0; k < 3; ++k) {
        if (counts[k] == 0)
          continue;
        try {
          pairs[s][k] = sample_node_pairs(d.molecules, p.members[k], counts[k],
                                          derive_seed(seeds[s], 200 + k));
        } catch (const std::invalid_argument &) {
          // Left empty; the cell reports an empty split.
        }
      }
    }
  }

  p.rows.assign(p.tasks.size(), std::vector<Rows>(seeds.size()));
  for (std::size_t t = 0; t < p.tasks.size(); ++t) {
    const TaskDef &task = p.tasks[t];
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      Rows &r = p.rows[t][s];
      for (int k = 0; k < 3; ++k) {
        if (task.level == TaskLevel::kPair) {
          for (const NodePair &np: pairs[s][k]) {
            const MolecularGraph &g = d.molecules[np.molecule];
            double y;
            if (task.name == "link") {
              y = link_label(g, np.u, np.v);
            } else if (task.name == "jaccard") {
              y = jaccard(g, np.u, np.v);
            } else {
              const int length =
                  cfg.katz_length < 0 ? g.num_atoms() : cfg.katz_length;
              y = katz_truncated(g, np.u, np.v, length, cfg.katz_beta);
              if (cfg.katz_log1p)
                y = std::log1p(y);
            }
            const int base = p.node_offset[np.molecule];
            r.rows[k].push_back({ base + np.u, base + np.v });
            r.y[k].push_back(y);
          }
          continue;
        }
        for (int m: p.members[k]) {
          if (task.level == TaskLevel::kNode) {
            const auto &values = node_targets.at(task.name)[m];
            for (std::size_t a = 0; a < values.size(); ++a) {
              if (std::isnan(values[a]))
                continue;
              r.rows[k].push_back({ p.node_offset[m] + static_cast<int>(a), -1 });
              r.y[k].push_back(values[a]);
            }
            continue;
          }
          double y = NAN;
          if (task.name.starts_with(kSubPrefix)) {
            auto idx = registry.index_of(task.name.substr(kSubPrefix.size()));
            y = p.counts[m][*idx];
          } else if (task.name.starts_with(kLabelPrefix)) {
            Label l = d.labels(m, static_cast<int>(
                std::find(d.tasks.begin(), d.tasks.end(),
                          task.name.substr(kLabelPrefix.size()))
                - d.tasks.begin()));
            if (l != Label::kMissing)
              y = l == Label::kPositive ? 1.0 : 0.0;
          } else {
            y = graph_targets.at(task.name)[m];
          }
          if (std::isnan(y))
            continue;
          r.rows[k].push_back({ m, -1 });
          r.y[k].push_back(y);
        }
      }
      cap_rows(r, cfg.max_examples,
               derive_seed(seeds[s], hash_string(task.name)));
    }
  }
}

ProbeData assemble(const Rows &rows, int split, TaskLevel level,
                   const Eigen::MatrixXd &node, const Eigen::MatrixXd &graph) {
  const auto &rs = rows.rows[split];
  const auto n = static_cast<Eigen::Index>(rs.size());
  ProbeData out;
  out.targets = Eigen::Map<const Eigen::VectorXd>(rows.y[split].data(), n);
  if (level == TaskLevel::kPair) {
    const Eigen::Index d = node.cols();
    out.features.resize(n, 3 * d);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto zu = node.row(rs[i][0]), zv = node.row(rs[i][1]);
      out.features.row(i).segment(0, d) = zu;
      out.features.row(i).segment(d, d) = zv;
      out.features.row(i).segment(2 * d, d) = zu.cwiseProduct(zv);
    }
  } else {
    const Eigen::MatrixXd &src = level == TaskLevel::kNode ? node : graph;
    out.features.resize(n, src.cols());
    for (Eigen::Index i = 0; i < n; ++i)
      out.features.row(i) = src.row(rs[i][0]);
  }
  return out;
}

void run_cell(CellResult &cell, const TaskDef &task, const Rows &rows,
              const SuiteConfig &cfg, const Eigen::MatrixXd &node,
              const Eigen::MatrixXd &graph) {
  try {
    static const char *names[] = { "train", "valid", "test" };
    for (int k = 0; k < 3; ++k)
      if (rows.rows[k].empty())
        throw std::runtime_error(
            fmt::format("{} split has no examples", names[k]));
    ProbeData train = assemble(rows, 0, task.level, node, graph);
    ProbeData valid = assemble(rows, 1, task.level, node, graph);
    ProbeData test = assemble(rows, 2, task.level, node, graph);
    cell.n_train = train.size();
    cell.n_valid = valid.size();
    cell.n_test = test.size();

    ProbeConfig pc = cfg.probe;
    pc.task = task.kind;
    pc.num_classes = task.kind == TaskKind::kMulticlass ? task.classes : 2;
    pc.seed = derive_seed(cell.seed, hash_string(task.name));
    if (cell.layer < 0)
      pc.hidden_layers = 0;

    TrainResult result = train_probe(pc, train, valid);
    ProbeScores scores = evaluate_probe(result.model, test);
    cell.best_epoch = result.best_epoch;
    cell.loss = scores.loss;
    cell.auc = scores.auc;
    const double base = constant_loss(task, rows);
    if (std::isfinite(base) && base > 0)
      cell.normalized_loss = scores.loss / base;
    if (task.metric == "auc") {
      cell.score = scores.auc;
      if (!scores.auc)
        spdlog::warn("{} {} L{} {} seed {}: test split has one class, AUC "
                     "undefined",
                     cell.dataset, cell.source, cell.layer, cell.task,
                     cell.seed_index);
    } else {
      cell.score = scores.loss;
    }
  } catch (const std::exception &e) {
    cell.error = e.what();
  }
}

std::vector<int> resolve_layers(const std::string &spec, int last) {
  std::vector<int> out;
  if (spec == "last") {
    out.push_back(last);
  } else if (spec == "all") {
    for (int t = 0; t <= last; ++t)
      out.push_back(t);
  } else {
    for (const std::string &l: split_list(spec))
      out.push_back(std::stoi(l));
  }
  return out;
}

int last_file_layer(const std::filesystem::path &dir, const std::string &ds) {
  int last = -1;
  std::error_code ec;
  const std::regex re(R"(\.graph\.L(\d+)\.bin)");
  for (const auto &e: std::filesystem::directory_iterator(dir, ec)) {
    const std::string name = e.path().filename().string();
    if (!name.starts_with(ds + "."))
      continue;
    std::smatch m;
    const std::string rest = name.substr(ds.size());
    if (std::regex_match(rest, m, re))
      last = std::max(last, std::stoi(m[1]));
  }
  return last;
}

struct LayerEmbeddings {
  int layer;
  Eigen::MatrixXd node, graph;
};

std::vector<LayerEmbeddings> source_embeddings(const SourceSpec &src,
                                               const Prepared &p,
                                               const std::vector<int> &layers,
                                               int jobs) {
  std::vector<LayerEmbeddings> out;
  if (src.kind == SourceSpec::Kind::kRandom) {
    GinEncoder encoder(src.encoder);
    DatasetEmbeddings e =
        encode_dataset(encoder, p.data.molecules, jobs, layers);
    for (std::size_t k = 0; k < layers.size(); ++k)
      out.push_back({ layers[k], std::move(e.node_layers[k].values),
                      std::move(e.graph_layers[k].values) });
    return out;
  }
  const int atoms = p.node_offset.back();
  for (int layer: layers) {
    auto stem = src.dir / fmt::format("{}.node.L{}.bin", p.data.name, layer);
    EmbeddingMatrix node = load_embeddings(stem);
    EmbeddingMatrix graph = load_embeddings(
        src.dir / fmt::format("{}.graph.L{}.bin", p.data.name, layer));
    if (node.values.rows() != atoms || graph.values.rows() != p.data.size())
      throw std::runtime_error(fmt::format(
          "{}: embedding rows ({} nodes, {} graphs) do not match the dataset "
          "({} atoms, {} molecules)",
          stem.string(), node.values.rows(), graph.values.rows(), atoms,
          p.data.size()));
    for (int m = 0, row = 0; m < p.data.size(); ++m) {
      if (graph.index[m].molecule != m)
        throw std::runtime_error("graph embedding rows out of order");
      for (int a = 0; a < p.data.molecules[m].num_atoms(); ++a, ++row)
        if (node.index[row].molecule != m || node.index[row].atom != a)
          throw std::runtime_error("node embedding rows out of order");
    }
    out.push_back({ layer, std::move(node.values), std::move(graph.values) });
  }
  return out;
}

SpaceResult space_diagnostics(const SuiteConfig &cfg, const Prepared &p,
                              const std::string &source, int layer,
                              const Eigen::MatrixXd &graph) {
  SpaceResult r;
  r.dataset = p.data.name;
  r.source = source;
  r.layer = layer;
  try {
    const std::uint64_t seed = derive_seed(cfg.seed, hash_string(p.data.name));
    PairSet pairs = build_pairs(p.data.labels, cfg.space_pairs, seed);
    r.positive_pairs = static_cast<int>(pairs.positives.size());
    r.negative_pairs = static_cast<int>(pairs.negatives.size());
    r.alignment = alignment(graph, pairs, cfg.alignment_bins);

    Eigen::MatrixXd sample = graph;
    if (graph.rows() > cfg.space_max_rows) {
      std::vector<int> idx(graph.rows());
      std::iota(idx.begin(), idx.end(), 0);
      Rng rng(derive_seed(seed, 7));
      shuffle(std::span(idx), rng);
      idx.resize(cfg.space_max_rows);
      std::sort(idx.begin(), idx.end());
      sample.resize(cfg.space_max_rows, graph.cols());
      for (int i = 0; i < cfg.space_max_rows; ++i)
        sample.row(i) = graph.row(idx[i]);
    }
    r.uniformity = uniformity(sample, cfg.uniformity_t);
    r.spectrum = spectrum(graph, cfg.spectrum);
  } catch (const std::exception &e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

ProbeReport run_suite(const SuiteConfig &cfg) {
  cfg.validate();
  ProbeReport report;
  report.config_text = cfg.canonical_text;
  report.config_hash = hash_string(cfg.canonical_text);
  for (int i = 0; i < cfg.seeds; ++i)
    report.seeds.push_back(derive_seed(cfg.seed, i));
  report.notes.push_back(fmt::format(
      "uniformity uses t={}; its range is [-4t, 0], reached at antipodal "
      "pairs, not [-4, 0]",
      cfg.uniformity_t));
  report.notes.push_back(
      "std is the population standard deviation over seeds; sample_std "
      "uses n-1");

  const SubstructureRegistry &registry = SubstructureRegistry::builtin();
  std::vector<Prepared> prepared;
  for (const auto &path: cfg.datasets) {
    Prepared p;
    DatasetSummary info;
    info.name = path.stem().string();
    try {
      p.data = load_dataset(path, cfg.smiles_column);
      info.molecules = p.data.size();
      info.skipped = static_cast<int>(p.data.skipped.size());
      info.tasks = p.data.tasks;
      spdlog::info("{}: {} molecules, {} skipped, {} label tasks", info.name,
                   info.molecules, info.skipped, info.tasks.size());
      p.split = scaffold_split(p.data.molecules, cfg.split, cfg.seed);
      for (int k = 0; k < 3; ++k)
        p.members[k] = p.split.members(static_cast<SplitTag>(k));
      info.achieved = p.split.achieved;
      info.scaffold_groups = p.split.groups;
      info.largest_group = p.split.largest_group;
      info.warnings = p.split.warnings;
      for (const auto &w: p.split.warnings)
        spdlog::warn("{}: {}", info.name, w);
      p.node_offset.assign(p.data.size() + 1, 0);
      for (int m = 0; m < p.data.size(); ++m)
        p.node_offset[m + 1] = p.node_offset[m] + p.data.molecules[m].num_atoms();
      p.counts = count_all(registry, p.data.molecules, cfg.jobs);
    } catch (const std::exception &e) {
      info.error = e.what();
      p.error = e.what();
      spdlog::error("{}: {}", info.name, e.what());
    }
    report.datasets.push_back(std::move(info));
    if (p.error.empty())
      prepared.push_back(std::move(p));
  }

  // Substructure association with the labels, and the probed selection.
  std::vector<SubstructureDataset> sub_sets;
  for (const Prepared &p: prepared)
    sub_sets.push_back({ p.data.name, p.counts, p.data.labels });
  if (!sub_sets.empty())
    report.cramers = rank_substructures(registry, sub_sets, RankBy::kTask,
                                        cfg.cramers_cap);
  std::vector<std::string> selected;
  const bool want_subs =
      std::find(cfg.tasks.begin(), cfg.tasks.end(), "substructures")
      != cfg.tasks.end();
  if (want_subs) {
    if (cfg.substructures == "all") {
      selected = registry.names();
    } else if (cfg.substructures.starts_with("top:")) {
      const int k = std::stoi(cfg.substructures.substr(4));
      if (report.cramers)
        selected = report.cramers->top(k);
    } else {
      selected = split_list(cfg.substructures);
    }
  }
  for (const std::string &t: cfg.tasks)
    if (t.starts_with(kSubPrefix))
      selected.push_back(t.substr(kSubPrefix.size()));
  for (const std::string &name: selected)
    if (!registry.index_of(name))
      throw ConfigError(fmt::format("unknown substructure '{}'", name));
  report.substructures = selected;

  for (Prepared &p: prepared) {
    std::set<std::string> seen;
    auto add = [&](TaskDef t) {
      if (seen.insert(t.name).second)
        p.tasks.push_back(std::move(t));
    };
    for (const std::string &t: cfg.tasks) {
      if (const TopologyTask *top = find_topology(t)) {
        add({ t, top->level, top->kind,
              top->kind == TaskKind::kMulticlass ? cfg.degree_classes : 2,
              top->kind == TaskKind::kRegression ? "mse" : "ce" });
      } else if (t == "substructures" || t.starts_with(kSubPrefix)) {
        for (const std::string &s: selected)
          if (t == "substructures" || t.substr(kSubPrefix.size()) == s)
            add({ std::string(kSubPrefix) + s, TaskLevel::kGraph,
                  TaskKind::kRegression, 2, "mse" });
      } else if (t == "labels") {
        for (const std::string &l: p.data.tasks)
          add({ std::string(kLabelPrefix) + l, TaskLevel::kGraph,
                TaskKind::kBinary, 2, "auc" });
      }
    }
    prepare_rows(p, cfg, report.seeds, registry);
  }

  auto make_cells = [&](const Prepared &p, const std::string &source,
                        int layer, bool labels_only) {
    std::vector<std::pair<CellResult, std::size_t>> cells;
    for (std::size_t t = 0; t < p.tasks.size(); ++t) {
      if (labels_only && !p.tasks[t].name.starts_with(kLabelPrefix))
        continue;
      for (int s = 0; s < cfg.seeds; ++s) {
        CellResult c;
        c.dataset = p.data.name;
        c.source = source;
        c.layer = layer;
        c.task = p.tasks[t].name;
        c.level = p.tasks[t].level;
        c.kind = p.tasks[t].kind;
        c.seed_index = s;
        c.seed = report.seeds[s];
        c.metric = p.tasks[t].metric;
        cells.emplace_back(std::move(c), t);
      }
    }
    return cells;
  };
  auto execute = [&](std::vector<std::pair<CellResult, std::size_t>> &cells,
                     const Prepared &p, const Eigen::MatrixXd &node,
                     const Eigen::MatrixXd &graph) {
    parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
      auto &[cell, t] = cells[i];
      run_cell(cell, p.tasks[t], p.rows[t][cell.seed_index], cfg, node, graph);
    });
    for (auto &[cell, t]: cells) {
      if (!cell.error.empty())
        spdlog::warn("{} {} L{} {} seed {}: {}", cell.dataset, cell.source,
                     cell.layer, cell.task, cell.seed_index, cell.error);
      report.cells.push_back(std::move(cell));
    }
  };

  for (const SourceSpec &src: cfg.sources) {
    for (const Prepared &p: prepared) {
      int last = src.kind == SourceSpec::Kind::kRandom
                     ? src.encoder.layers
                     : last_file_layer(src.dir, p.data.name);
      std::vector<int> layers = resolve_layers(cfg.layers, std::max(last, 0));
      std::vector<LayerEmbeddings> embeddings;
      std::string error;
      try {
        if (src.kind == SourceSpec::Kind::kRandom)
          for (int l: layers)
            if (l > last)
              throw std::runtime_error(
                  fmt::format("layer {} beyond the encoder's {}", l, last));
        spdlog::info("{}: embedding {} with {}", src.name, p.data.name,
                     cfg.layers);
        embeddings = source_embeddings(src, p, layers, cfg.jobs);
      } catch (const std::exception &e) {
        error = e.what();
        spdlog::error("{} {}: {}", src.name, p.data.name, error);
      }
      for (std::size_t k = 0; k < layers.size(); ++k) {
        auto cells = make_cells(p, src.name, layers[k], false);
        if (!error.empty()) {
          for (auto &[cell, t]: cells) {
            cell.error = error;
            report.cells.push_back(std::move(cell));
          }
          continue;
        }
        spdlog::info("{} {} L{}: {} probe runs", src.name, p.data.name,
                     layers[k], cells.size());
        execute(cells, p, embeddings[k].node, embeddings[k].graph);
        if (cfg.space)
          report.space.push_back(space_diagnostics(cfg, p, src.name, layers[k],
                                                   embeddings[k].graph));
      }
    }
  }

  if (cfg.baseline) {
    for (const Prepared &p: prepared) {
      Eigen::MatrixXd features(p.data.size(), registry.size());
      for (int m = 0; m < p.data.size(); ++m)
        for (int j = 0; j < registry.size(); ++j)
          features(m, j) = p.counts[m][j];
      auto cells = make_cells(p, std::string(kBaselineSource), -1, true);
      execute(cells, p, Eigen::MatrixXd(), features);
    }
  }

  report.summaries = summarize(report.cells);
  report.ranks = rank_sources(report.summaries, cfg.reference);
  return report;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

nlohmann::ordered_json opt(const std::optional<double> &v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string opt_csv(const std::optional<double> &v) {
  return v ? format_double(*v) : std::string();
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c: s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

std::string layer_text(int layer) {
  return layer < 0 ? std::string("-") : std::to_string(layer);
}

std::string safe_name(const std::string &s) {
  std::string out;
  for (char c: s)
    out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'
               ? c
               : '_';
  return out;
}

class Writer {
public:
  explicit Writer(std::filesystem::path dir): dir_(std::move(dir)) { }

  void write(const std::string &rel, const std::string &content) {
    const auto path = dir_ / rel;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.close();
    if (!out)
      throw std::runtime_error("write failed: " + path.string());
    files_.push_back(rel);
  }

  const std::vector<std::string> &files() const { return files_; }

private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

}  // namespace

nlohmann::ordered_json to_json(const ProbeReport &report) {
  using json = nlohmann::ordered_json;
  json j;
  j["format"] = "molprobe-report";
  j["schema_version"] = 1;
  j["toolkit_version"] = MOLPROBE_VERSION;
  j["config_hash"] = fmt::format("{:016x}", report.config_hash);
  j["config"] = report.config_text;
  j["seeds"] = report.seeds;

  json ds = json::array();
  for (const DatasetSummary &d: report.datasets) {
    json x;
    x["name"] = d.name;
    x["molecules"] = d.molecules;
    x["skipped"] = d.skipped;
    x["tasks"] = d.tasks;
    x["split_achieved"] = d.achieved;
    x["scaffold_groups"] = d.scaffold_groups;
    x["largest_scaffold_group"] = d.largest_group;
    x["warnings"] = d.warnings;
    if (!d.error.empty())
      x["error"] = d.error;
    ds.push_back(std::move(x));
  }
  j["datasets"] = std::move(ds);
  j["substructures"] = report.substructures;

  json cells = json::array();
  for (const CellResult &c: report.cells) {
    json x;
    x["dataset"] = c.dataset;
    x["source"] = c.source;
    x["layer"] = c.layer;
    x["task"] = c.task;
    x["level"] = task_level_name(c.level);
    x["kind"] = task_kind_name(c.kind);
    x["seed_index"] = c.seed_index;
    x["seed"] = c.seed;
    x["metric"] = c.metric;
    x["score"] = opt(c.score);
    x["loss"] = opt(c.loss);
    x["normalized_loss"] = opt(c.normalized_loss);
    x["auc"] = opt(c.auc);
    x["n_train"] = c.n_train;
    x["n_valid"] = c.n_valid;
    x["n_test"] = c.n_test;
    x["best_epoch"] = c.best_epoch;
    if (!c.error.empty())
      x["error"] = c.error;
    cells.push_back(std::move(x));
  }
  j["cells"] = std::move(cells);

  json sums = json::array();
  for (const TaskSummary &s: report.summaries) {
    json x;
    x["dataset"] = s.dataset;
    x["source"] = s.source;
    x["layer"] = s.layer;
    x["task"] = s.task;
    x["level"] = task_level_name(s.level);
    x["metric"] = s.metric;
    x["n"] = s.n;
    x["mean"] = opt(s.mean);
    x["std"] = opt(s.std);
    x["sample_std"] = opt(s.sample_std);
    x["normalized_mean"] = opt(s.normalized_mean);
    x["status"] = s.status;
    if (!s.error.empty())
      x["error"] = s.error;
    sums.push_back(std::move(x));
  }
  j["summary"] = std::move(sums);

  json ranks;
  json entries = json::array();
  for (const RankEntry &e: report.ranks.entries)
    entries.push_back({ { "dataset", e.dataset }, { "task", e.task },
                        { "layer", e.layer }, { "source", e.source },
                        { "score", e.score }, { "rank", e.rank } });
  ranks["entries"] = std::move(entries);
  json sources = json::array();
  for (const SourceRank &s: report.ranks.sources)
    sources.push_back({ { "source", s.source }, { "layer", s.layer },
                        { "tasks", s.tasks },
                        { "average_rank", s.average_rank },
                        { "reference", opt(s.reference) } });
  ranks["sources"] = std::move(sources);
  json corr = json::object();
  for (const auto &[layer, v]: report.ranks.rank_correlation)
    corr[std::to_string(layer)] = opt(v);
  ranks["rank_correlation"] = std::move(corr);
  j["ranks"] = std::move(ranks);

  json space = json::array();
  for (const SpaceResult &s: report.space) {
    json x;
    x["dataset"] = s.dataset;
    x["source"] = s.source;
    x["layer"] = s.layer;
    x["uniformity"] = opt(s.uniformity.value);
    x["uniformity_skipped_rows"] = s.uniformity.skipped;
    x["positive_pairs"] = s.positive_pairs;
    x["negative_pairs"] = s.negative_pairs;
    x["alignment"] = to_json(s.alignment);
    x["spectrum"] = to_json(s.spectrum);
    if (!s.error.empty())
      x["error"] = s.error;
    space.push_back(std::move(x));
  }
  j["space"] = std::move(space);

  if (report.cramers) {
    json cr = json::array();
    for (const SubstructureRank &r: report.cramers->ranking)
      cr.push_back({ { "substructure", r.name },
                     { "avg_task", opt(r.avg_task) },
                     { "avg_data", opt(r.avg_data) } });
    j["cramers_v"] = std::move(cr);
  }
  j["failures"] = report.failures();
  j["notes"] = report.notes;
  return j;
}

std::vector<std::string> emit_report(const ProbeReport &report,
                                     const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  Writer w(dir);

  if (!report.empty()) {
    w.write("report.json", to_json(report).dump(2) + "\n");

    std::ostringstream scores;
    scores << "dataset,source,layer,task,level,kind,seed_index,seed,metric,"
              "score,loss,normalized_loss,auc,n_train,n_valid,n_test,"
              "best_epoch,error\n";
    for (const CellResult &c: report.cells)
      scores << csv_field(c.dataset) << ',' << csv_field(c.source) << ','
             << layer_text(c.layer) << ',' << csv_field(c.task) << ','
             << task_level_name(c.level) << ',' << task_kind_name(c.kind)
             << ',' << c.seed_index << ',' << c.seed << ',' << c.metric << ','
             << opt_csv(c.score) << ',' << opt_csv(c.loss) << ','
             << opt_csv(c.normalized_loss) << ',' << opt_csv(c.auc) << ','
             << c.n_train << ',' << c.n_valid << ',' << c.n_test << ','
             << c.best_epoch << ',' << csv_field(c.error) << '\n';
    w.write("scores.csv", scores.str());

    std::ostringstream summary;
    summary << "dataset,source,layer,task,level,metric,n,mean,std,sample_std,"
               "normalized_mean,status\n";
    for (const TaskSummary &s: report.summaries)
      summary << csv_field(s.dataset) << ',' << csv_field(s.source) << ','
              << layer_text(s.layer) << ',' << csv_field(s.task) << ','
              << task_level_name(s.level) << ',' << s.metric << ',' << s.n
              << ',' << opt_csv(s.mean) << ',' << opt_csv(s.std) << ','
              << opt_csv(s.sample_std) << ',' << opt_csv(s.normalized_mean)
              << ',' << s.status << '\n';
    w.write("summary.csv", summary.str());

    std::ostringstream ranks;
    ranks << "dataset,task,layer,source,score,rank\n";
    for (const RankEntry &e: report.ranks.entries)
      ranks << csv_field(e.dataset) << ',' << csv_field(e.task) << ','
            << e.layer << ',' << csv_field(e.source) << ','
            << format_double(e.score) << ',' << format_double(e.rank) << '\n';
    w.write("ranks.csv", ranks.str());

    std::ostringstream avg;
    avg << "source,layer,tasks,average_rank,reference\n";
    for (const SourceRank &s: report.ranks.sources)
      avg << csv_field(s.source) << ',' << s.layer << ',' << s.tasks << ','
          << format_double(s.average_rank) << ',' << opt_csv(s.reference)
          << '\n';
    for (const auto &[layer, v]: report.ranks.rank_correlation)
      avg << "Rank Corr.," << layer << ",,," << opt_csv(v) << '\n';
    w.write("average_ranks.csv", avg.str());

    if (!report.space.empty()) {
      std::ostringstream space;
      space << "dataset,source,layer,uniformity,separation,positive_pairs,"
               "negative_pairs,skipped_pairs,sigma_above_threshold,"
               "effective_rank,collapsed,error\n";
      for (const SpaceResult &s: report.space)
        space << csv_field(s.dataset) << ',' << csv_field(s.source) << ','
              << s.layer << ',' << opt_csv(s.uniformity.value) << ','
              << opt_csv(s.alignment.separation) << ',' << s.positive_pairs
              << ',' << s.negative_pairs << ',' << s.alignment.skipped << ','
              << s.spectrum.above_threshold << ','
              << format_double(s.spectrum.effective_rank) << ','
              << (s.spectrum.collapsed ? 1 : 0) << ',' << csv_field(s.error)
              << '\n';
      w.write("space.csv", space.str());

      // Datasets as rows, one column per (source, layer).
      std::vector<std::pair<std::string, int>> columns;
      std::vector<std::string> rows;
      std::map<std::tuple<std::string, std::string, int>, std::optional<double>>
          value;
      for (const SpaceResult &s: report.space) {
        auto col = std::make_pair(s.source, s.layer);
        if (std::find(columns.begin(), columns.end(), col) == columns.end())
          columns.push_back(col);
        if (std::find(rows.begin(), rows.end(), s.dataset) == rows.end())
          rows.push_back(s.dataset);
        value[{ s.dataset, s.source, s.layer }] = s.uniformity.value;
      }
      std::ostringstream uni;
      uni << "dataset";
      for (const auto &[src, layer]: columns)
        uni << ',' << csv_field(fmt::format("{}@L{}", src, layer));
      uni << '\n';
      for (const std::string &r: rows) {
        uni << csv_field(r);
        for (const auto &[src, layer]: columns) {
          auto it = value.find({ r, src, layer });
          uni << ',' << (it == value.end() ? "" : opt_csv(it->second));
        }
        uni << '\n';
      }
      w.write("uniformity.csv", uni.str());

      for (const SpaceResult &s: report.space) {
        if (!s.error.empty())
          continue;
        const std::string stem = fmt::format(
            "{}_{}_L{}", safe_name(s.dataset), safe_name(s.source), s.layer);
        std::ostringstream spec;
        spec << "index,sigma,log_sigma\n";
        for (std::size_t i = 0; i < s.spectrum.singular_values.size(); ++i) {
          const double lg = s.spectrum.log_values[i];
          spec << i << ',' << format_double(s.spectrum.singular_values[i])
               << ',' << (std::isfinite(lg) ? format_double(lg) : "-inf")
               << '\n';
        }
        w.write("spectrum/" + stem + ".csv", spec.str());
        w.write("alignment/" + stem + ".json",
                to_json(s.alignment).dump(2) + "\n");
      }
    }

    if (report.cramers) {
      std::ostringstream cr;
      write_cramers_csv(cr, *report.cramers);
      w.write("cramers.csv", cr.str());
    }
  }

  nlohmann::ordered_json manifest;
  manifest["format"] = "molprobe-manifest";
  manifest["schema_version"] = 1;
  manifest["toolkit_version"] = MOLPROBE_VERSION;
  manifest["config_hash"] = fmt::format("{:016x}", report.config_hash);
  manifest["seeds"] = report.seeds;
  manifest["failures"] = report.failures();
  std::vector<std::string> files = w.files();
  manifest["files"] = files;
  w.write("manifest.json", manifest.dump(2) + "\n");
  return w.files();
}

}  // namespace molprobe
