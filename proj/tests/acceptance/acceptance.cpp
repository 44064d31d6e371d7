//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Runs every acceptance criterion and prints one PASS/FAIL line each. Exit
// status is the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "molprobe/core/random.h"
#include "molprobe/embedspace/embedspace.h"
#include "molprobe/encoder/gin.h"
#include "molprobe/graphstats/graphstats.h"
#include "molprobe/metrics/metrics.h"
#include "molprobe/molgraph/hash.h"
#include "molprobe/molgraph/smiles.h"
#include "molprobe/pipeline/config.h"
#include "molprobe/pipeline/split.h"
#include "molprobe/pipeline/suite.h"
#include "molprobe/probe/probe.h"
#include "molprobe/substructure/cramers.h"
#include "molprobe/substructure/registry.h"
#include "support/generators.h"
#include "support/gradcheck.h"
#include "support/oracles.h"

namespace fs = std::filesystem;

namespace molprobe {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects mismatches; the first few are kept for the report line.
class Tally {
public:
  void check(bool ok, const std::string &what) {
    ++checks_;
    if (ok)
      return;
    ++failures_;
    if (examples_.size() < 3)
      examples_.push_back(what);
  }
  void near(double got, double want, double tol, const std::string &what) {
    check(std::abs(got - want) <= tol,
          fmt::format("{}: {} vs {}", what, got, want));
  }

  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    std::string s = fmt::format("{} checks, {} mismatches", checks_, failures_);
    for (const auto &e: examples_)
      s += "; " + e;
    return s;
  }

private:
  long checks_ = 0, failures_ = 0;
  std::vector<std::string> examples_;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<std::string> random_smiles(std::uint64_t seed, int n,
                                       int max_atoms) {
  Rng rng(seed);
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i)
    out.push_back(testing::random_molecule_smiles(rng, max_atoms));
  return out;
}

// ------------------------------------------------------------- topology

int component_count(const MolecularGraph &g) {
  std::vector<int> parent(g.num_atoms());
  for (int i = 0; i < g.num_atoms(); ++i)
    parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  int c = g.num_atoms();
  for (const Bond &b: g.bonds()) {
    int a = find(b.begin), z = find(b.end);
    if (a != z) {
      parent[a] = z;
      --c;
    }
  }
  return c;
}

Outcome topology_oracles() {
  const auto t0 = Clock::now();
  Tally t;
  const auto corpus = testing::topology_oracle_corpus();
  for (const MolecularGraph &g: corpus) {
    const int n = g.num_atoms();
    const std::string tag = write_smiles(g);

    std::vector<int> deg = node_degree(g);
    for (int u = 0; u < n; ++u) {
      int d = 0;
      for (int v = 0; v < n; ++v)
        d += v != u && g.adjacent(u, v);
      t.check(deg[u] == d, "degree " + tag);
    }
    std::vector<double> e = eigenvector_centrality(g);
    std::vector<double> dense = testing::dense_centrality(g);
    for (int u = 0; u < n; ++u)
      t.near(e[u], dense[u], 1e-8, "centrality " + tag);
    std::vector<double> c = clustering_coefficient(g);
    for (int u = 0; u < n; ++u)
      t.near(c[u], testing::brute_force_clustering(g, u), 1e-8,
             "clustering " + tag);

    t.check(diameter(g) == testing::floyd_diameter(g), "diameter " + tag);
    t.check(cycle_count(g) == g.num_bonds() - n + component_count(g),
            "cycle_count " + tag);
    if (n >= 2)
      t.check(connectivity(g) == testing::brute_force_connectivity(g),
              "connectivity " + tag);
    auto r = assortativity(g), ro = testing::brute_force_assortativity(g);
    t.check(r.has_value() == ro.has_value(), "assortativity defined " + tag);
    if (r && ro)
      t.near(*r, *ro, 1e-8, "assortativity " + tag);

    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v)
          continue;
        t.check(link_label(g, u, v) == (g.adjacent(u, v) ? 1 : 0),
                "link " + tag);
        t.near(jaccard(g, u, v), testing::brute_force_jaccard(g, u, v), 1e-8,
               "jaccard " + tag);
        if (n <= 7) {
          for (int length = 0; length <= 4; ++length)
            t.near(katz_truncated(g, u, v, length),
                   testing::brute_force_katz(g, u, v, length, 1.0), 1e-8,
                   "katz " + tag);
          t.near(katz_truncated(g, u, v, 3, 0.5),
                 testing::brute_force_katz(g, u, v, 3, 0.5), 1e-8,
                 "katz beta " + tag);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  t.check(secs < 30, fmt::format("runtime {:.1f}s", secs));
  return { t.ok(), fmt::format("{} graphs, {:.1f}s, {}", corpus.size(), secs,
                               t.summary()) };
}

// -------------------------------------------------------- substructures

Outcome substructure_oracles() {
  const auto t0 = Clock::now();
  const SubstructureRegistry &reg = SubstructureRegistry::builtin();
  Tally t;
  Rng rng(99);
  int molecules = 0, hits = 0;
  while (molecules < 100) {
    MolecularGraph g = parse_smiles(testing::random_molecule_smiles(rng, 12));
    if (g.num_atoms() > 12)
      continue;
    ++molecules;
    for (int i = 0; i < reg.size(); ++i) {
      const int n = reg.count(g, i);
      hits += n > 0;
      t.check(n == testing::enumerate_embeddings(g, reg.entry(i).pattern),
              reg.entry(i).name + " in " + write_smiles(g));
    }
  }
  int references = 0;
  for (int i = 0; i < reg.size(); ++i) {
    const SubstructureEntry &e = reg.entry(i);
    t.check(!e.positives.empty() && !e.negatives.empty(),
            e.name + " lacks references");
    for (const auto &s: e.positives) {
      ++references;
      t.check(reg.count(parse_smiles(s), i) > 0, e.name + " misses " + s);
    }
    for (const auto &s: e.negatives) {
      ++references;
      t.check(reg.count(parse_smiles(s), i) == 0, e.name + " matches " + s);
    }
  }
  const double secs = seconds_since(t0);
  t.check(secs < 60, fmt::format("runtime {:.1f}s", secs));
  return { t.ok(),
           fmt::format("{} molecules x {} patterns ({} nonzero), {} "
                       "reference molecules, {:.1f}s, {}",
                       molecules, reg.size(), hits, references, secs,
                       t.summary()) };
}

// ------------------------------------------------------------ gradients

Outcome gradients() {
  Rng rng(2);
  double worst = 0;
  int cases = 0, failed = 0;
  std::string first;
  for (TaskKind task: { TaskKind::kRegression, TaskKind::kBinary,
                        TaskKind::kMulticlass }) {
    for (int hidden = 0; hidden <= 3; ++hidden) {
      for (int width: { 100, 600, 1200 }) {
        if (hidden == 0 && width != 100)
          continue;
        auto gc = testing::gradient_case(task, hidden, width, rng);
        auto r = testing::check_gradients(gc.model, gc.x, gc.y, rng);
        ++cases;
        worst = std::max(worst, r.worst);
        if (!r.passed(1e-5)) {
          ++failed;
          if (first.empty())
            first = fmt::format("; first failure {} depth {} width {}: "
                                "err {:.2e}, skipped {}/{}",
                                task_kind_name(task), hidden, width, r.worst,
                                r.skipped, r.total);
        }
      }
    }
  }
  return { failed == 0,
           fmt::format("{} cases (depth 0-3, MSE and cross-entropy), worst "
                       "relative error {:.2e}{}",
                       cases, worst, first) };
}

// --------------------------------------------------- synthetic datasets

// 1000 random molecules; `active` marks a nitrogen-bearing molecule.
fs::path write_dataset(const fs::path &dir, int n, std::uint64_t seed) {
  fs::create_directories(dir);
  fs::path p = dir / "synthetic.csv";
  std::ofstream f(p);
  f << "smiles,active\n";
  for (const auto &s: random_smiles(seed, n, 30)) {
    const bool n_atom = s.find('N') != std::string::npos
                        || s.find('n') != std::string::npos;
    f << s << ',' << (n_atom ? 1 : 0) << '\n';
  }
  return p;
}

KeyValueConfig suite_config(const fs::path &data, const fs::path &out,
                            const std::string &tasks, int seeds, bool space) {
  KeyValueConfig kv;
  kv.set("dataset", data.string());
  kv.set("source.random", "random layers=5 dim=300 seed=0");
  kv.set("tasks", tasks);
  kv.set("seeds", std::to_string(seeds));
  kv.set("probe.width", "100");
  kv.set("space", space ? "true" : "false");
  kv.set("out", out.string());
  return kv;
}

const CellResult *find_cell(const ProbeReport &r, std::string_view task) {
  for (const auto &c: r.cells)
    if (c.task == task && c.layer >= 0)
      return &c;
  return nullptr;
}

// --------------------------------------------------------- probe sanity

Outcome probe_sanity(const fs::path &work) {
  const auto t0 = Clock::now();
  fs::path data = write_dataset(work / "c4", 1000, 4);
  SuiteConfig cfg =
      SuiteConfig::from(suite_config(data, work / "c4" / "out",
                                     "degree,diameter", 1, false));
  ProbeReport r = run_suite(cfg);
  const CellResult *deg = find_cell(r, "degree");
  const CellResult *dia = find_cell(r, "diameter");
  if (!deg || !dia || !deg->error.empty() || !dia->error.empty())
    return { false, "suite did not produce both cells" };
  const double secs = seconds_since(t0);
  const bool ok = deg->loss && *deg->loss < 0.1 && deg->normalized_loss
                  && dia->normalized_loss
                  && *deg->normalized_loss < *dia->normalized_loss
                  && secs < 600;
  return { ok,
           fmt::format("degree CE {:.4g} (normalized {:.4g}) vs diameter "
                       "normalized {:.4g}, {} train rows, {:.0f}s",
                       deg->loss.value_or(NAN),
                       deg->normalized_loss.value_or(NAN),
                       dia->normalized_loss.value_or(NAN), deg->n_train,
                       secs) };
}

// --------------------------------------------------- layer localization

using Target = std::function<double(const MolecularGraph &, int)>;

struct Split3 {
  ProbeData part[3];
};

Split3 gather(const EmbeddingMatrix &m, const std::vector<MolecularGraph> &mols,
              const SplitAssignment &split, const Target &target) {
  std::vector<int> rows[3];
  std::vector<double> ys[3];
  for (int r = 0; r < m.rows(); ++r) {
    const int mol = m.index[r].molecule;
    const int s = static_cast<int>(split.tags[mol]);
    rows[s].push_back(r);
    ys[s].push_back(target(mols[mol], m.index[r].atom));
  }
  Split3 out;
  for (int s = 0; s < 3; ++s) {
    ProbeData &d = out.part[s];
    d.features.resize(static_cast<Eigen::Index>(rows[s].size()), m.dim());
    d.targets.resize(static_cast<Eigen::Index>(rows[s].size()));
    for (std::size_t i = 0; i < rows[s].size(); ++i) {
      d.features.row(static_cast<Eigen::Index>(i)) = m.values.row(rows[s][i]);
      d.targets[static_cast<Eigen::Index>(i)] = ys[s][i];
    }
  }
  return out;
}

// Test MSE over the MSE of predicting the training mean.
double normalized_mse(const Split3 &d, std::uint64_t seed) {
  ProbeConfig pc;
  pc.width = 100;
  pc.seed = seed;
  TrainResult tr = train_probe(pc, d.part[0], d.part[1]);
  const double loss = evaluate_probe(tr.model, d.part[2]).loss;
  const double mean = d.part[0].targets.mean();
  const double base =
      (d.part[2].targets.array() - mean).square().mean();
  return loss / base;
}

Outcome layer_localization() {
  const auto t0 = Clock::now();
  std::vector<MolecularGraph> mols;
  for (const auto &s: random_smiles(5, 1000, 30))
    mols.push_back(parse_smiles(s));
  SplitAssignment split = scaffold_split(mols);

  Target hetero = [](const MolecularGraph &g, int atom) {
    int c = 0;
    for (const Neighbor &nb: g.neighbors(atom))
      c += g.atom(nb.atom).atomic_number != 6;
    return static_cast<double>(c);
  };
  Target diam = [](const MolecularGraph &g, int) {
    return static_cast<double>(diameter(g));
  };

  const int layers = 5;
  const std::vector<int> keep { 1, layers };
  double local[2] = { 0, 0 }, global[2] = { 0, 0 };
  std::string per_seed;
  for (int seed = 0; seed < 3; ++seed) {
    EncoderConfig ec;
    ec.layers = layers;
    ec.seed = static_cast<std::uint64_t>(seed);
    GinEncoder enc(ec);
    DatasetEmbeddings emb = encode_dataset(enc, mols, 1, keep);
    double l[2], g[2];
    for (int k = 0; k < 2; ++k) {
      l[k] = normalized_mse(gather(emb.node_layers[k], mols, split, hetero),
                            static_cast<std::uint64_t>(seed));
      g[k] = normalized_mse(gather(emb.graph_layers[k], mols, split, diam),
                            static_cast<std::uint64_t>(seed));
      local[k] += l[k] / 3;
      global[k] += g[k] / 3;
    }
    per_seed += fmt::format("; seed {}: local {:.3f}/{:.3f} diameter "
                            "{:.3f}/{:.3f}",
                            seed, l[0], l[1], g[0], g[1]);
  }
  const bool ok = local[0] < local[1] && global[1] < global[0];
  return { ok, fmt::format("mean normalized MSE, layer 1 vs {}: hetero "
                           "neighbours {:.3f} vs {:.3f}, diameter {:.3f} vs "
                           "{:.3f}, {:.0f}s{}",
                           layers, local[0], local[1], global[0], global[1],
                           seconds_since(t0), per_seed) };
}

// ------------------------------------------------------- space identities

Outcome space_identities() {
  Tally t;
  Eigen::MatrixXd same(4, 3);
  same.rowwise() = Eigen::RowVector3d(0.3, -1.2, 2.0);
  auto u = uniformity(same, 2.0);
  t.check(u.value.has_value() && *u.value == 0.0,
          fmt::format("identical rows: {}", u.value.value_or(NAN)));

  Eigen::MatrixXd ortho = Eigen::MatrixXd::Zero(2, 5);
  ortho(0, 1) = 1;
  ortho(1, 3) = 1;
  auto o = uniformity(ortho, 2.0);
  t.check(o.value.has_value(), "orthogonal rows undefined");
  if (o.value)
    t.near(*o.value, -4.0, 1e-9, "orthogonal rows");

  Eigen::VectorXd a(6), b(4);
  a << 1, -2, 0.5, 3, 0, 1;
  b << 2, 1, -1, 0.25;
  SpectrumReport s = spectrum(a * b.transpose());
  t.check(s.above_threshold == 1,
          fmt::format("rank-1: {} values above threshold", s.above_threshold));
  t.check(s.collapsed, "rank-1 not flagged as collapsed");

  std::vector<double> scores(6, 0.7);
  std::vector<int> labels { 1, 0, 1, 0, 0, 1 };
  auto auc = roc_auc(scores, labels);
  t.check(auc.has_value() && *auc == 0.5,
          fmt::format("tied AUC {}", auc.value_or(NAN)));
  return { t.ok(), t.summary() };
}

// ------------------------------------------------------------ Cramer's V

Outcome cramers() {
  Tally t;
  auto one = cramers_v(ContingencyTable({ { 5, 0 }, { 0, 5 } }));
  auto zero = cramers_v(ContingencyTable({ { 2, 2 }, { 2, 2 } }));
  t.check(one.has_value() && zero.has_value(), "undefined V");
  if (one)
    t.near(*one, 1.0, 1e-12, "[[5,0],[0,5]]");
  if (zero)
    t.near(*zero, 0.0, 1e-12, "[[2,2],[2,2]]");

  const SubstructureRegistry &reg = SubstructureRegistry::builtin();
  const int bz = *reg.index_of("benzene");
  SubstructureDataset ds;
  ds.name = "benzene";
  auto smiles = random_smiles(7, 400, 20);
  ds.labels = LabelMatrix(static_cast<int>(smiles.size()), 1);
  int positives = 0;
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    ds.counts.push_back(reg.count_all(parse_smiles(smiles[i])));
    const bool has = ds.counts.back()[bz] > 0;
    positives += has;
    ds.labels(static_cast<int>(i), 0) =
        has ? Label::kPositive : Label::kNegative;
  }
  std::vector<SubstructureDataset> sets { ds };
  RankTable table = rank_substructures(reg, sets);
  t.check(positives > 0 && positives < static_cast<int>(smiles.size()),
          "label has one class");
  t.check(table.ranking.at(0).name == "benzene",
          "first is " + table.ranking.at(0).name);
  return { t.ok(),
           fmt::format("{} molecules, {} with benzene, top {} (V {:.3f}); {}",
                       smiles.size(), positives, table.ranking.at(0).name,
                       table.ranking.at(0).avg_task.value_or(NAN),
                       t.summary()) };
}

// ------------------------------------------------------- split integrity

Outcome split_integrity() {
  Tally t;
  Rng rng(88);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(60));
    std::vector<MolecularGraph> mols;
    for (int i = 0; i < n; ++i)
      mols.push_back(parse_smiles(testing::random_molecule_smiles(rng, 20)));
    // a spread of requested fractions, including the usual one
    std::array<double, 3> f { 0.8, 0.1, 0.1 };
    if (trial % 2 == 1) {
      f[0] = rng.uniform(0.3, 0.9);
      f[1] = rng.uniform(0.0, 1.0 - f[0]);
      f[2] = 1.0 - f[0] - f[1];
    }
    const std::uint64_t seed = rng.below(1000);
    SplitAssignment s = scaffold_split(mols, f, seed);

    std::map<std::uint64_t, std::set<SplitTag>> tags;
    std::map<std::uint64_t, int> size;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t key =
          canonical_hash(bemis_murcko_scaffold(mols[i]));
      tags[key].insert(s.tags[i]);
      ++size[key];
    }
    int largest = 0;
    for (const auto &[key, set]: tags) {
      t.check(set.size() == 1, fmt::format("trial {}: scaffold spans splits",
                                           trial));
      largest = std::max(largest, size[key]);
    }
    int counts[3] = { 0, 0, 0 };
    for (SplitTag tag: s.tags)
      ++counts[static_cast<int>(tag)];
    const double bound = static_cast<double>(largest) / n + 1e-12;
    for (int k = 0; k < 3; ++k)
      t.check(std::abs(static_cast<double>(counts[k]) / n - f[k]) <= bound,
              fmt::format("trial {} split {}: {} of {} vs {:.3f}", trial, k,
                          counts[k], n, f[k]));

    std::ostringstream a, b;
    write_split_csv(a, s);
    write_split_csv(b, scaffold_split(mols, f, seed));
    t.check(a.str() == b.str(), fmt::format("trial {}: not reproducible",
                                            trial));
  }
  return { t.ok(), "500 datasets; " + t.summary() };
}

// ------------------------------------------------------------ determinism

std::map<std::string, std::string> read_csvs(const fs::path &dir) {
  std::map<std::string, std::string> out;
  for (const auto &e: fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".csv")
      continue;
    std::ifstream f(e.path(), std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    out[fs::relative(e.path(), dir).string()] = buf.str();
  }
  return out;
}

Outcome determinism(const fs::path &work) {
  fs::path data = write_dataset(work / "c9", 1000, 9);
  const std::string tasks = "degree,jaccard,diameter,sub:benzene,labels";
  double runtime[2];
  std::map<std::string, std::string> files[2];
  int cells = 0, failures = 0;
  for (int run = 0; run < 2; ++run) {
    const auto t0 = Clock::now();
    fs::path out = work / "c9" / fmt::format("run{}", run);
    fs::remove_all(out);
    KeyValueConfig kv = suite_config(data, out, tasks, 3, true);
    kv.set("substructures", "benzene");
    SuiteConfig cfg = SuiteConfig::from(kv);
    ProbeReport r = run_suite(cfg);
    emit_report(r, out);
    runtime[run] = seconds_since(t0);
    files[run] = read_csvs(out);
    cells = static_cast<int>(r.cells.size());
    failures = r.failures();
  }
  bool same = files[0] == files[1];
  std::string diff;
  for (const auto &[name, text]: files[0])
    if (files[1].count(name) == 0 || files[1].at(name) != text)
      diff += " " + name;
  const bool ok = same && !files[0].empty() && failures == 0
                  && std::max(runtime[0], runtime[1]) < 900;
  return { ok, fmt::format("{} CSV files {}, {} cells, {} failures, runs "
                           "{:.0f}s and {:.0f}s{}",
                           files[0].size(),
                           same ? "byte-identical" : "differ:" + diff, cells,
                           failures, runtime[0], runtime[1],
                           ok ? "" : " (limit 900s)") };
}

struct Criterion {
  int id;
  const char *name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace molprobe

int main(int argc, char **argv) {
  using namespace molprobe;
  CLI::App app("MolProbe acceptance checks");
  std::vector<int> only;
  std::string work = (fs::temp_directory_path() / "molprobe-acceptance")
                         .string();
  app.add_option("--only", only, "criteria to run (default: all)")
      ->check(CLI::Range(1, 9));
  app.add_option("--work", work, "scratch directory");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::err);

  const fs::path dir = work;
  std::vector<Criterion> all = {
    { 1, "topology oracles", [] { return topology_oracles(); } },
    { 2, "substructure oracles", [] { return substructure_oracles(); } },
    { 3, "probe gradients", [] { return gradients(); } },
    { 4, "probe sanity", [&] { return probe_sanity(dir); } },
    { 5, "layer localization", [] { return layer_localization(); } },
    { 6, "embedding-space identities", [] { return space_identities(); } },
    { 7, "Cramer's V", [] { return cramers(); } },
    { 8, "split integrity", [] { return split_integrity(); } },
    { 9, "end-to-end determinism", [&] { return determinism(dir); } },
  };

  int failed = 0;
  for (const Criterion &c: all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
      continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = { false, std::string("exception: ") + e.what() };
    }
    failed += !o.pass;
    fmt::print("criterion {} {}: {} ({})\n", c.id, o.pass ? "PASS" : "FAIL",
               c.name, o.detail);
    std::fflush(stdout);
  }
  return failed;
}
