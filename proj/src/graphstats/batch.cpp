//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/graphstats/batch.h"

#include <fstream>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "molprobe/core/format.h"
#include "molprobe/core/histogram.h"
#include "molprobe/core/parallel.h"

namespace molprobe {

namespace {

struct MoleculeStats {
  std::vector<int> degree;
  std::optional<std::vector<double>> centrality;
  std::vector<double> clustering;
  std::vector<int> link;
  std::vector<double> jaccard, katz;  // row-major over u < v
  int diameter = 0;
  int cycle_count = 0;
  std::optional<int> connectivity;
  std::optional<double> assortativity;
};

MoleculeStats compute(const MolecularGraph &g, const BatchOptions &options) {
  MoleculeStats s;
  const int n = g.num_atoms();
  s.degree = node_degree(g);
  try {
    s.centrality = eigenvector_centrality(g, options.centrality);
  } catch (const CentralityError &) {
  }
  s.clustering = clustering_coefficient(g);

  const int length = options.katz_length < 0 ? n : options.katz_length;
  for (int u = 0; u < n; ++u) {
    std::vector<double> row = katz_row(g, u, length, options.katz_beta);
    for (int v = u + 1; v < n; ++v) {
      s.link.push_back(link_label(g, u, v));
      s.jaccard.push_back(jaccard(g, u, v));
      s.katz.push_back(row[v]);
    }
  }

  GraphStats gs = compute_graph_stats(g);
  s.diameter = gs.diameter;
  s.cycle_count = gs.cycle_count;
  s.connectivity = gs.connectivity;
  s.assortativity = gs.assortativity;
  return s;
}

class MetricWriter {
public:
  MetricWriter(const std::filesystem::path &path, const char *header)
      : out_(path, std::ios::binary) {
    if (!out_)
      throw std::runtime_error("cannot write " + path.string());
    out_ << header << '\n';
  }

  std::ofstream &stream() { return out_; }

  void add(double value) { values_.push_back(value); }
  const std::vector<double> &values() const { return values_; }

private:
  std::ofstream out_;
  std::vector<double> values_;
};

}  // namespace

BatchSummary write_batch_stats(std::span<const MolecularGraph> molecules,
                               const std::filesystem::path &dir,
                               const BatchOptions &options) {
  std::filesystem::create_directories(dir);
  std::vector<MoleculeStats> stats(molecules.size());
  parallel_for(molecules.size(), options.jobs, [&](std::size_t i) {
    stats[i] = compute(molecules[i], options);
  });

  BatchSummary summary;
  summary.molecules = static_cast<int>(molecules.size());
  for (const char *name: { "centrality", "connectivity", "assortativity" })
    summary.skipped[name] = 0;

  const char *node_header = "molecule_index,node_index,value";
  const char *pair_header = "molecule_index,node_u,node_v,value";
  const char *graph_header = "molecule_index,value";
  std::vector<std::pair<std::string, MetricWriter>> writers;
  writers.reserve(10);
  for (const char *name: { "degree", "centrality", "clustering" })
    writers.emplace_back(name, MetricWriter(dir / (std::string(name) + ".csv"),
                                            node_header));
  for (const char *name: { "link", "jaccard", "katz" })
    writers.emplace_back(name, MetricWriter(dir / (std::string(name) + ".csv"),
                                            pair_header));
  for (const char *name:
       { "diameter", "cycle_count", "connectivity", "assortativity" })
    writers.emplace_back(name, MetricWriter(dir / (std::string(name) + ".csv"),
                                            graph_header));
  auto &degree = writers[0].second, &centrality = writers[1].second,
       &clustering = writers[2].second, &link = writers[3].second,
       &jac = writers[4].second, &katz = writers[5].second,
       &diam = writers[6].second, &cycles = writers[7].second,
       &conn = writers[8].second, &assort = writers[9].second;

  auto node_row = [](MetricWriter &w, std::size_t m, int u, double value) {
    w.stream() << m << ',' << u << ',' << format_double(value) << '\n';
    w.add(value);
  };
  auto pair_row = [](MetricWriter &w, std::size_t m, int u, int v,
                     double value) {
    w.stream() << m << ',' << u << ',' << v << ',' << format_double(value)
               << '\n';
    w.add(value);
  };
  auto graph_row = [](MetricWriter &w, std::size_t m, double value) {
    w.stream() << m << ',' << format_double(value) << '\n';
    w.add(value);
  };

  for (std::size_t m = 0; m < stats.size(); ++m) {
    const MoleculeStats &s = stats[m];
    const int n = static_cast<int>(s.degree.size());
    for (int u = 0; u < n; ++u) {
      node_row(degree, m, u, s.degree[u]);
      if (s.centrality)
        node_row(centrality, m, u, (*s.centrality)[u]);
      node_row(clustering, m, u, s.clustering[u]);
    }
    if (!s.centrality)
      ++summary.skipped["centrality"];

    std::size_t k = 0;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v, ++k) {
        pair_row(link, m, u, v, s.link[k]);
        pair_row(jac, m, u, v, s.jaccard[k]);
        pair_row(katz, m, u, v, s.katz[k]);
      }
    }

    graph_row(diam, m, s.diameter);
    graph_row(cycles, m, s.cycle_count);
    if (s.connectivity)
      graph_row(conn, m, *s.connectivity);
    else
      ++summary.skipped["connectivity"];
    if (s.assortativity)
      graph_row(assort, m, *s.assortativity);
    else
      ++summary.skipped["assortativity"];
  }

  nlohmann::ordered_json hist;
  for (auto &[name, writer]: writers) {
    nlohmann::ordered_json entry =
        to_json(make_histogram(writer.values(), options.histogram_bins));
    auto it = summary.skipped.find(name);
    entry["skipped"] = it == summary.skipped.end() ? 0 : it->second;
    hist[name] = std::move(entry);
  }
  std::ofstream out(dir / "histograms.json", std::ios::binary);
  out << hist.dump(2) << '\n';
  return summary;
}

}  // namespace molprobe
