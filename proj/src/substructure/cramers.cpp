//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/substructure/cramers.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace molprobe {

namespace {

std::optional<double> mean_of_defined(
    const std::vector<std::optional<double>> &values) {
  double sum = 0;
  int n = 0;
  for (const auto &v: values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0)
    return std::nullopt;
  return sum / n;
}

std::string cell(const std::optional<double> &v) {
  return v ? fmt::format("{:.4f}", *v) : std::string("-");
}

}  // namespace

ContingencyTable::ContingencyTable(int rows, int cols)
    : cells_(rows, std::vector<std::int64_t>(cols, 0)), cols_(cols) { }

ContingencyTable::ContingencyTable(
    std::vector<std::vector<std::int64_t>> cells)
    : cells_(std::move(cells)),
      cols_(cells_.empty() ? 0 : static_cast<int>(cells_[0].size())) {
  for (const auto &row: cells_) {
    if (static_cast<int>(row.size()) != cols_)
      throw std::invalid_argument("contingency table rows differ in length");
    for (std::int64_t v: row)
      if (v < 0)
        throw std::invalid_argument("negative contingency cell");
  }
}

std::int64_t ContingencyTable::row_total(int r) const {
  std::int64_t s = 0;
  for (std::int64_t v: cells_[r])
    s += v;
  return s;
}

std::int64_t ContingencyTable::col_total(int c) const {
  std::int64_t s = 0;
  for (const auto &row: cells_)
    s += row[c];
  return s;
}

std::int64_t ContingencyTable::total() const {
  std::int64_t s = 0;
  for (int r = 0; r < rows(); ++r)
    s += row_total(r);
  return s;
}

double ContingencyTable::chi_squared() const {
  const double n = static_cast<double>(total());
  if (n == 0)
    return 0.0;
  std::vector<double> rt(rows()), ct(cols());
  for (int r = 0; r < rows(); ++r)
    rt[r] = static_cast<double>(row_total(r));
  for (int c = 0; c < cols(); ++c)
    ct[c] = static_cast<double>(col_total(c));
  double chi = 0.0;
  for (int r = 0; r < rows(); ++r) {
    if (rt[r] == 0)
      continue;
    for (int c = 0; c < cols(); ++c) {
      if (ct[c] == 0)
        continue;
      const double expected = rt[r] * ct[c] / n;
      const double d = cells_[r][c] - expected;
      chi += d * d / expected;
    }
  }
  return chi;
}

ContingencyTable count_table(std::span<const int> counts,
                             std::span<const Label> labels, int cap) {
  if (counts.size() != labels.size())
    throw std::invalid_argument("counts and labels differ in length");
  if (cap < 1)
    throw std::invalid_argument("count cap must be positive");
  ContingencyTable t(cap + 1, 2);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (labels[i] == Label::kMissing)
      continue;
    const int row = std::clamp(counts[i], 0, cap);
    ++t(row, labels[i] == Label::kPositive ? 1 : 0);
  }
  return t;
}

std::optional<double> cramers_v(const ContingencyTable &table) {
  int k = 0, r = 0;
  for (int i = 0; i < table.rows(); ++i)
    k += table.row_total(i) > 0;
  for (int j = 0; j < table.cols(); ++j)
    r += table.col_total(j) > 0;
  if (k < 2 || r < 2)
    return std::nullopt;
  const double n = static_cast<double>(table.total());
  const double v = std::sqrt(table.chi_squared() / (n * (std::min(k, r) - 1)));
  return std::min(v, 1.0);
}

std::optional<double> cramers_v_binary(const ContingencyTable &table) {
  if (table.cols() != 2)
    throw std::invalid_argument("binary Cramer's V needs two columns");
  return cramers_v(table).has_value()
             ? std::optional<double>(std::min(
                   1.0, std::sqrt(table.chi_squared() / table.total())))
             : std::nullopt;
}

std::vector<std::string> RankTable::top(int k) const {
  std::vector<std::string> out;
  for (int i = 0; i < k && i < static_cast<int>(ranking.size()); ++i)
    out.push_back(ranking[i].name);
  return out;
}

RankTable rank_substructures(const SubstructureRegistry &registry,
                             std::span<const SubstructureDataset> datasets,
                             RankBy by, int cap) {
  const int s = registry.size();
  RankTable table;
  std::vector<std::vector<std::optional<double>>> pooled(s);
  std::vector<SubstructureRank> ranks(s);
  for (int i = 0; i < s; ++i)
    ranks[i].name = registry.entry(i).name;

  for (const SubstructureDataset &ds: datasets) {
    const int m = static_cast<int>(ds.counts.size());
    if (ds.labels.rows() != m)
      throw std::invalid_argument("dataset " + ds.name
                                  + ": labels and counts differ in rows");
    table.datasets.push_back(ds.name);
    table.molecules.push_back(m);
    auto &tasks = table.task_values.emplace_back();
    std::vector<std::vector<std::optional<double>>> per_sub(s);
    int used_tasks = 0;
    for (int t = 0; t < ds.labels.cols(); ++t) {
      std::vector<Label> col(m);
      bool any = false;
      for (int r = 0; r < m; ++r) {
        col[r] = ds.labels(r, t);
        any = any || col[r] != Label::kMissing;
      }
      if (!any)
        continue;
      ++used_tasks;
      auto &values = tasks.emplace_back(s);
      std::vector<int> counts(m);
      for (int i = 0; i < s; ++i) {
        for (int r = 0; r < m; ++r)
          counts[r] = ds.counts[r].at(i);
        values[i] = cramers_v(count_table(counts, col, cap));
        per_sub[i].push_back(values[i]);
        pooled[i].push_back(values[i]);
      }
    }
    table.tasks.push_back(used_tasks);
    for (int i = 0; i < s; ++i)
      ranks[i].per_dataset.push_back(mean_of_defined(per_sub[i]));
  }

  for (int i = 0; i < s; ++i) {
    ranks[i].avg_task = mean_of_defined(pooled[i]);
    ranks[i].avg_data = mean_of_defined(ranks[i].per_dataset);
  }
  auto key = [by](const SubstructureRank &r) {
    return by == RankBy::kTask ? r.avg_task : r.avg_data;
  };
  std::stable_sort(ranks.begin(), ranks.end(),
                   [&](const SubstructureRank &a, const SubstructureRank &b) {
    auto ka = key(a), kb = key(b);
    if (ka.has_value() != kb.has_value())
      return ka.has_value();
    if (ka && *ka != *kb)
      return *ka > *kb;
    return a.name < b.name;
  });
  table.ranking = std::move(ranks);
  return table;
}

void write_cramers_csv(std::ostream &out, const RankTable &table) {
  out << "substructure";
  for (const auto &d: table.datasets)
    out << ',' << d;
  out << ",avg_task,avg_data\n";
  out << "n_molecules";
  for (int m: table.molecules)
    out << ',' << m;
  out << ",-,-\n";
  out << "n_tasks";
  for (int t: table.tasks)
    out << ',' << t;
  out << ",-,-\n";
  for (const SubstructureRank &r: table.ranking) {
    out << r.name;
    for (const auto &v: r.per_dataset)
      out << ',' << cell(v);
    out << ',' << cell(r.avg_task) << ',' << cell(r.avg_data) << '\n';
  }
}

}  // namespace molprobe
