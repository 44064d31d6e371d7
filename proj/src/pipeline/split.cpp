//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/pipeline/split.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "molprobe/core/random.h"
#include "molprobe/molgraph/hash.h"
#include "molprobe/molgraph/rings.h"

namespace molprobe {

MolecularGraph bemis_murcko_scaffold(const MolecularGraph &input) {
  const MolecularGraph g =
      input.rings_perceived() ? input : perceive_rings(input);
  const int n = g.num_atoms();
  std::vector<int> degree(n);
  std::vector<char> alive(n, 1);
  std::vector<int> stack;
  for (int a = 0; a < n; ++a) {
    degree[a] = g.degree(a);
    if (degree[a] <= 1 && !g.atom_in_ring(a))
      stack.push_back(a);
  }
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    if (!alive[a])
      continue;
    alive[a] = 0;
    for (const Neighbor &nb: g.neighbors(a)) {
      if (alive[nb.atom] && --degree[nb.atom] <= 1
          && !g.atom_in_ring(nb.atom))
        stack.push_back(nb.atom);
    }
  }
  std::vector<int> keep;
  for (int a = 0; a < n; ++a)
    if (alive[a])
      keep.push_back(a);
  if (keep.empty())
    return {};
  return perceive_rings(g.induced_subgraph(keep));
}

std::string_view split_tag_name(SplitTag tag) {
  switch (tag) {
  case SplitTag::kTrain: return "train";
  case SplitTag::kValid: return "valid";
  case SplitTag::kTest: return "test";
  }
  return "?";
}

std::vector<int> SplitAssignment::members(SplitTag tag) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == tag)
      out.push_back(static_cast<int>(i));
  return out;
}

SplitAssignment scaffold_split(std::span<const MolecularGraph> molecules,
                               std::array<double, 3> fractions,
                               std::uint64_t /*seed*/) {
  double sum = 0;
  for (double f: fractions) {
    if (!(f >= 0))
      throw std::invalid_argument("split fractions must be non-negative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(
        fmt::format("split fractions sum to {}, not 1", sum));

  SplitAssignment s;
  s.requested = fractions;
  const int n = static_cast<int>(molecules.size());
  s.tags.assign(n, SplitTag::kTest);
  s.scaffolds.resize(n);
  std::map<std::uint64_t, std::vector<int>> by_hash;
  for (int i = 0; i < n; ++i) {
    s.scaffolds[i] = canonical_hash(bemis_murcko_scaffold(molecules[i]));
    by_hash[s.scaffolds[i]].push_back(i);
  }

  std::vector<std::pair<std::uint64_t, const std::vector<int> *>> groups;
  for (const auto &[h, members]: by_hash)
    groups.emplace_back(h, &members);
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto &a, const auto &b) {
                     return a.second->size() > b.second->size();
                   });
  s.groups = static_cast<int>(groups.size());

  const double train_cut = fractions[0] * n - 1e-9;
  const double valid_cut = (fractions[0] + fractions[1]) * n - 1e-9;
  std::array<int, 3> counts {};
  for (const auto &[h, members]: groups) {
    const int size = static_cast<int>(members->size());
    s.largest_group = std::max(s.largest_group, size);
    SplitTag tag = SplitTag::kTest;
    if (counts[0] < train_cut)
      tag = SplitTag::kTrain;
    else if (counts[0] + counts[1] < valid_cut)
      tag = SplitTag::kValid;
    for (int i: *members)
      s.tags[i] = tag;
    counts[static_cast<int>(tag)] += size;
  }
  for (int k = 0; k < 3; ++k) {
    s.achieved[k] = n > 0 ? static_cast<double>(counts[k]) / n : 0.0;
    if (n > 0 && counts[k] == 0 && fractions[k] > 0)
      s.warnings.push_back(fmt::format(
          "{} split is empty ({} scaffold groups, largest {})",
          split_tag_name(static_cast<SplitTag>(k)), s.groups,
          s.largest_group));
  }
  return s;
}

void write_split_csv(std::ostream &out, const SplitAssignment &split) {
  out << "molecule_index,split,scaffold\n";
  for (std::size_t i = 0; i < split.tags.size(); ++i)
    out << i << ',' << split_tag_name(split.tags[i]) << ','
        << fmt::format("{:016x}", split.scaffolds[i]) << '\n';
}

std::vector<NodePair> sample_node_pairs(std::span<const MolecularGraph> molecules,
                                        std::span<const int> pool, int count,
                                        std::uint64_t seed) {
  if (count < 1)
    throw std::invalid_argument("pair count must be at least 1");
  std::vector<int> eligible;
  for (int m: pool)
    if (molecules[m].num_atoms() >= 2)
      eligible.push_back(m);
  if (eligible.empty())
    throw std::invalid_argument("no molecule with two or more atoms");

  Rng rng(seed);
  std::vector<NodePair> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int m = eligible[rng.below(eligible.size())];
    const int n = molecules[m].num_atoms();
    int u = static_cast<int>(rng.below(n));
    int v = static_cast<int>(rng.below(n - 1));
    if (v >= u)
      ++v;
    out.push_back({ m, std::min(u, v), std::max(u, v) });
  }
  return out;
}

}  // namespace molprobe
