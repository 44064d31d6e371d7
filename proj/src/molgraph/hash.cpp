//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/molgraph/hash.h"

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "molprobe/core/hash.h"
#include "molprobe/molgraph/rings.h"

namespace molprobe {
namespace {

std::size_t count_distinct(const std::vector<std::uint64_t> &labels) {
  std::unordered_set<std::uint64_t> s(labels.begin(), labels.end());
  return s.size();
}

}  // namespace

std::vector<std::uint64_t> refined_atom_labels(const MolecularGraph &g) {
  const int n = g.num_atoms();
  const std::vector<int> cycles = smallest_cycle_sizes(g);

  std::vector<std::uint64_t> labels(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    std::uint64_t h = hash_combine(0x6d6f6c6772617068ULL, a.atomic_number);
    h = hash_combine(h, a.aromatic ? 1 : 0);
    h = hash_combine(h, static_cast<std::uint64_t>(a.formal_charge + 64));
    h = hash_combine(h, a.total_h());
    h = hash_combine(h, g.degree(i));
    h = hash_combine(h, cycles[i]);
    labels[i] = h;
  }

  std::size_t classes = count_distinct(labels);
  std::vector<std::uint64_t> next(n), msgs;
  for (int round = 0; round < n; ++round) {
    for (int u = 0; u < n; ++u) {
      msgs.clear();
      for (const Neighbor &nb: g.neighbors(u)) {
        auto order = static_cast<std::uint64_t>(g.bond(nb.bond).order);
        msgs.push_back(hash_combine(order, labels[nb.atom]));
      }
      std::sort(msgs.begin(), msgs.end());
      std::uint64_t h = hash_combine(labels[u], msgs.size());
      for (std::uint64_t m: msgs)
        h = hash_combine(h, m);
      next[u] = h;
    }
    labels.swap(next);
    std::size_t refined = count_distinct(labels);
    if (refined == classes)
      break;
    classes = refined;
  }
  return labels;
}

std::uint64_t canonical_hash(const MolecularGraph &g) {
  std::vector<std::uint64_t> labels = refined_atom_labels(g);
  std::sort(labels.begin(), labels.end());

  std::uint64_t h = hash_combine(0x63616e6f6e696361ULL, g.num_atoms());
  h = hash_combine(h, g.num_bonds());
  h = hash_combine(h, g.num_components());
  for (std::uint64_t l: labels)
    h = hash_combine(h, l);
  return h;
}

}  // namespace molprobe
