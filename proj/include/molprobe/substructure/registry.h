//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_SUBSTRUCTURE_REGISTRY_H_
#define MOLPROBE_SUBSTRUCTURE_REGISTRY_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molprobe/molgraph/graph.h"
#include "molprobe/substructure/pattern.h"

namespace molprobe {

enum class MatchMode {
  kEmbeddings,  // distinct matched atom sets
  kAtoms,       // matching atoms of a single-atom pattern
};

struct SubstructureEntry {
  std::string name;
  std::string group;  // ring, functional, redox
  MatchMode mode = MatchMode::kEmbeddings;
  Pattern pattern;
  std::vector<std::string> positives;
  std::vector<std::string> negatives;
  std::string description;
};

// One count per registry entry, in registry order.
using SubstructureCounts = std::vector<int>;

class SubstructureRegistry {
public:
  // The registry shipped with the library (data/substructures.tsv).
  static const SubstructureRegistry &builtin();

  // Tab-separated: name, group, mode, pattern, positives, negatives,
  // description. Lines starting with '#' and blank lines are skipped.
  static SubstructureRegistry parse(std::string_view tsv);
  static SubstructureRegistry load(const std::filesystem::path &path);

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<SubstructureEntry> &entries() const { return entries_; }
  const SubstructureEntry &entry(int i) const { return entries_[i]; }
  std::optional<int> index_of(std::string_view name) const;
  std::vector<std::string> names() const;

  int count(const MolecularGraph &g, int entry) const;
  SubstructureCounts count_all(const MolecularGraph &g) const;

private:
  std::vector<SubstructureEntry> entries_;
};

std::vector<SubstructureCounts>
count_all(const SubstructureRegistry &registry,
          std::span<const MolecularGraph> molecules, int jobs = 1);

// molecule_index followed by one column per registry entry.
void write_counts_csv(std::ostream &out, const SubstructureRegistry &registry,
                      std::span<const SubstructureCounts> counts);

}  // namespace molprobe

#endif  // MOLPROBE_SUBSTRUCTURE_REGISTRY_H_
