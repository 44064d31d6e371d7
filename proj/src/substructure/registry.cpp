//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/substructure/registry.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "molprobe/core/parallel.h"

namespace molprobe {

namespace detail {
extern const char kBuiltinRegistry[];
}  // namespace detail

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = s.find(sep, start);
    out.emplace_back(s.substr(start, end - start));
    if (end == std::string_view::npos)
      return out;
    start = end + 1;
  }
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in { std::string(s) };
  for (std::string w; in >> w;)
    out.push_back(w);
  return out;
}

}  // namespace

const SubstructureRegistry &SubstructureRegistry::builtin() {
  static const SubstructureRegistry registry =
      parse(detail::kBuiltinRegistry);
  return registry;
}

SubstructureRegistry SubstructureRegistry::parse(std::string_view tsv) {
  SubstructureRegistry reg;
  std::set<std::string> seen;
  int line_no = 0;
  for (std::string line: split(tsv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> f = split(line, '\t');
    auto where = [&]() { return "registry line " + std::to_string(line_no); };
    if (f.size() != 7)
      throw std::runtime_error(where() + ": expected 7 tab-separated fields");

    SubstructureEntry e;
    e.name = f[0];
    e.group = f[1];
    if (f[2] == "embeddings")
      e.mode = MatchMode::kEmbeddings;
    else if (f[2] == "atoms")
      e.mode = MatchMode::kAtoms;
    else
      throw std::runtime_error(where() + ": unknown mode '" + f[2] + "'");
    try {
      e.pattern = parse_pattern(f[3]);
    } catch (const PatternError &err) {
      throw std::runtime_error(where() + ": " + err.what());
    }
    if (e.mode == MatchMode::kAtoms && e.pattern.num_atoms() != 1)
      throw std::runtime_error(where() + ": atom mode needs a one-atom "
                                         "pattern");
    e.positives = split_words(f[4]);
    e.negatives = split_words(f[5]);
    e.description = f[6];
    if (!seen.insert(e.name).second)
      throw std::runtime_error(where() + ": duplicate name '" + e.name + "'");
    reg.entries_.push_back(std::move(e));
  }
  return reg;
}

SubstructureRegistry
SubstructureRegistry::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<int> SubstructureRegistry::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (entries_[i].name == name)
      return i;
  return std::nullopt;
}

std::vector<std::string> SubstructureRegistry::names() const {
  std::vector<std::string> out;
  for (const auto &e: entries_)
    out.push_back(e.name);
  return out;
}

int SubstructureRegistry::count(const MolecularGraph &g, int entry) const {
  const SubstructureEntry &e = entries_[entry];
  if (e.mode == MatchMode::kAtoms) {
    int n = 0;
    for (int a = 0; a < g.num_atoms(); ++a)
      n += atom_matches(g, a, e.pattern.atoms[0]);
    return n;
  }
  return count_matches(g, e.pattern);
}

SubstructureCounts SubstructureRegistry::count_all(
    const MolecularGraph &g) const {
  SubstructureCounts out(size());
  for (int i = 0; i < size(); ++i)
    out[i] = count(g, i);
  return out;
}

std::vector<SubstructureCounts>
count_all(const SubstructureRegistry &registry,
          std::span<const MolecularGraph> molecules, int jobs) {
  std::vector<SubstructureCounts> out(molecules.size());
  parallel_for(molecules.size(), jobs, [&](std::size_t i) {
    out[i] = registry.count_all(molecules[i]);
  });
  return out;
}

void write_counts_csv(std::ostream &out, const SubstructureRegistry &registry,
                      std::span<const SubstructureCounts> counts) {
  out << "molecule_index";
  for (const auto &e: registry.entries())
    out << ',' << e.name;
  out << '\n';
  for (std::size_t m = 0; m < counts.size(); ++m) {
    out << m;
    for (int c: counts[m])
      out << ',' << c;
    out << '\n';
  }
}

}  // namespace molprobe
