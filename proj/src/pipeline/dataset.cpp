//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/pipeline/dataset.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "molprobe/molgraph/smiles.h"

namespace molprobe {

std::vector<std::vector<std::string>> read_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;

  auto end_row = [&]() {
    row.push_back(std::move(cell));
    cell.clear();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      cell += c;
      any = true;
    }
  }
  if (quoted)
    throw DatasetError("unterminated quoted field");
  if (any || !row.empty())
    end_row();
  return rows;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (char &c: s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<Label> parse_label(const std::string &cell) {
  if (cell.empty())
    return Label::kMissing;
  if (cell == "0" || cell == "0.0" || cell == "0.00")
    return Label::kNegative;
  if (cell == "1" || cell == "1.0" || cell == "1.00")
    return Label::kPositive;
  return std::nullopt;
}

}  // namespace

Dataset parse_dataset(std::string_view csv, std::string name,
                      std::string_view smiles_column, bool require_labels) {
  std::vector<std::vector<std::string>> rows = read_csv(csv);
  // Blank lines carry no data.
  std::erase_if(rows, [](const std::vector<std::string> &r) {
    return r.size() == 1 && trim(r[0]).empty();
  });
  if (rows.empty())
    throw DatasetError(fmt::format("{}: empty file", name));

  std::vector<std::string> header;
  for (const std::string &h: rows[0])
    header.push_back(trim(h));
  const std::string wanted =
      smiles_column.empty() ? "smiles" : lower(std::string(smiles_column));
  int smiles_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (lower(header[c]) == wanted) {
      smiles_col = static_cast<int>(c);
      break;
    }
  }
  if (smiles_col < 0)
    throw DatasetError(fmt::format(
        "{}: no '{}' column in header", name,
        smiles_column.empty() ? "smiles" : std::string(smiles_column)));

  for (std::size_t r = 1; r < rows.size(); ++r)
    if (rows[r].size() != header.size())
      throw DatasetError(fmt::format("{}: line {} has {} fields, expected {}",
                                     name, r + 1, rows[r].size(),
                                     header.size()));

  Dataset d;
  d.name = std::move(name);
  std::vector<int> label_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) == smiles_col)
      continue;
    bool binary = true;
    for (std::size_t r = 1; r < rows.size() && binary; ++r)
      binary = parse_label(trim(rows[r][c])).has_value();
    if (binary) {
      label_cols.push_back(static_cast<int>(c));
      d.tasks.push_back(header[c]);
    } else {
      d.ignored_columns.push_back(header[c]);
    }
  }
  if (label_cols.empty() && require_labels)
    throw DatasetError(fmt::format("{}: no 0/1 label column", d.name));

  std::vector<std::vector<Label>> kept;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::string smi = trim(rows[r][smiles_col]);
    try {
      if (smi.empty())
        throw SmilesParseError("empty SMILES", 0);
      d.molecules.push_back(parse_smiles(smi));
    } catch (const std::exception &e) {
      d.skipped.push_back({ static_cast<int>(r + 1), smi, e.what() });
      continue;
    }
    d.smiles.push_back(smi);
    std::vector<Label> labels;
    for (int c: label_cols)
      labels.push_back(*parse_label(trim(rows[r][c])));
    kept.push_back(std::move(labels));
  }

  d.labels = LabelMatrix(static_cast<int>(kept.size()),
                         static_cast<int>(label_cols.size()));
  for (std::size_t r = 0; r < kept.size(); ++r)
    for (std::size_t c = 0; c < kept[r].size(); ++c)
      d.labels(static_cast<int>(r), static_cast<int>(c)) = kept[r][c];
  return d;
}

Dataset load_dataset(const std::filesystem::path &path,
                     std::string_view smiles_column, bool require_labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DatasetError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path.stem().string(), smiles_column,
                       require_labels);
}

}  // namespace molprobe
