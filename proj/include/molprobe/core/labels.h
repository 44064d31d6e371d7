//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_CORE_LABELS_H_
#define MOLPROBE_CORE_LABELS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace molprobe {

// Binary task label with an explicit missing marker (MoleculeNet blanks).
enum class Label : std::int8_t {
  kMissing = -1,
  kNegative = 0,
  kPositive = 1,
};

// Row-major molecules x tasks matrix of labels.
class LabelMatrix {
public:
  LabelMatrix() = default;
  LabelMatrix(int rows, int cols, Label fill = Label::kMissing)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, fill) { }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Label operator()(int r, int c) const { return data_[index(r, c)]; }
  Label &operator()(int r, int c) { return data_[index(r, c)]; }

  std::span<const Label> row(int r) const {
    return { data_.data() + index(r, 0), static_cast<std::size_t>(cols_) };
  }

  // Keeps the given rows, in order.
  LabelMatrix select_rows(std::span<const int> rows) const {
    LabelMatrix out(static_cast<int>(rows.size()), cols_);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int c = 0; c < cols_; ++c)
        out(static_cast<int>(i), c) = (*this)(rows[i], c);
    return out;
  }

private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * cols_ + c;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Label> data_;
};

}  // namespace molprobe

#endif  // MOLPROBE_CORE_LABELS_H_
