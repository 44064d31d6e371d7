//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/encoder/embedding.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "molprobe/core/format.h"

namespace molprobe {

namespace {

constexpr char kMagic[8] = { 'M', 'P', 'E', 'M', 'B', 'E', 'D', '1' };
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
  void u32(std::uint32_t v) { le(v, 4); }
  void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v), 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(const void *p, std::size_t n) {
    const char *c = static_cast<const char *>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  const std::string &data() const { return buf_; }

private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i)
      buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string buf_;
};

class Reader {
public:
  explicit Reader(std::string data): data_(std::move(data)) { }

  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

  void need(std::size_t n) const {
    if (remaining() < n)
      throw EmbeddingFormatError("embedding file is truncated");
  }

private:
  std::uint64_t le(int n) {
    need(n);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += n;
    return v;
  }
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace

void EmbeddingMatrix::validate() const {
  if (static_cast<Eigen::Index>(index.size()) != values.rows())
    throw std::invalid_argument("index map has " + std::to_string(index.size())
                                + " entries for "
                                + std::to_string(values.rows()) + " rows");
  if (!values.allFinite())
    throw std::invalid_argument("embedding contains non-finite values");
  std::set<EmbeddingIndex> seen;
  for (const EmbeddingIndex &e: index) {
    if (e.molecule < 0)
      throw std::invalid_argument("negative molecule index");
    if (level == EmbeddingLevel::kGraph ? e.atom != -1 : e.atom < 0)
      throw std::invalid_argument("atom index does not fit the level");
    if (!seen.insert(e).second)
      throw std::invalid_argument("index map is not injective");
  }
}

void save_embeddings(const EmbeddingMatrix &m,
                     const std::filesystem::path &path) {
  m.validate();
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(m.level));
  w.i32(m.layer);
  w.u64(static_cast<std::uint64_t>(m.values.rows()));
  w.u64(static_cast<std::uint64_t>(m.values.cols()));
  w.u32(static_cast<std::uint32_t>(m.provenance.size()));
  w.bytes(m.provenance.data(), m.provenance.size());
  for (Eigen::Index r = 0; r < m.values.rows(); ++r)
    for (Eigen::Index c = 0; c < m.values.cols(); ++c)
      w.f64(m.values(r, c));
  for (const EmbeddingIndex &e: m.index) {
    w.i32(e.molecule);
    w.i32(e.atom);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
  if (!out)
    throw std::runtime_error("failed writing " + path.string());
}

EmbeddingMatrix load_embeddings(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  Reader r(std::string(std::istreambuf_iterator<char>(in), {}));

  if (r.remaining() < sizeof kMagic
      || r.bytes(sizeof kMagic) != std::string(kMagic, sizeof kMagic))
    throw EmbeddingFormatError("not an embedding file (bad magic)");
  if (std::uint32_t v = r.u32(); v != kVersion)
    throw EmbeddingFormatError("unsupported embedding file version "
                               + std::to_string(v));
  EmbeddingMatrix m;
  std::uint32_t level = r.u32();
  if (level > 1)
    throw EmbeddingFormatError("unknown embedding level "
                               + std::to_string(level));
  m.level = static_cast<EmbeddingLevel>(level);
  m.layer = r.i32();
  const std::uint64_t rows = r.u64(), cols = r.u64();
  m.provenance = r.bytes(r.u32());
  // Guard the allocation against a corrupt header.
  if (cols != 0 && rows > r.remaining() / 8 / cols)
    throw EmbeddingFormatError("embedding file is truncated");
  m.values.resize(static_cast<Eigen::Index>(rows),
                  static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.values.rows(); ++i)
    for (Eigen::Index j = 0; j < m.values.cols(); ++j)
      m.values(i, j) = r.f64();
  r.need(rows * 8);
  m.index.resize(rows);
  for (auto &e: m.index) {
    e.molecule = r.i32();
    e.atom = r.i32();
  }
  if (r.remaining() != 0)
    throw EmbeddingFormatError("trailing bytes after embedding data");
  try {
    m.validate();
  } catch (const std::invalid_argument &e) {
    throw EmbeddingFormatError(e.what());
  }
  return m;
}

void write_embeddings_csv(std::ostream &out, const EmbeddingMatrix &m) {
  out << "molecule,atom";
  for (int c = 0; c < m.dim(); ++c)
    out << ",f" << c;
  out << '\n';
  for (int r = 0; r < m.rows(); ++r) {
    out << m.index[r].molecule << ',' << m.index[r].atom;
    for (int c = 0; c < m.dim(); ++c)
      out << ',' << format_double(m.values(r, c));
    out << '\n';
  }
}

}  // namespace molprobe
