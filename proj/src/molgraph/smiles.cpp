//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/molgraph/smiles.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "molprobe/molgraph/element.h"
#include "molprobe/molgraph/hash.h"
#include "molprobe/molgraph/rings.h"

namespace molprobe {

SmilesParseError::SmilesParseError(const std::string &what, std::size_t offset)
    : std::runtime_error(fmt::format("{} (at byte {})", what, offset)),
      offset_(offset) { }

namespace {

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

class SmilesParser {
public:
  SmilesParser(std::string_view smiles, std::vector<std::string> *warnings)
      : s_(smiles), warnings_(warnings) { }

  MolecularGraph parse();

private:
  struct PendingBond {
    BondOrder order;
    std::size_t offset;
  };

  struct OpenRing {
    int atom;
    std::optional<BondOrder> order;
    std::size_t offset;
  };

  [[noreturn]] void fail(const std::string &what, std::size_t offset) const {
    throw SmilesParseError(what, offset);
  }

  void warn_once(const char *kind) {
    if (!warned_.insert(kind).second || warnings_ == nullptr)
      return;
    warnings_->push_back(fmt::format("{}: {} ignored", s_, kind));
  }

  BondOrder default_order(int u, int v) const {
    return atoms_[u].aromatic && atoms_[v].aromatic ? BondOrder::kAromatic
                                                    : BondOrder::kSingle;
  }

  void add_bond(int u, int v, BondOrder order, std::size_t offset) {
    if (u == v)
      fail("ring closure bonds an atom to itself", offset);
    auto key = std::minmax(u, v);
    if (!bond_pairs_.insert(key).second)
      fail(fmt::format("duplicate bond between atoms {} and {}", u, v), offset);
    bonds_.push_back({ u, v, order });
  }

  void add_atom(Atom atom, std::size_t offset) {
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back(atom);
    atom_offsets_.push_back(offset);
    if (prev_ >= 0) {
      add_bond(prev_, idx, bond_ ? bond_->order : default_order(prev_, idx),
               bond_ ? bond_->offset : offset);
      bond_.reset();
    }
    prev_ = idx;
  }

  void parse_bond();
  void parse_ring_closure();
  void parse_bracket_atom();
  void parse_organic_atom();
  MolecularGraph finish();

  std::string_view s_;
  std::vector<std::string> *warnings_;
  std::set<std::string> warned_;
  std::size_t pos_ = 0;

  std::vector<Atom> atoms_;
  std::vector<std::size_t> atom_offsets_;
  std::vector<Bond> bonds_;
  std::set<std::pair<int, int>> bond_pairs_;

  int prev_ = -1;
  std::optional<PendingBond> bond_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, OpenRing> open_rings_;
};

MolecularGraph SmilesParser::parse() {
  if (s_.empty())
    fail("empty SMILES", 0);

  while (pos_ < s_.size()) {
    const char c = s_[pos_];
    switch (c) {
    case '(':
      if (prev_ < 0)
        fail("branch without a preceding atom", pos_);
      if (bond_)
        fail("bond symbol before '('", bond_->offset);
      branches_.emplace_back(prev_, pos_);
      ++pos_;
      if (pos_ < s_.size() && s_[pos_] == ')')
        fail("empty branch", pos_);
      break;
    case ')':
      if (branches_.empty())
        fail("unmatched ')'", pos_);
      if (bond_)
        fail("dangling bond", bond_->offset);
      prev_ = branches_.back().first;
      branches_.pop_back();
      ++pos_;
      break;
    case '-':
    case '=':
    case '#':
    case ':':
    case '/':
    case '\\':
    case '$':
      parse_bond();
      break;
    case '.':
      if (bond_)
        fail("dangling bond", bond_->offset);
      prev_ = -1;
      ++pos_;
      break;
    case '%':
      parse_ring_closure();
      break;
    case '[':
      parse_bracket_atom();
      break;
    default:
      if (is_digit(c))
        parse_ring_closure();
      else
        parse_organic_atom();
    }
  }

  if (bond_)
    fail("dangling bond", bond_->offset);
  if (!branches_.empty())
    fail("unmatched '('", branches_.back().second);
  if (!open_rings_.empty()) {
    auto first = std::min_element(open_rings_.begin(), open_rings_.end(),
                                  [](const auto &a, const auto &b) {
                                    return a.second.offset < b.second.offset;
                                  });
    fail(fmt::format("unclosed ring closure {}", first->first),
         first->second.offset);
  }
  return finish();
}

void SmilesParser::parse_bond() {
  const char c = s_[pos_];
  if (prev_ < 0)
    fail(fmt::format("bond '{}' without a preceding atom", c), pos_);
  if (bond_)
    fail("consecutive bond symbols", pos_);

  BondOrder order = BondOrder::kSingle;
  switch (c) {
  case '=':
    order = BondOrder::kDouble;
    break;
  case '#':
    order = BondOrder::kTriple;
    break;
  case ':':
    order = BondOrder::kAromatic;
    break;
  case '$':
    fail("quadruple bonds are not supported", pos_);
  case '/':
  case '\\':
    warn_once("bond directions");
    break;
  default:
    break;
  }
  bond_ = PendingBond { order, pos_ };
  ++pos_;
}

void SmilesParser::parse_ring_closure() {
  const std::size_t start = pos_;
  if (prev_ < 0)
    fail("ring closure without a preceding atom", start);

  int number;
  if (s_[pos_] == '%') {
    if (pos_ + 2 >= s_.size() || !is_digit(s_[pos_ + 1])
        || !is_digit(s_[pos_ + 2]))
      fail("'%' must be followed by two digits", start);
    number = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
    pos_ += 3;
  } else {
    number = s_[pos_] - '0';
    ++pos_;
  }

  std::optional<BondOrder> order;
  if (bond_)
    order = bond_->order;
  bond_.reset();

  auto it = open_rings_.find(number);
  if (it == open_rings_.end()) {
    open_rings_.emplace(number, OpenRing { prev_, order, start });
    return;
  }

  OpenRing open = it->second;
  open_rings_.erase(it);
  if (order && open.order && *order != *open.order)
    fail(fmt::format("conflicting bond orders on ring closure {}", number),
         start);
  BondOrder chosen = order        ? *order
                     : open.order ? *open.order
                                  : default_order(open.atom, prev_);
  add_bond(open.atom, prev_, chosen, start);
}

void SmilesParser::parse_bracket_atom() {
  const std::size_t start = pos_;
  const std::size_t close = s_.find(']', start);
  if (close == std::string_view::npos)
    fail("unmatched '['", start);
  const std::string_view body = s_.substr(start + 1, close - start - 1);
  std::size_t i = 0;
  auto at = [&](std::size_t k) { return k < body.size() ? body[k] : '\0'; };

  if (is_digit(at(i))) {
    while (is_digit(at(i)))
      ++i;
    warn_once("isotopes");
  }

  Atom atom;
  atom.bracket = true;
  const std::size_t sym_offset = start + 1 + i;
  char c0 = at(i), c1 = at(i + 1);
  if (c0 == '*')
    fail("wildcard atom '*' is not supported", sym_offset);

  if (std::islower(static_cast<unsigned char>(c0))) {
    std::string two { static_cast<char>(std::toupper(c0)), c1 };
    std::string one { static_cast<char>(std::toupper(c0)) };
    int z2 = std::islower(static_cast<unsigned char>(c1)) ? atomic_number(two)
                                                         : 0;
    if (z2 != 0 && is_aromatic_bracket(z2)) {
      atom.atomic_number = z2;
      i += 2;
    } else if (int z1 = atomic_number(one); z1 != 0 && is_aromatic_bracket(z1)) {
      atom.atomic_number = z1;
      i += 1;
    } else {
      fail("unknown aromatic element", sym_offset);
    }
    atom.aromatic = true;
  } else if (std::isupper(static_cast<unsigned char>(c0))) {
    int z2 = std::islower(static_cast<unsigned char>(c1))
                 ? atomic_number(std::string { c0, c1 })
                 : 0;
    if (z2 != 0) {
      atom.atomic_number = z2;
      i += 2;
    } else if (int z1 = atomic_number(std::string { c0 }); z1 != 0) {
      atom.atomic_number = z1;
      i += 1;
    } else {
      fail("unknown element", sym_offset);
    }
  } else {
    fail("missing element symbol in bracket atom", sym_offset);
  }

  if (at(i) == '@') {
    while (at(i) == '@')
      ++i;
    for (const char *tag: { "TH", "AL", "SP", "TB", "OH" }) {
      if (at(i) == tag[0] && at(i + 1) == tag[1]) {
        i += 2;
        while (is_digit(at(i)))
          ++i;
        break;
      }
    }
    warn_once("chirality");
  }

  if (at(i) == 'H') {
    ++i;
    int h = 1;
    if (is_digit(at(i))) {
      h = 0;
      while (is_digit(at(i)))
        h = h * 10 + (body[i++] - '0');
    }
    atom.explicit_h = h;
  }

  if (at(i) == '+' || at(i) == '-') {
    const char sign = at(i);
    int magnitude = 1;
    ++i;
    if (is_digit(at(i))) {
      magnitude = 0;
      while (is_digit(at(i)))
        magnitude = magnitude * 10 + (body[i++] - '0');
    } else {
      while (at(i) == sign) {
        ++magnitude;
        ++i;
      }
    }
    atom.formal_charge = sign == '+' ? magnitude : -magnitude;
  }

  if (at(i) == ':') {
    ++i;
    while (is_digit(at(i)))
      ++i;
    warn_once("atom classes");
  }

  if (i != body.size())
    fail(fmt::format("unexpected '{}' in bracket atom", body[i]),
         start + 1 + i);

  pos_ = close + 1;
  add_atom(atom, start);
}

void SmilesParser::parse_organic_atom() {
  const std::size_t start = pos_;
  const char c = s_[pos_];
  const char next = pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0';

  Atom atom;
  if (c == 'C' && next == 'l') {
    atom.atomic_number = 17;
    pos_ += 2;
  } else if (c == 'B' && next == 'r') {
    atom.atomic_number = 35;
    pos_ += 2;
  } else {
    switch (c) {
    case 'B':
      atom.atomic_number = 5;
      break;
    case 'C':
      atom.atomic_number = 6;
      break;
    case 'N':
      atom.atomic_number = 7;
      break;
    case 'O':
      atom.atomic_number = 8;
      break;
    case 'P':
      atom.atomic_number = 15;
      break;
    case 'S':
      atom.atomic_number = 16;
      break;
    case 'F':
      atom.atomic_number = 9;
      break;
    case 'I':
      atom.atomic_number = 53;
      break;
    case 'b':
      atom.atomic_number = 5;
      atom.aromatic = true;
      break;
    case 'c':
      atom.atomic_number = 6;
      atom.aromatic = true;
      break;
    case 'n':
      atom.atomic_number = 7;
      atom.aromatic = true;
      break;
    case 'o':
      atom.atomic_number = 8;
      atom.aromatic = true;
      break;
    case 'p':
      atom.atomic_number = 15;
      atom.aromatic = true;
      break;
    case 's':
      atom.atomic_number = 16;
      atom.aromatic = true;
      break;
    case ']':
      fail("unmatched ']'", start);
    default:
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '*')
        fail(fmt::format("unknown element '{}'", c), start);
      fail(fmt::format("unexpected character '{}'", c), start);
    }
    ++pos_;
  }
  add_atom(atom, start);
}

MolecularGraph SmilesParser::finish() {
  MolecularGraph ringed = perceive_rings(MolecularGraph(atoms_, bonds_));

  // Aromatic flags only make sense inside rings.
  for (int b = 0; b < ringed.num_bonds(); ++b) {
    if (bonds_[b].order == BondOrder::kAromatic && !ringed.bond_in_ring(b))
      bonds_[b].order = BondOrder::kSingle;
  }
  for (int a = 0; a < ringed.num_atoms(); ++a) {
    if (atoms_[a].aromatic && !ringed.atom_in_ring(a)) {
      atoms_[a].aromatic = false;
      warn_once("aromatic flags outside rings");
    }
  }

  MolecularGraph g(atoms_, bonds_, ringed.rings());
  for (int a = 0; a < g.num_atoms(); ++a) {
    if (atoms_[a].bracket)
      continue;
    int h = implied_hydrogens(atoms_[a], bond_valence(g, a));
    if (h < 0)
      fail(fmt::format("valence exceeded on atom {} ({})", a,
                       atoms_[a].symbol()),
           atom_offsets_[a]);
    atoms_[a].implicit_h = h;
  }

  return perceive_aromaticity(MolecularGraph(atoms_, bonds_, g.rings()));
}

// ---- writer ----

class SmilesWriter {
public:
  explicit SmilesWriter(const MolecularGraph &g): g_(g) { }

  std::string write();

private:
  void plan(int u, int parent_bond);
  void emit(int u);
  std::string atom_text(int u) const;
  std::string bond_text(int bond) const;
  int take_digit();

  const MolecularGraph &g_;
  std::vector<int> rank_;
  std::vector<int> disc_;
  int clock_ = 0;
  std::vector<std::vector<int>> children_;    // tree bonds, emit order
  std::vector<std::vector<int>> ring_opens_;  // back bonds opened here
  std::vector<std::vector<int>> ring_closes_;
  std::vector<int> digit_of_bond_;
  std::vector<char> digit_used_;
  std::string out_;
};

std::string SmilesWriter::write() {
  const int n = g_.num_atoms();
  std::vector<std::uint64_t> labels = refined_atom_labels(g_);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return labels[a] < labels[b]; });
  rank_.assign(n, 0);
  for (int i = 0; i < n; ++i)
    rank_[order[i]] = i;

  disc_.assign(n, -1);
  children_.assign(n, {});
  ring_opens_.assign(n, {});
  ring_closes_.assign(n, {});
  digit_of_bond_.assign(g_.num_bonds(), -1);
  digit_used_.assign(100, 0);

  std::vector<int> roots;
  for (int u: order) {
    if (disc_[u] >= 0)
      continue;
    roots.push_back(u);
    plan(u, -1);
  }

  for (std::size_t r = 0; r < roots.size(); ++r) {
    if (r > 0)
      out_ += '.';
    emit(roots[r]);
  }
  return out_;
}

void SmilesWriter::plan(int u, int parent_bond) {
  disc_[u] = clock_++;
  std::vector<Neighbor> nbs(g_.neighbors(u).begin(), g_.neighbors(u).end());
  std::sort(nbs.begin(), nbs.end(), [&](const Neighbor &a, const Neighbor &b) {
    return rank_[a.atom] < rank_[b.atom];
  });
  for (const Neighbor &nb: nbs) {
    if (nb.bond == parent_bond)
      continue;
    if (disc_[nb.atom] < 0) {
      children_[u].push_back(nb.bond);
      plan(nb.atom, nb.bond);
    } else if (disc_[nb.atom] < disc_[u]) {
      ring_opens_[nb.atom].push_back(nb.bond);
      ring_closes_[u].push_back(nb.bond);
    }
  }
}

int SmilesWriter::take_digit() {
  for (int d = 1; d < 100; ++d) {
    if (!digit_used_[d]) {
      digit_used_[d] = 1;
      return d;
    }
  }
  throw std::runtime_error("more than 99 simultaneous ring closures");
}

void SmilesWriter::emit(int u) {
  out_ += atom_text(u);

  auto digit_text = [](int d) {
    return d < 10 ? std::to_string(d) : fmt::format("%{}", d);
  };
  for (int b: ring_closes_[u]) {
    out_ += digit_text(digit_of_bond_[b]);
    digit_used_[digit_of_bond_[b]] = 0;
  }
  // Openings follow DFS discovery order of their closing atoms.
  std::vector<int> opens = ring_opens_[u];
  std::sort(opens.begin(), opens.end(), [&](int a, int b) {
    return disc_[g_.bond(a).other(u)] < disc_[g_.bond(b).other(u)];
  });
  for (int b: opens) {
    digit_of_bond_[b] = take_digit();
    out_ += bond_text(b);
    out_ += digit_text(digit_of_bond_[b]);
  }

  const auto &kids = children_[u];
  for (std::size_t k = 0; k < kids.size(); ++k) {
    const bool branch = k + 1 < kids.size();
    if (branch)
      out_ += '(';
    out_ += bond_text(kids[k]);
    emit(g_.bond(kids[k]).other(u));
    if (branch)
      out_ += ')';
  }
}

std::string SmilesWriter::bond_text(int b) const {
  const Bond &bond = g_.bond(b);
  const bool both_aromatic =
      g_.atom(bond.begin).aromatic && g_.atom(bond.end).aromatic;
  switch (bond.order) {
  case BondOrder::kSingle:
    return both_aromatic ? "-" : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kAromatic:
    return both_aromatic ? "" : ":";
  }
  return "";
}

std::string SmilesWriter::atom_text(int u) const {
  const Atom &a = g_.atom(u);
  std::string sym(a.symbol());
  if (a.aromatic)
    sym[0] = static_cast<char>(std::tolower(sym[0]));

  const bool organic = is_organic_subset(a.atomic_number)
                       && a.formal_charge == 0
                       && (!a.aromatic || is_aromatic_organic(a.atomic_number));
  if (organic) {
    Atom bare = a;
    bare.bracket = false;
    if (implied_hydrogens(bare, bond_valence(g_, u)) == a.total_h())
      return sym;
  }

  std::string text = "[" + sym;
  if (a.total_h() == 1)
    text += "H";
  else if (a.total_h() > 1)
    text += fmt::format("H{}", a.total_h());
  if (a.formal_charge == 1)
    text += "+";
  else if (a.formal_charge == -1)
    text += "-";
  else if (a.formal_charge != 0)
    text += fmt::format("{:+d}", a.formal_charge);
  return text + "]";
}

}  // namespace

MolecularGraph parse_smiles(std::string_view smiles,
                            std::vector<std::string> *warnings) {
  return SmilesParser(smiles, warnings).parse();
}

std::string write_smiles(const MolecularGraph &g) {
  return SmilesWriter(g).write();
}

std::string dump_graph(const MolecularGraph &g) {
  std::string out = fmt::format("atoms {}\n", g.num_atoms());
  for (int i = 0; i < g.num_atoms(); ++i) {
    const Atom &a = g.atom(i);
    out += fmt::format("{} {} aromatic={} charge={} h={}\n", i, a.symbol(),
                       a.aromatic ? 1 : 0, a.formal_charge, a.total_h());
  }
  out += fmt::format("bonds {}\n", g.num_bonds());
  for (const Bond &b: g.bonds())
    out += fmt::format("{} {} {}\n", b.begin, b.end, bond_order_name(b.order));
  out += fmt::format("rings {}\n", g.rings().size());
  for (const Ring &r: g.rings())
    out += fmt::format("{}\n", fmt::join(r, " "));
  return out;
}

}  // namespace molprobe
