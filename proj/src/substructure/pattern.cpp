//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/substructure/pattern.h"

#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "molprobe/molgraph/element.h"

namespace molprobe {

namespace {

constexpr unsigned bit(BondOrder order) {
  return 1u << static_cast<int>(order);
}

constexpr unsigned kDefaultBond = bit(BondOrder::kSingle)
                                  | bit(BondOrder::kAromatic);
constexpr unsigned kAnyBond = bit(BondOrder::kSingle) | bit(BondOrder::kDouble)
                              | bit(BondOrder::kTriple)
                              | bit(BondOrder::kAromatic);

AtomQuery element_query(int z, int aromatic) {
  AtomPrimitive p;
  p.kind = AtomPrimitive::Kind::kElement;
  p.value = z;
  p.aromatic = aromatic;
  return AtomQuery { { { p } } };
}

AtomQuery any_query() {
  return AtomQuery { { { AtomPrimitive {} } } };
}

class PatternParser {
public:
  PatternParser(std::string_view text, std::size_t base)
      : text_(text), base_(base) { }

  Pattern parse() {
    Pattern out;
    out.source = std::string(text_);
    pattern_ = &out;

    int prev = -1;
    std::vector<int> branches;
    std::optional<unsigned> pending;
    std::size_t pending_at = 0;
    struct Open {
      int atom;
      std::optional<unsigned> bond;
      std::size_t at;
    };
    std::map<int, Open> rings;

    while (pos_ < text_.size()) {
      const std::size_t at = pos_;
      const char c = text_[pos_];
      if (c == '(') {
        if (prev < 0)
          fail("branch without a preceding atom", at);
        if (pending)
          fail("bond before a branch", pending_at);
        branches.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (branches.empty())
          fail("unmatched ')'", at);
        if (pending)
          fail("dangling bond", pending_at);
        prev = branches.back();
        branches.pop_back();
        ++pos_;
      } else if (auto mask = bond_symbol(c)) {
        if (prev < 0)
          fail("bond without a preceding atom", at);
        if (pending)
          fail("two bonds in a row", at);
        pending = *mask;
        pending_at = at;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0)
          fail("ring closure without a preceding atom", at);
        int digit = ring_number();
        auto it = rings.find(digit);
        if (it == rings.end()) {
          rings[digit] = { prev, pending, at };
        } else {
          if (pending && it->second.bond && *pending != *it->second.bond)
            fail("conflicting ring-closure bonds", at);
          unsigned mask = pending ? *pending
                          : it->second.bond ? *it->second.bond
                                            : kDefaultBond;
          add_bond(it->second.atom, prev, mask, at);
          rings.erase(it);
        }
        pending.reset();
      } else {
        AtomQuery q = c == '[' ? bracket_atom() : bare_atom();
        out.atoms.push_back(std::move(q));
        const int atom = out.num_atoms() - 1;
        if (prev >= 0)
          add_bond(prev, atom, pending.value_or(kDefaultBond), at);
        else if (atom > 0)
          fail("disconnected pattern", at);
        pending.reset();
        prev = atom;
      }
    }

    if (pending)
      fail("dangling bond", pending_at);
    if (!branches.empty())
      fail("unclosed branch", text_.size());
    if (!rings.empty())
      fail("unclosed ring closure " + std::to_string(rings.begin()->first),
           rings.begin()->second.at);
    if (out.atoms.empty())
      fail("empty pattern", 0);
    return out;
  }

private:
  [[noreturn]] void fail(const std::string &what, std::size_t at) const {
    throw PatternError(what, base_ + at);
  }

  static std::optional<unsigned> bond_symbol(char c) {
    switch (c) {
    case '-':
      return bit(BondOrder::kSingle);
    case '=':
      return bit(BondOrder::kDouble);
    case '#':
      return bit(BondOrder::kTriple);
    case ':':
      return bit(BondOrder::kAromatic);
    case '~':
      return kAnyBond;
    default:
      return std::nullopt;
    }
  }

  int ring_number() {
    if (text_[pos_] != '%')
      return text_[pos_++] - '0';
    if (pos_ + 2 >= text_.size()
        || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))
        || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
      fail("'%' needs two digits", pos_);
    int n = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
    pos_ += 3;
    return n;
  }

  void add_bond(int u, int v, unsigned mask, std::size_t at) {
    if (u == v)
      fail("ring closure onto the same atom", at);
    if (pattern_->find_bond(u, v) >= 0)
      fail("duplicate bond", at);
    pattern_->bonds.push_back({ u, v, BondQuery { mask } });
  }

  AtomQuery bare_atom() {
    const std::size_t at = pos_;
    const char c = text_[pos_];
    if (c == '*') {
      ++pos_;
      return any_query();
    }
    if (text_.substr(pos_, 2) == "Cl" || text_.substr(pos_, 2) == "Br") {
      int z = atomic_number(text_.substr(pos_, 2));
      pos_ += 2;
      return element_query(z, 0);
    }
    static constexpr std::string_view kAliphatic = "BCNOPSFI";
    static constexpr std::string_view kAromatic = "bcnops";
    if (kAliphatic.find(c) != std::string_view::npos) {
      ++pos_;
      return element_query(atomic_number(std::string_view(&c, 1)), 0);
    }
    if (kAromatic.find(c) != std::string_view::npos) {
      ++pos_;
      char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return element_query(atomic_number(std::string_view(&up, 1)), 1);
    }
    fail(std::string("unexpected character '") + c + "'", at);
  }

  int number(int fallback) {
    if (pos_ >= text_.size()
        || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      return fallback;
    int n = 0;
    while (pos_ < text_.size()
           && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      n = n * 10 + (text_[pos_++] - '0');
    return n;
  }

  AtomPrimitive primitive() {
    using Kind = AtomPrimitive::Kind;
    AtomPrimitive p;
    while (pos_ < text_.size() && text_[pos_] == '!') {
      p.negated = !p.negated;
      ++pos_;
    }
    if (pos_ >= text_.size())
      fail("unclosed '['", pos_);
    const std::size_t at = pos_;
    const char c = text_[pos_];
    auto next_is_lower = [&]() {
      return pos_ + 1 < text_.size()
             && std::islower(static_cast<unsigned char>(text_[pos_ + 1]));
    };

    if (c == '*') {
      ++pos_;
      p.kind = Kind::kAny;
    } else if (c == 'a') {
      ++pos_;
      p.kind = Kind::kAromatic;
    } else if (c == 'A') {
      ++pos_;
      p.kind = Kind::kAliphatic;
    } else if (c == 'R' && !next_is_lower()) {
      ++pos_;
      p.kind = Kind::kRing;
    } else if (c == 'D' && !next_is_lower()) {
      ++pos_;
      p.kind = Kind::kDegree;
      p.value = number(1);
    } else if (c == 'H' && !next_is_lower()) {
      ++pos_;
      p.kind = Kind::kHydrogens;
      p.value = number(1);
    } else if (c == 'h') {
      ++pos_;
      p.kind = Kind::kHasHydrogen;
    } else if (c == 'u') {
      ++pos_;
      p.kind = Kind::kUnsaturated;
    } else if (c == 'z') {
      ++pos_;
      p.kind = Kind::kHeteroNeighbors;
      p.value = number(1);
    } else if (c == '+' || c == '-') {
      ++pos_;
      p.kind = Kind::kCharge;
      p.value = number(1) * (c == '-' ? -1 : 1);
    } else if (c == '#') {
      ++pos_;
      p.kind = Kind::kElement;
      p.value = number(-1);
      if (p.value <= 0)
        fail("'#' needs an atomic number", at);
    } else if (c == '$') {
      if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '(')
        fail("'$' needs a parenthesised pattern", at);
      std::size_t start = pos_ + 2, end = start;
      for (int depth = 1; depth > 0; ++end) {
        if (end >= text_.size())
          fail("unclosed '$('", at);
        if (text_[end] == '(')
          ++depth;
        else if (text_[end] == ')')
          --depth;
      }
      // `end` is one past the closing parenthesis.
      std::string_view inner = text_.substr(start, end - 1 - start);
      p.kind = Kind::kRecursive;
      p.nested = std::make_shared<Pattern>(
          PatternParser(inner, base_ + start).parse());
      pos_ = end;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      int z = 0;
      if (next_is_lower())
        z = atomic_number(text_.substr(pos_, 2));
      if (z > 0) {
        pos_ += 2;
      } else {
        z = atomic_number(text_.substr(pos_, 1));
        ++pos_;
      }
      if (z <= 0)
        fail("unknown element", at);
      p.kind = Kind::kElement;
      p.value = z;
      p.aromatic = 0;
    } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
      char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      ++pos_;
      p.kind = Kind::kElement;
      p.value = atomic_number(std::string_view(&up, 1));
      p.aromatic = 1;
    } else {
      fail(std::string("unknown atom primitive '") + c + "'", at);
    }
    return p;
  }

  AtomQuery bracket_atom() {
    const std::size_t open = pos_++;
    AtomQuery q;
    q.all_of.emplace_back();
    for (;;) {
      if (pos_ >= text_.size())
        fail("unclosed '['", open);
      if (text_[pos_] == ']' && !q.all_of.back().empty()) {
        ++pos_;
        return q;
      }
      q.all_of.back().push_back(primitive());
      if (pos_ >= text_.size())
        fail("unclosed '['", open);
      const char sep = text_[pos_];
      if (sep == ',') {
        ++pos_;
      } else if (sep == ';') {
        ++pos_;
        q.all_of.emplace_back();
      } else if (sep != ']') {
        fail(std::string("unexpected character '") + sep + "' in atom",
             pos_);
      }
    }
  }

  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
  Pattern *pattern_ = nullptr;
};

bool primitive_matches(const MolecularGraph &g, int atom,
                       const AtomPrimitive &p) {
  using Kind = AtomPrimitive::Kind;
  const Atom &a = g.atom(atom);
  bool r = false;
  switch (p.kind) {
  case Kind::kAny:
    r = true;
    break;
  case Kind::kElement:
    r = a.atomic_number == p.value
        && (p.aromatic < 0 || a.aromatic == (p.aromatic == 1));
    break;
  case Kind::kAromatic:
    r = a.aromatic;
    break;
  case Kind::kAliphatic:
    r = !a.aromatic;
    break;
  case Kind::kRing:
    r = g.atom_in_ring(atom);
    break;
  case Kind::kDegree:
    r = g.degree(atom) == p.value;
    break;
  case Kind::kHydrogens:
    r = a.total_h() == p.value;
    break;
  case Kind::kHasHydrogen:
    r = a.total_h() > 0;
    break;
  case Kind::kUnsaturated:
    for (const Neighbor &nb: g.neighbors(atom))
      r = r || g.bond(nb.bond).order != BondOrder::kSingle;
    break;
  case Kind::kHeteroNeighbors: {
    int hetero = 0;
    for (const Neighbor &nb: g.neighbors(atom))
      hetero += g.atom(nb.atom).atomic_number != 6;
    r = hetero == p.value;
    break;
  }
  case Kind::kCharge:
    r = a.formal_charge == p.value;
    break;
  case Kind::kRecursive:
    r = matches_at(g, *p.nested, atom);
    break;
  }
  return r != p.negated;
}

// Backtracking search over induced embeddings.
class Search {
public:
  Search(const MolecularGraph &g, const Pattern &p)
      : g_(g), p_(p), n_(p.num_atoms()), map_(n_, -1),
        used_(g.num_atoms(), 0),
        atom_ok_(static_cast<std::size_t>(n_) * g.num_atoms(), -1),
        bond_index_(static_cast<std::size_t>(n_) * n_, -1), anchor_(n_, -1) {
    for (std::size_t b = 0; b < p.bonds.size(); ++b) {
      const PatternBond &pb = p.bonds[b];
      bond_index_[pb.begin * n_ + pb.end] = static_cast<int>(b);
      bond_index_[pb.end * n_ + pb.begin] = static_cast<int>(b);
    }
    for (int i = 1; i < n_; ++i) {
      for (int j = 0; j < i && anchor_[i] < 0; ++j)
        if (bond_index_[i * n_ + j] >= 0)
          anchor_[i] = j;
      if (anchor_[i] < 0)
        throw std::invalid_argument("pattern is not connected: "
                                    + p.source);
    }
  }

  // Calls visit(map) for every embedding; visit returns true to stop.
  template <class Visit>
  void run(Visit &&visit, int first = -1) {
    if (n_ == 0)
      return;
    if (first >= 0) {
      if (ok(0, first))
        assign_and_extend(0, first, visit);
      return;
    }
    for (int t = 0; t < g_.num_atoms() && !stop_; ++t)
      if (ok(0, t))
        assign_and_extend(0, t, visit);
  }

private:
  bool ok(int i, int t) {
    std::int8_t &cached = atom_ok_[static_cast<std::size_t>(i)
                                   * g_.num_atoms() + t];
    if (cached < 0)
      cached = atom_matches(g_, t, p_.atoms[i]) ? 1 : 0;
    return cached == 1;
  }

  bool consistent(int i, int t) const {
    for (int j = 0; j < i; ++j) {
      const int pb = bond_index_[i * n_ + j];
      const int tb = g_.find_bond(t, map_[j]);
      if ((pb >= 0) != (tb >= 0))
        return false;
      if (pb >= 0 && !p_.bonds[pb].query.accepts(g_.bond(tb).order))
        return false;
    }
    return true;
  }

  template <class Visit>
  void assign_and_extend(int i, int t, Visit &visit) {
    map_[i] = t;
    used_[t] = 1;
    extend(i + 1, visit);
    used_[t] = 0;
    map_[i] = -1;
  }

  template <class Visit>
  void extend(int i, Visit &visit) {
    if (stop_)
      return;
    if (i == n_) {
      stop_ = visit(map_);
      return;
    }
    for (const Neighbor &nb: g_.neighbors(map_[anchor_[i]])) {
      const int t = nb.atom;
      if (used_[t] || !ok(i, t) || !consistent(i, t))
        continue;
      assign_and_extend(i, t, visit);
      if (stop_)
        return;
    }
  }

  const MolecularGraph &g_;
  const Pattern &p_;
  int n_;
  std::vector<int> map_;
  std::vector<char> used_;
  std::vector<std::int8_t> atom_ok_;
  std::vector<int> bond_index_;
  std::vector<int> anchor_;
  bool stop_ = false;
};

}  // namespace

PatternError::PatternError(const std::string &what, std::size_t offset)
    : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) { }

int Pattern::find_bond(int u, int v) const {
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if ((bonds[b].begin == u && bonds[b].end == v)
        || (bonds[b].begin == v && bonds[b].end == u))
      return static_cast<int>(b);
  }
  return -1;
}

Pattern parse_pattern(std::string_view text) {
  return PatternParser(text, 0).parse();
}

bool atom_matches(const MolecularGraph &g, int atom, const AtomQuery &query) {
  for (const auto &any_of: query.all_of) {
    bool hit = false;
    for (const AtomPrimitive &p: any_of) {
      if (primitive_matches(g, atom, p)) {
        hit = true;
        break;
      }
    }
    if (!hit)
      return false;
  }
  return true;
}

std::vector<std::vector<int>> match_atom_sets(const MolecularGraph &g,
                                              const Pattern &p) {
  std::set<std::vector<int>> sets;
  Search(g, p).run([&](const std::vector<int> &map) {
    std::vector<int> s = map;
    std::sort(s.begin(), s.end());
    sets.insert(std::move(s));
    return false;
  });
  return { sets.begin(), sets.end() };
}

int count_matches(const MolecularGraph &g, const Pattern &p) {
  return static_cast<int>(match_atom_sets(g, p).size());
}

bool matches_at(const MolecularGraph &g, const Pattern &p, int atom) {
  bool found = false;
  Search(g, p).run(
      [&](const std::vector<int> &) {
        found = true;
        return true;
      },
      atom);
  return found;
}

}  // namespace molprobe
