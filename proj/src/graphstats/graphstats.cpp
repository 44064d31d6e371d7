//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molprobe/graphstats/graphstats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "molprobe/molgraph/rings.h"

namespace molprobe {

namespace {

void check_atom(const MolecularGraph &g, int u) {
  if (u < 0 || u >= g.num_atoms())
    throw std::out_of_range("atom index " + std::to_string(u)
                            + " out of range");
}

std::vector<int> bfs_distances(const MolecularGraph &g, int source) {
  std::vector<int> dist(g.num_atoms(), -1);
  std::queue<int> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop();
    for (const Neighbor &nb: g.neighbors(u)) {
      if (dist[nb.atom] < 0) {
        dist[nb.atom] = dist[u] + 1;
        queue.push(nb.atom);
      }
    }
  }
  return dist;
}

// Unit-capacity flow network with every atom split into in/out halves, so
// that a max flow between two atoms counts internally disjoint paths.
class SplitFlow {
public:
  explicit SplitFlow(const MolecularGraph &g): n_(g.num_atoms()) {
    head_.assign(2 * n_, -1);
    for (int i = 0; i < n_; ++i)
      add_edge(2 * i, 2 * i + 1, 1);
    for (const Bond &b: g.bonds()) {
      add_edge(2 * b.begin + 1, 2 * b.end, kInf);
      add_edge(2 * b.end + 1, 2 * b.begin, kInf);
    }
    original_ = cap_;
  }

  // Number of internally disjoint s-t paths, stopping once `limit` is hit.
  int disjoint_paths(int s, int t, int limit) {
    cap_ = original_;
    const int source = 2 * s + 1, sink = 2 * t;
    int flow = 0;
    std::vector<int> parent_edge(2 * n_);
    while (flow < limit) {
      std::fill(parent_edge.begin(), parent_edge.end(), -1);
      std::queue<int> queue;
      queue.push(source);
      parent_edge[source] = -2;
      while (!queue.empty() && parent_edge[sink] == -1) {
        int x = queue.front();
        queue.pop();
        for (int e = head_[x]; e >= 0; e = next_[e]) {
          int y = to_[e];
          if (cap_[e] > 0 && parent_edge[y] == -1) {
            parent_edge[y] = e;
            queue.push(y);
          }
        }
      }
      if (parent_edge[sink] == -1)
        break;
      for (int y = sink; y != source;) {
        int e = parent_edge[y];
        cap_[e] -= 1;
        cap_[e ^ 1] += 1;
        y = to_[e ^ 1];
      }
      ++flow;
    }
    return flow;
  }

private:
  static constexpr int kInf = std::numeric_limits<int>::max() / 4;

  void add_edge(int from, int to, int cap) {
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[from]);
    head_[from] = static_cast<int>(to_.size()) - 1;
    to_.push_back(from);
    cap_.push_back(0);
    next_.push_back(head_[to]);
    head_[to] = static_cast<int>(to_.size()) - 1;
  }

  int n_;
  std::vector<int> head_, to_, next_, cap_, original_;
};

}  // namespace

CentralityError::CentralityError(int iterations)
    : std::runtime_error("eigenvector centrality did not converge after "
                         + std::to_string(iterations) + " iterations"),
      iterations_(iterations) { }

std::vector<int> node_degree(const MolecularGraph &g) {
  std::vector<int> deg(g.num_atoms());
  for (int i = 0; i < g.num_atoms(); ++i)
    deg[i] = g.degree(i);
  return deg;
}

std::vector<double> eigenvector_centrality(const MolecularGraph &g,
                                           CentralityOptions options) {
  const int n = g.num_atoms();
  std::vector<double> out(n, 0.0);
  if (n == 0)
    return out;

  std::vector<int> comp = g.largest_component();
  const int k = static_cast<int>(comp.size());
  if (k == 1) {
    out[comp[0]] = 1.0;
    return out;
  }

  std::vector<int> local(n, -1);
  for (int i = 0; i < k; ++i)
    local[comp[i]] = i;

  // Two-colour the component to detect bipartiteness.
  std::vector<int> colour(k, -1);
  bool bipartite = true;
  colour[0] = 0;
  std::queue<int> queue;
  queue.push(0);
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop();
    for (const Neighbor &nb: g.neighbors(comp[i])) {
      int j = local[nb.atom];
      if (colour[j] < 0) {
        colour[j] = 1 - colour[i];
        queue.push(j);
      } else if (colour[j] == colour[i]) {
        bipartite = false;
      }
    }
  }

  std::vector<double> x(k, 1.0 / std::sqrt(static_cast<double>(k))), y(k);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    double norm = 0.0;
    for (int i = 0; i < k; ++i) {
      double s = bipartite ? x[i] : 0.0;
      for (const Neighbor &nb: g.neighbors(comp[i]))
        s += x[local[nb.atom]];
      y[i] = s;
      norm += s * s;
    }
    norm = std::sqrt(norm);
    double change = 0.0;
    for (int i = 0; i < k; ++i) {
      y[i] /= norm;
      change = std::max(change, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (change < options.tolerance) {
      for (int i = 0; i < k; ++i)
        out[comp[i]] = x[i];
      return out;
    }
  }
  throw CentralityError(options.max_iterations);
}

std::vector<double> clustering_coefficient(const MolecularGraph &g) {
  std::vector<double> out(g.num_atoms(), 0.0);
  for (int u = 0; u < g.num_atoms(); ++u) {
    auto nbrs = g.neighbors(u);
    const int d = static_cast<int>(nbrs.size());
    if (d < 2)
      continue;
    int closed = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        closed += g.adjacent(nbrs[i].atom, nbrs[j].atom);
    out[u] = closed / (d * (d - 1) / 2.0);
  }
  return out;
}

int link_label(const MolecularGraph &g, int u, int v) {
  check_atom(g, u);
  check_atom(g, v);
  if (u == v)
    throw std::invalid_argument("link label needs two distinct atoms");
  return g.adjacent(u, v) ? 1 : 0;
}

double jaccard(const MolecularGraph &g, int u, int v) {
  check_atom(g, u);
  check_atom(g, v);
  if (u == v)
    throw std::invalid_argument("jaccard needs two distinct atoms");
  // Neighbour lists are sorted by atom index.
  auto a = g.neighbors(u), b = g.neighbors(v);
  std::size_t i = 0, j = 0;
  int common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].atom < b[j].atom) {
      ++i;
    } else if (b[j].atom < a[i].atom) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const int uni = static_cast<int>(a.size() + b.size()) - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / uni;
}

std::vector<double> katz_row(const MolecularGraph &g, int u, int length,
                             double beta) {
  check_atom(g, u);
  if (length < 0)
    throw std::invalid_argument("katz length must be non-negative");
  if (!(beta > 0.0))
    throw std::invalid_argument("katz beta must be positive");

  const int n = g.num_atoms();
  std::vector<double> walks(n, 0.0), next(n), score(n, 0.0);
  walks[u] = 1.0;
  double weight = 1.0;
  for (int step = 1; step <= length; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int x = 0; x < n; ++x) {
      if (walks[x] == 0.0)
        continue;
      for (const Neighbor &nb: g.neighbors(x))
        next[nb.atom] += walks[x];
    }
    walks.swap(next);
    weight *= beta;
    for (int x = 0; x < n; ++x)
      score[x] += weight * walks[x];
  }
  return score;
}

double katz_truncated(const MolecularGraph &g, int u, int v, int length,
                      double beta) {
  check_atom(g, v);
  return katz_row(g, u, length, beta)[v];
}

int diameter(const MolecularGraph &g) {
  int best = 0;
  for (int s: g.largest_component()) {
    for (int d: bfs_distances(g, s))
      best = std::max(best, d);
  }
  return best;
}

int cycle_count(const MolecularGraph &g) {
  return static_cast<int>(minimum_cycle_basis(g).size());
}

int connectivity(const MolecularGraph &g) {
  const int n = g.num_atoms();
  if (n < 2)
    throw std::invalid_argument("connectivity needs at least two atoms");
  if (g.num_components() > 1)
    return 0;
  if (g.num_bonds() == n * (n - 1) / 2)
    return n - 1;

  int best = n - 1;
  for (int u = 0; u < n; ++u)
    best = std::min(best, g.degree(u));

  SplitFlow flow(g);
  for (int s = 0; s < n && best > 1; ++s) {
    for (int t = s + 1; t < n && best > 1; ++t) {
      if (g.adjacent(s, t))
        continue;
      best = std::min(best, flow.disjoint_paths(s, t, best));
    }
  }
  return best;
}

std::optional<double> assortativity(const MolecularGraph &g) {
  if (g.num_bonds() == 0)
    return std::nullopt;
  double sum = 0.0;
  for (const Bond &b: g.bonds())
    sum += g.degree(b.begin) + g.degree(b.end);
  const double mean = sum / (2.0 * g.num_bonds());
  double cov = 0.0, var = 0.0;
  for (const Bond &b: g.bonds()) {
    double x = g.degree(b.begin) - mean, y = g.degree(b.end) - mean;
    cov += 2.0 * x * y;
    var += x * x + y * y;
  }
  if (var == 0.0)
    return std::nullopt;
  return cov / var;
}

NodeStats compute_node_stats(const MolecularGraph &g,
                             CentralityOptions options) {
  return { node_degree(g), eigenvector_centrality(g, options),
           clustering_coefficient(g) };
}

PairStats compute_pair_stats(const MolecularGraph &g, int u, int v,
                             int katz_length, double katz_beta) {
  const int length = katz_length < 0 ? g.num_atoms() : katz_length;
  return { link_label(g, u, v), jaccard(g, u, v),
           katz_truncated(g, u, v, length, katz_beta) };
}

GraphStats compute_graph_stats(const MolecularGraph &g) {
  GraphStats s;
  s.diameter = diameter(g);
  s.cycle_count = cycle_count(g);
  if (g.num_atoms() >= 2)
    s.connectivity = connectivity(g);
  s.assortativity = assortativity(g);
  return s;
}

}  // namespace molprobe
