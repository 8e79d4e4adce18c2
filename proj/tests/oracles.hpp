// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include "reldom/word.hpp"

#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace reldom::testing {

/// Free reduction by repeated full scans for an adjacent inverse pair.
inline std::vector<Letter> naive_reduce(std::vector<Letter> letters) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
      if (letters[i] == inverse_letter(letters[i + 1])) {
        letters.erase(letters.begin() + i, letters.begin() + i + 2);
        changed = true;
        break;
      }
    }
  }
  return letters;
}

/// Explicit combinatorial horoball over a path base: vertices (i, level) for
/// i in [0, width) and level in [0, depth]; BFS gives exact distances.
class HoroballGraphOracle {
 public:
  HoroballGraphOracle(int width, int depth) : width_(width), depth_(depth) {
    adjacency_.resize(static_cast<std::size_t>(width_) * (depth_ + 1));
    for (int k = 0; k <= depth_; ++k) {
      const long reach = 1L << std::min(k, 30);
      for (int i = 0; i < width_; ++i) {
        if (k < depth_) add_edge(id(i, k), id(i, k + 1));
        for (long j = 1; j <= reach && i + j < width_; ++j)
          add_edge(id(i, k), id(i + static_cast<int>(j), k));
      }
    }
  }

  int id(int base, int level) const { return level * width_ + base; }

  int bfs_distance(int from, int to) const {
    std::vector<int> dist(adjacency_.size(), -1);
    std::queue<int> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      if (u == to) return dist[u];
      for (int v : adjacency_[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    return -1;
  }

  std::vector<int> bfs_all(int from) const {
    std::vector<int> dist(adjacency_.size(), -1);
    std::queue<int> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adjacency_[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    return dist;
  }

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }

 private:
  void add_edge(int u, int v) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }

  int width_, depth_;
  std::vector<std::vector<int>> adjacency_;
};

/// Moduli of the roots of the characteristic polynomial of a real 3x3
/// matrix, via the cubic formula; sorted nonincreasing.
inline std::vector<double> cubic_eigen_moduli(double trace, double minor_sum, double det) {
  // roots of x^3 - trace x^2 + minor_sum x - det
  const std::complex<double> a(1, 0), b(-trace, 0), c(minor_sum, 0), d(-det, 0);
  const std::complex<double> d0 = b * b - 3.0 * a * c;
  const std::complex<double> d1 = 2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d;
  std::complex<double> inner = std::sqrt(d1 * d1 - 4.0 * d0 * d0 * d0);
  std::complex<double> big = std::pow((d1 + inner) / 2.0, 1.0 / 3.0);
  if (std::abs(big) < 1e-30) big = std::pow((d1 - inner) / 2.0, 1.0 / 3.0);
  const std::complex<double> omega(-0.5, std::sqrt(3.0) / 2.0);
  std::vector<double> moduli;
  std::complex<double> zeta = big;
  for (int k = 0; k < 3; ++k) {
    const std::complex<double> root =
        (std::abs(zeta) < 1e-30) ? -b / (3.0 * a)
                                 : -(b + zeta + d0 / zeta) / (3.0 * a);
    moduli.push_back(std::abs(root));
    zeta *= omega;
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<double>());
  return moduli;
}

/// Floyd length of the unique tree path between g and h in a free group:
/// the sum of f(max word length) over the edges of the geodesic through the
/// common prefix.
template <typename F>
double tree_floyd_distance(const Word& g, const Word& h, const F& f) {
  std::size_t common = 0;
  while (common < g.size() && common < h.size() && g.letter(common) == h.letter(common))
    ++common;
  double total = 0;
  for (std::size_t k = g.size(); k > common; --k) total += f(static_cast<long>(k));
  for (std::size_t k = common + 1; k <= h.size(); ++k) total += f(static_cast<long>(k));
  return total;
}

}  // namespace reldom::testing
