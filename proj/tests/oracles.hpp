#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "polylink/sampling.hpp"

namespace polylink::oracle {

inline long double log_binom_pmf(long n, long double p, long k) {
  return std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
         std::lgamma(static_cast<long double>(n - k) + 1) + k * std::log(p) + (n - k) * std::log1p(-p);
}

/// P[Bin(n, p) >= k] by direct summation of the mass function.
inline long double binom_upper_tail(long n, long double p, long k) {
  long double s = 0;
  for (long j = k; j <= n; ++j) s += std::exp(log_binom_pmf(n, p, j));
  return s;
}

/// P[Bin(n, p) <= k].
inline long double binom_lower_tail(long n, long double p, long k) {
  long double s = 0;
  for (long j = 0; j <= k; ++j) s += std::exp(log_binom_pmf(n, p, j));
  return s;
}

inline long double poisson_pmf(long double t, long k) {
  return std::exp(-t + k * std::log(t) - std::lgamma(static_cast<long double>(k) + 1));
}

/// P[Z_t <= k].
inline long double poisson_lower_tail(long double t, long k) {
  long double s = 0;
  for (long j = 0; j <= k; ++j) s += poisson_pmf(t, j);
  return s;
}

/// Bisection for y >= a with y H(a/y) = x, in long double.
inline long double hhat_bisect(long double a, long double x) {
  if (a == 0) return x;
  auto g = [&](long double y) { return y - a - a * std::log(y / a); };
  long double lo = a, hi = a + x + 20;
  while (g(hi) < x) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const long double mid = (lo + hi) / 2;
    (g(mid) < x ? lo : hi) = mid;
  }
  return lo;
}

inline double pair_distance(const PointCloud& c, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (int a = 0; a < c.dim(); ++a) {
    const double diff = c.point(i)[a] - c.point(j)[a];
    s += diff * diff;
  }
  return std::sqrt(s);
}

/// Longest edge of an MST by dense Prim.
inline double prim_longest_edge(const PointCloud& c) {
  const std::size_t n = c.size();
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<char> in_tree(n, 0);
  best[0] = 0.0;
  double longest = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
    in_tree[u] = 1;
    longest = std::max(longest, best[u]);
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v]) best[v] = std::min(best[v], pair_distance(c, u, v));
  }
  return longest;
}

/// Largest k-th nearest neighbour distance by sorting every row.
inline double knn_link(const PointCloud& c, std::size_t k) {
  const std::size_t n = c.size();
  if (n <= k) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.push_back(pair_distance(c, i, j));
    std::sort(row.begin(), row.end());
    worst = std::max(worst, row[k - 1]);
  }
  return worst;
}

/// Connectivity of the r-graph after deleting the vertices in `removed`.
inline bool connected_without(const PointCloud& c, double r, std::uint32_t removed) {
  const std::size_t n = c.size();
  std::vector<char> seen(n, 0);
  std::size_t start = n, alive = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (!(removed >> v & 1u)) {
      ++alive;
      if (start == n) start = v;
    }
  if (alive <= 1) return true;
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v)
      if (!seen[v] && !(removed >> v & 1u) && pair_distance(c, u, v) <= r) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == alive;
}

/// k-connectivity by deleting every vertex subset of size < k (n <= 20).
inline bool k_connected(const PointCloud& c, double r, std::size_t k) {
  const std::size_t n = c.size();
  if (n <= k) return false;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
    if (static_cast<std::size_t>(__builtin_popcount(mask)) < k && !connected_without(c, r, mask)) return false;
  return true;
}

/// Smallest pairwise distance at which the r-graph is k-connected.
inline double k_threshold(const PointCloud& c, std::size_t k) {
  const std::size_t n = c.size();
  if (n <= k) return std::numeric_limits<double>::infinity();
  std::vector<double> radii;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) radii.push_back(pair_distance(c, i, j));
  std::sort(radii.begin(), radii.end());
  for (double r : radii)
    if (k_connected(c, r, k)) return r;
  return std::numeric_limits<double>::infinity();
}

/// Vertex-disjoint s-t path count on a dense split network (Edmonds-Karp).
inline std::size_t disjoint_paths(const std::vector<std::vector<char>>& adj, std::size_t s, std::size_t t,
                                  std::size_t cap) {
  const std::size_t n = adj.size(), m = 2 * n;  // in(v) = 2v, out(v) = 2v + 1
  std::vector<std::vector<int>> c(m, std::vector<int>(m, 0));
  for (std::size_t v = 0; v < n; ++v) {
    c[2 * v][2 * v + 1] = (v == s || v == t) ? static_cast<int>(n) : 1;
    for (std::size_t w = 0; w < n; ++w)
      if (adj[v][w]) c[2 * v + 1][2 * w] = static_cast<int>(n);
  }
  std::size_t flow = 0;
  const std::size_t source = 2 * s + 1, sink = 2 * t;
  while (flow < cap) {
    std::vector<std::size_t> parent(m, m);
    parent[source] = source;
    std::vector<std::size_t> queue{source};
    for (std::size_t qi = 0; qi < queue.size() && parent[sink] == m; ++qi)
      for (std::size_t y = 0; y < m; ++y)
        if (parent[y] == m && c[queue[qi]][y] > 0) {
          parent[y] = queue[qi];
          queue.push_back(y);
        }
    if (parent[sink] == m) break;
    for (std::size_t y = sink; y != source; y = parent[y]) {
      --c[parent[y]][y];
      ++c[y][parent[y]];
    }
    ++flow;
  }
  return flow;
}

/// k-connectivity by Even's scheme: min degree, then k disjoint paths from
/// each of vertices 0..k-1 to every non-neighbour.
inline bool k_connected_flow(const PointCloud& c, double r, std::size_t k) {
  const std::size_t n = c.size();
  if (n <= k) return false;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i][j] = i != j && pair_distance(c, i, j) <= r;
  for (std::size_t i = 0; i < n; ++i)
    if (static_cast<std::size_t>(std::count(adj[i].begin(), adj[i].end(), 1)) < k) return false;
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (t != s && !adj[s][t] && disjoint_paths(adj, s, t, k) < k) return false;
  return true;
}

/// Uniform points in [0, 1]^d from std::mt19937_64, independent of the
/// library's sampler.
inline PointCloud random_cloud(std::mt19937_64& gen, int d, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  for (double& x : coords) x = u(gen);
  return PointCloud(d, std::move(coords));
}

/// Convex polygon: m distinct random angles on an ellipse, sorted.
inline std::vector<std::vector<double>> random_convex_polygon(std::mt19937_64& gen, int m) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> axis(0.5, 2.0);
  const double ax = axis(gen), ay = axis(gen);
  std::vector<double> angles(static_cast<std::size_t>(m));
  for (double& a : angles) a = u(gen);
  std::sort(angles.begin(), angles.end());
  std::vector<std::vector<double>> pts;
  for (double a : angles) pts.push_back({ax * std::cos(a), ay * std::sin(a)});
  return pts;
}

}  // namespace polylink::oracle
