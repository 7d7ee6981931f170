#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "polylink/sampling.hpp"

namespace polylink {

/// Largest k-nearest-neighbour link with the point attaining it (lowest index
/// on ties). value is +inf and witness empty when n <= k.
struct KnnLink {
  double value;
  std::optional<std::size_t> witness;
};

struct ThresholdReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<double> L;  // empty when not requested
  std::optional<double> M;
  std::optional<std::size_t> witness_L;
  double elapsed_seconds = 0.0;
};

struct ThresholdOptions {
  /// k = 1 threshold via the longest MST edge instead of the generic search.
  bool mst_fast_path = true;
};

KnnLink find_largest_k_nn_link(const PointCloud& cloud, std::size_t k);

/// max over points of the distance to the k-th nearest other point; +inf when
/// n <= k.
double largest_k_nn_link(const PointCloud& cloud, std::size_t k);

/// Whether the geometric graph with edges at distance <= r is k-connected.
/// A graph on at most k vertices is never k-connected.
bool is_k_connected(const PointCloud& cloud, double r, std::size_t k);

/// Smallest pairwise distance r at which the geometric graph is k-connected;
/// +inf when n <= k.
double k_connectivity_threshold(const PointCloud& cloud, std::size_t k, const ThresholdOptions& options = {});

/// Longest edge of a Euclidean minimum spanning tree (n >= 2).
double longest_mst_edge(const PointCloud& cloud);

ThresholdReport compute_thresholds(const PointCloud& cloud, std::size_t k, bool want_L = true, bool want_M = true,
                                   const ThresholdOptions& options = {});

// O(n^2) reference implementations.
double brute_force_L(const PointCloud& cloud, std::size_t k);
/// Checks every vertex subset of size <= k-1 for disconnection; n <= 16.
bool brute_force_is_k_connected(const PointCloud& cloud, double r, std::size_t k);

/// Undirected graph in adjacency-list form.
class Graph {
 public:
  explicit Graph(std::size_t n) : adj_(n) {}
  Graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  void add_edge(std::size_t u, std::size_t v);
  std::size_t size() const { return adj_.size(); }
  const std::vector<std::size_t>& neighbours(std::size_t v) const { return adj_[v]; }

 private:
  std::vector<std::vector<std::size_t>> adj_;
};

bool is_connected(const Graph& g);
/// Vertex connectivity at least k; at most k vertices is never k-connected.
bool is_k_vertex_connected(const Graph& g, std::size_t k);
/// Geometric graph with edges at distance <= r.
Graph geometric_graph(const PointCloud& cloud, double r);

}  // namespace polylink
