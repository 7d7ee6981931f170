#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "polylink/sampling.hpp"

namespace polylink {

/// Euclidean distance. Every threshold routine measures through this one
/// function so that fast paths and oracles compare identical values.
double distance(std::span<const double> a, std::span<const double> b);

/// Static kd-tree over a point cloud for exact neighbour queries. Holds a
/// reference to the cloud, which must outlive it.
class KdTree {
 public:
  explicit KdTree(const PointCloud& cloud, std::size_t leaf_size = 8);

  /// Distances from point `i` to its `k` nearest other points, ascending.
  /// Returns fewer than k entries when the cloud has fewer other points.
  std::vector<double> nearest_distances(std::size_t i, std::size_t k) const;

  /// Indices j > i with distance(i, j) in (lo, hi], paired with the distance.
  void pairs_in_shell(std::size_t i, double lo, double hi, std::vector<std::pair<std::size_t, double>>& out) const;

  /// Indices j != i with distance(i, j) <= r.
  void neighbours_within(std::size_t i, double r, std::vector<std::size_t>& out) const;

 private:
  struct Node {
    std::size_t begin, end;  // range in order_
    int axis = -1;           // -1 for leaves
    double split = 0.0;
    std::size_t left = 0, right = 0;
    std::vector<double> lo, hi;  // bounding box of the node's points
  };

  std::size_t build(std::size_t begin, std::size_t end);
  double box_distance_sq(const Node& node, std::span<const double> q) const;
  double box_max_distance_sq(const Node& node, std::span<const double> q) const;

  const PointCloud& cloud_;
  std::size_t leaf_size_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace polylink
