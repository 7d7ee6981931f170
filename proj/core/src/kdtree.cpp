#include "polylink/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace polylink {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

KdTree::KdTree(const PointCloud& cloud, std::size_t leaf_size)
    : cloud_(cloud), leaf_size_(std::max<std::size_t>(leaf_size, 1)), order_(cloud.size()) {
  std::iota(order_.begin(), order_.end(), 0);
  if (!order_.empty()) {
    nodes_.reserve(2 * (cloud.size() / leaf_size_ + 1));
    build(0, order_.size());
  }
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const int d = cloud_.dim();
  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{begin, end, -1, 0.0, 0, 0, {}, {}});
  std::vector<double> lo(d, std::numeric_limits<double>::infinity()), hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t p = begin; p < end; ++p) {
    const auto x = cloud_.point(order_[p]);
    for (int a = 0; a < d; ++a) {
      lo[a] = std::min(lo[a], x[a]);
      hi[a] = std::max(hi[a], x[a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < d; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  const bool leaf = end - begin <= leaf_size_ || hi[axis] == lo[axis];
  nodes_[id].lo = std::move(lo);
  nodes_[id].hi = std::move(hi);
  if (leaf) return id;

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                     return cloud_.point(a)[axis] < cloud_.point(b)[axis];
                   });
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = cloud_.point(order_[mid])[axis];
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::box_distance_sq(const Node& node, std::span<const double> q) const {
  double s = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    double diff = 0.0;
    if (q[a] < node.lo[a]) diff = node.lo[a] - q[a];
    else if (q[a] > node.hi[a]) diff = q[a] - node.hi[a];
    s += diff * diff;
  }
  return s;
}

double KdTree::box_max_distance_sq(const Node& node, std::span<const double> q) const {
  double s = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    const double diff = std::max(std::abs(q[a] - node.lo[a]), std::abs(q[a] - node.hi[a]));
    s += diff * diff;
  }
  return s;
}

// Pruning uses squared box distances with a small relative slack; the
// reported values always come from distance() so they match brute force.
namespace {
constexpr double kSlack = 1.0 + 1e-12;
}

std::vector<double> KdTree::nearest_distances(std::size_t i, std::size_t k) const {
  std::vector<double> heap;  // max-heap of the best k distances
  if (k == 0 || nodes_.empty()) return heap;
  heap.reserve(k + 1);
  const auto q = cloud_.point(i);
  std::vector<std::size_t> stack{0};
  auto bound_sq = [&] {
    if (heap.size() < k) return std::numeric_limits<double>::infinity();
    return heap.front() * heap.front() * kSlack;
  };
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance_sq(node, q) > bound_sq()) continue;
    if (node.axis < 0) {
      for (std::size_t p = node.begin; p < node.end; ++p) {
        const auto j = order_[p];
        if (j == i) continue;
        const double dist = distance(q, cloud_.point(j));
        if (heap.size() < k) {
          heap.push_back(dist);
          std::push_heap(heap.begin(), heap.end());
        } else if (dist < heap.front()) {
          std::pop_heap(heap.begin(), heap.end());
          heap.back() = dist;
          std::push_heap(heap.begin(), heap.end());
        }
      }
      continue;
    }
    // Visit the nearer child first.
    const bool go_left = q[node.axis] < node.split;
    stack.push_back(go_left ? node.right : node.left);
    stack.push_back(go_left ? node.left : node.right);
  }
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

void KdTree::pairs_in_shell(std::size_t i, double lo, double hi,
                            std::vector<std::pair<std::size_t, double>>& out) const {
  if (nodes_.empty()) return;
  const auto q = cloud_.point(i);
  const double hi_sq = hi * hi * kSlack;
  const double lo_sq = lo * lo / kSlack;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance_sq(node, q) > hi_sq) continue;
    if (lo > 0.0 && box_max_distance_sq(node, q) < lo_sq) continue;
    if (node.axis < 0) {
      for (std::size_t p = node.begin; p < node.end; ++p) {
        const auto j = order_[p];
        if (j <= i) continue;
        const double dist = distance(q, cloud_.point(j));
        if (dist > lo && dist <= hi) out.emplace_back(j, dist);
      }
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
}

void KdTree::neighbours_within(std::size_t i, double r, std::vector<std::size_t>& out) const {
  if (nodes_.empty()) return;
  const auto q = cloud_.point(i);
  const double r_sq = r * r * kSlack;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance_sq(node, q) > r_sq) continue;
    if (node.axis < 0) {
      for (std::size_t p = node.begin; p < node.end; ++p) {
        const auto j = order_[p];
        if (j != i && distance(q, cloud_.point(j)) <= r) out.push_back(j);
      }
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
}

}  // namespace polylink
