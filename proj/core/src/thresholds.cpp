#include "polylink/thresholds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "polylink/error.hpp"
#include "polylink/kdtree.hpp"

namespace polylink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_, size_;
  std::size_t components_;
};

void require_k(std::size_t k, const char* op) {
  if (k < 1) throw DomainError(std::string(op) + ": requires k >= 1");
}

struct WeightedPair {
  std::size_t i, j;
  double dist;
};

// All pairs with distance in (lo, hi], sorted by distance then indices.
std::vector<WeightedPair> pairs_within(const PointCloud& cloud, const KdTree& tree, double lo, double hi) {
  std::vector<WeightedPair> out;
  std::vector<std::pair<std::size_t, double>> buf;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    buf.clear();
    tree.pairs_in_shell(i, lo, hi, buf);
    for (const auto& [j, dist] : buf) out.push_back({i, j, dist});
  }
  std::sort(out.begin(), out.end(), [](const WeightedPair& a, const WeightedPair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return out;
}

Graph graph_from_prefix(std::size_t n, const std::vector<WeightedPair>& pairs, std::size_t count) {
  Graph g(n);
  for (std::size_t e = 0; e < count; ++e) g.add_edge(pairs[e].i, pairs[e].j);
  return g;
}

// Biconnectivity: connected with no articulation point (iterative DFS lowpoints).
bool is_biconnected(const Graph& g) {
  const std::size_t n = g.size();
  if (n < 3 || !is_connected(g)) return false;
  std::vector<std::size_t> disc(n, 0), low(n, 0), parent(n, n), next_edge(n, 0);
  std::size_t timer = 0, root_children = 0;
  std::vector<std::size_t> stack{0};
  disc[0] = low[0] = ++timer;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    const auto& nb = g.neighbours(v);
    if (next_edge[v] < nb.size()) {
      const std::size_t w = nb[next_edge[v]++];
      if (disc[w] == 0) {
        parent[w] = v;
        disc[w] = low[w] = ++timer;
        if (v == 0) ++root_children;
        stack.push_back(w);
      } else if (w != parent[v]) {
        low[v] = std::min(low[v], disc[w]);
      }
      continue;
    }
    stack.pop_back();
    const std::size_t p = parent[v];
    if (p != n) {
      low[p] = std::min(low[p], low[v]);
      if (p != 0 && low[v] >= disc[p]) return false;
    }
  }
  return root_children < 2;
}

// Unit-capacity vertex-disjoint path search on the vertex-split network,
// with the flow stored implicitly: every vertex other than the source carries
// at most one unit, so one predecessor and one successor describe it. Only
// touched vertices are reset between queries, so local searches stay local.
class DisjointPaths {
 public:
  explicit DisjointPaths(const Graph& g)
      : g_(g), pred_(g.size(), kNone), succ_(g.size(), kNone), stamp_(2 * g.size(), 0), parent_(2 * g.size()) {}

  // At least k internally vertex-disjoint s-t paths (s, t non-adjacent).
  bool pair_linked(std::size_t s, std::size_t t, std::size_t k) {
    return augment_up_to(s, k, [&](std::size_t w) { return w == t; }, t);
  }

  // At least k paths from t to distinct vertices of the core, disjoint
  // except at t.
  bool fan_to_core(std::size_t t, std::size_t k, const std::vector<char>& core) {
    return augment_up_to(t, k, [&](std::size_t w) { return core[w] && pred_[w] == kNone; }, kNone);
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kSink = kNone - 1;
  // Node 2v is in(v), node 2v + 1 is out(v).
  static std::size_t in(std::size_t v) { return 2 * v; }
  static std::size_t out(std::size_t v) { return 2 * v + 1; }

  bool flows(std::size_t u, std::size_t w) const { return u == source_ ? pred_[w] == u : succ_[u] == w; }

  void touch(std::size_t v) { touched_.push_back(v); }

  // `terminal(w)` marks in(w) as the end of a path; `multi` is a terminal
  // that may absorb any number of paths (kNone for none).
  template <class Terminal>
  bool augment_up_to(std::size_t s, std::size_t k, Terminal terminal, std::size_t multi) {
    source_ = s;
    bool ok = true;
    for (std::size_t found = 0; found < k && ok; ++found) ok = augment(terminal, multi);
    for (auto v : touched_) pred_[v] = succ_[v] = kNone;
    touched_.clear();
    return ok;
  }

  template <class Terminal>
  bool augment(Terminal terminal, std::size_t multi) {
    ++epoch_;
    queue_.assign(1, out(source_));
    stamp_[out(source_)] = epoch_;
    std::size_t end = kNone;
    auto visit = [&](std::size_t node, std::size_t from) {
      if (stamp_[node] == epoch_) return;
      stamp_[node] = epoch_;
      parent_[node] = from;
      queue_.push_back(node);
    };
    for (std::size_t qi = 0; qi < queue_.size() && end == kNone; ++qi) {
      const std::size_t node = queue_[qi];
      const std::size_t v = node / 2;
      if (node == out(v)) {
        for (auto w : g_.neighbours(v)) {
          if (w == source_ || flows(v, w)) continue;
          if (stamp_[in(w)] == epoch_) continue;
          if (terminal(w)) {
            stamp_[in(w)] = epoch_;
            parent_[in(w)] = node;
            end = in(w);
            break;
          }
          visit(in(w), node);
        }
        // Undo the split arc of a used vertex.
        if (end == kNone && v != source_ && pred_[v] != kNone) visit(in(v), node);
      } else {
        if (pred_[v] == kNone) visit(out(v), node);  // split arc
        else visit(out(pred_[v]), node);             // cancel pred -> v
      }
    }
    if (end == kNone) return false;

    const std::size_t sink_vertex = end / 2;
    if (sink_vertex != multi) {
      succ_[sink_vertex] = kSink;
      touch(sink_vertex);
    }
    // Sets are unconditional, clears only remove the arc they cancel.
    for (std::size_t node = end; node != out(source_);) {
      const std::size_t prev = parent_[node];
      const std::size_t a = prev / 2, b = node / 2;
      if (prev == out(a) && node == in(b) && a != b) {  // push a -> b
        if (a != source_) succ_[a] = b;
        if (b != multi) pred_[b] = a;
        touch(a);
        touch(b);
      } else if (prev == in(a) && node == out(b) && a != b) {  // cancel b -> a
        if (b != source_ && succ_[b] == a) succ_[b] = kNone;
        if (pred_[a] == b) pred_[a] = kNone;
      }
      node = prev;
    }
    return true;
  }

  const Graph& g_;
  std::vector<std::size_t> pred_, succ_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> queue_, touched_;
  std::uint32_t epoch_ = 0;
  std::size_t source_ = 0;
};

// Shared neighbours give disjoint paths of length two.
std::size_t common_neighbours(const Graph& g, std::size_t s, std::size_t t, std::vector<char>& mark) {
  for (auto w : g.neighbours(s)) mark[w] = 1;
  std::size_t c = 0;
  for (auto w : g.neighbours(t)) c += mark[w];
  for (auto w : g.neighbours(s)) mark[w] = 0;
  return c;
}

}  // namespace

// ---------------------------------------------------------------- graph

Graph::Graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) : adj_(n) {
  for (const auto& [u, v] : edges) add_edge(u, v);
}

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u == v) return;
  adj_[u].push_back(v);
  adj_[v].push_back(u);
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.size();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : g.neighbours(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

bool is_k_vertex_connected(const Graph& g, std::size_t k) {
  const std::size_t n = g.size();
  if (k < 1) throw DomainError("is_k_vertex_connected: requires k >= 1");
  if (n <= k) return false;
  for (std::size_t v = 0; v < n; ++v)
    if (g.neighbours(v).size() < k) return false;
  if (k == 1) return is_connected(g);
  if (k == 2) return is_biconnected(g);

  // Grow a core C that no set X of fewer than k vertices can split: a seed
  // of k + 1 pairwise linked vertices, then any vertex with k neighbours in C
  // (expansion lemma) or with k paths to distinct vertices of C, disjoint
  // except at the start. A failed path count exhibits a separator X of size
  // below k that cuts a vertex off from the rest of C, so the graph is not
  // k-connected.
  DisjointPaths paths(g);
  std::vector<char> mark(n, 0), core(n, 0);
  std::size_t seed = 0;
  for (std::size_t v = 1; v < n; ++v)
    if (g.neighbours(v).size() > g.neighbours(seed).size()) seed = v;
  std::vector<std::size_t> members{seed};
  for (auto w : g.neighbours(seed))
    if (members.size() < k + 1 && std::find(members.begin(), members.end(), w) == members.end()) members.push_back(w);
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const std::size_t u = members[a], w = members[b];
      const auto& nu = g.neighbours(u);
      if (std::find(nu.begin(), nu.end(), w) != nu.end()) continue;
      if (common_neighbours(g, u, w, mark) < k && !paths.pair_linked(u, w, k)) return false;
    }

  std::vector<std::size_t> in_core(n, 0), queue;
  std::size_t size = 0;
  auto join = [&](std::size_t v) {
    core[v] = 1;
    ++size;
    for (auto w : g.neighbours(v))
      if (!core[w] && ++in_core[w] == k) queue.push_back(w);
  };
  for (auto v : members) join(v);
  std::size_t next = 0;
  while (size < n) {
    while (!queue.empty()) {
      const auto v = queue.back();
      queue.pop_back();
      if (!core[v]) join(v);
    }
    if (size == n) break;
    while (core[next]) ++next;
    if (!paths.fan_to_core(next, k, core)) return false;
    join(next);
  }
  return true;
}

Graph geometric_graph(const PointCloud& cloud, double r) {
  Graph g(cloud.size());
  KdTree tree(cloud);
  std::vector<std::size_t> buf;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    buf.clear();
    tree.neighbours_within(i, r, buf);
    for (auto j : buf)
      if (j > i) g.add_edge(i, j);
  }
  return g;
}

// ---------------------------------------------------------------- thresholds

KnnLink find_largest_k_nn_link(const PointCloud& cloud, std::size_t k) {
  require_k(k, "largest_k_nn_link");
  const std::size_t n = cloud.size();
  if (n <= k) return {kInf, std::nullopt};
  KdTree tree(cloud);
  KnnLink best{-1.0, std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    const double kth = tree.nearest_distances(i, k).back();
    if (kth > best.value) best = {kth, i};
  }
  return best;
}

double largest_k_nn_link(const PointCloud& cloud, std::size_t k) { return find_largest_k_nn_link(cloud, k).value; }

bool is_k_connected(const PointCloud& cloud, double r, std::size_t k) {
  require_k(k, "is_k_connected");
  if (!(r >= 0.0)) throw DomainError("is_k_connected: requires r >= 0");
  if (cloud.size() <= k) return false;
  return is_k_vertex_connected(geometric_graph(cloud, r), k);
}

double longest_mst_edge(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  if (n < 2) throw DomainError("longest_mst_edge: requires n >= 2");
  KdTree tree(cloud);
  // Kruskal on all pairs up to a radius; once that graph is connected, its
  // MST is an MST of the complete graph.
  double r = largest_k_nn_link(cloud, 1);
  if (r == 0.0) r = std::numeric_limits<double>::min();
  for (;;) {
    const auto pairs = pairs_within(cloud, tree, -1.0, r);
    UnionFind uf(n);
    for (const auto& p : pairs)
      if (uf.unite(p.i, p.j) && uf.components() == 1) return p.dist;
    r *= 1.5;
  }
}

double k_connectivity_threshold(const PointCloud& cloud, std::size_t k, const ThresholdOptions& options) {
  require_k(k, "k_connectivity_threshold");
  const std::size_t n = cloud.size();
  if (n <= k) return kInf;
  if (k == 1 && options.mst_fast_path) return longest_mst_edge(cloud);

  // Bracket the threshold between a failing radius lo and a passing radius hi,
  // starting from L (a lower bound and itself a pairwise distance), then
  // binary-search the pairwise distances in (lo, hi].
  KdTree tree(cloud);
  const double lower = largest_k_nn_link(cloud, k);
  auto connected_at = [&](double r) {
    const auto pairs = pairs_within(cloud, tree, -1.0, r);
    return is_k_vertex_connected(graph_from_prefix(n, pairs, pairs.size()), k);
  };
  if (connected_at(lower)) return lower;
  double lo = lower;
  double hi = lower > 0.0 ? lower : std::numeric_limits<double>::min();
  do {
    lo = std::max(lo, hi);
    hi *= 1.25;
  } while (!connected_at(hi));

  const auto pairs = pairs_within(cloud, tree, -1.0, hi);
  // Candidate radii: ends of runs of equal distances above lo.
  std::vector<std::size_t> cuts;
  for (std::size_t e = 0; e < pairs.size(); ++e)
    if (pairs[e].dist > lo && (e + 1 == pairs.size() || pairs[e + 1].dist != pairs[e].dist)) cuts.push_back(e + 1);
  std::size_t first = 0, last = cuts.size() - 1;  // cuts[last] is known to pass
  while (first < last) {
    const std::size_t mid = first + (last - first) / 2;
    if (is_k_vertex_connected(graph_from_prefix(n, pairs, cuts[mid]), k)) last = mid;
    else first = mid + 1;
  }
  return pairs[cuts[first] - 1].dist;
}

ThresholdReport compute_thresholds(const PointCloud& cloud, std::size_t k, bool want_L, bool want_M,
                                   const ThresholdOptions& options) {
  require_k(k, "compute_thresholds");
  const auto start = std::chrono::steady_clock::now();
  ThresholdReport report;
  report.n = cloud.size();
  report.k = k;
  if (want_L) {
    const auto link = find_largest_k_nn_link(cloud, k);
    report.L = link.value;
    report.witness_L = link.witness;
  }
  if (want_M) report.M = k_connectivity_threshold(cloud, k, options);
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------- oracles

double brute_force_L(const PointCloud& cloud, std::size_t k) {
  require_k(k, "brute_force_L");
  const std::size_t n = cloud.size();
  if (n <= k) return kInf;
  double best = -1.0;
  std::vector<double> dists(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) dists[m++] = distance(cloud.point(i), cloud.point(j));
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1), dists.end());
    best = std::max(best, dists[k - 1]);
  }
  return best;
}

bool brute_force_is_k_connected(const PointCloud& cloud, double r, std::size_t k) {
  require_k(k, "brute_force_is_k_connected");
  if (!(r >= 0.0)) throw DomainError("brute_force_is_k_connected: requires r >= 0");
  const std::size_t n = cloud.size();
  if (n > 16) throw SizeGuardError("brute_force_is_k_connected: n > 16 (" + std::to_string(n) + ")");
  if (n <= k) return false;
  std::vector<unsigned> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && distance(cloud.point(i), cloud.point(j)) <= r) adj[i] |= 1U << j;
  const unsigned all = (1U << n) - 1U;
  auto connected = [&](unsigned alive) {
    const unsigned start = alive & (~alive + 1U);
    unsigned seen = start, frontier = start;
    while (frontier) {
      unsigned next = 0;
      for (std::size_t v = 0; v < n; ++v)
        if (frontier & (1U << v)) next |= adj[v];
      next &= alive & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen == alive;
  };
  for (unsigned removed = 0; removed <= all; ++removed) {
    if (static_cast<std::size_t>(__builtin_popcount(removed)) > k - 1) continue;
    if (!connected(all & ~removed)) return false;
  }
  return true;
}

}  // namespace polylink
