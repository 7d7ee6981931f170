#include "polylink/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "polylink/error.hpp"
#include "polylink/random.hpp"

namespace polylink {

namespace {

constexpr double kPi = std::numbers::pi;

using VertexSet = std::vector<std::size_t>;

struct RawFace {
  int dimension;
  VertexSet vertices;
};

// Everything a generator knows before the common lattice pass.
struct RawPolytope {
  int dim = 0;
  ShapeKind shape = ShapeKind::hypercube;
  std::string name;
  std::vector<Point> vertices;
  std::vector<Halfspace> halfspaces;
  std::vector<RawFace> faces;  // excluding the full face
  double volume = 0.0;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Point sub(std::span<const double> a, std::span<const double> b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Point cross3(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Point normalized(Point v) {
  const double n = norm(v);
  for (double& x : v) x /= n;
  return v;
}

Point centroid(const std::vector<Point>& pts, const VertexSet& ids) {
  Point c(pts.front().size(), 0.0);
  for (auto id : ids)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += pts[id][i];
  for (double& x : c) x /= static_cast<double>(ids.size());
  return c;
}

double diameter_of(const std::vector<Point>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, norm(sub(pts[i], pts[j])));
  return best;
}

int affine_rank(const std::vector<Point>& pts, double tol) {
  if (pts.empty()) return -1;
  const auto d = static_cast<Eigen::Index>(pts.front().size());
  Eigen::MatrixXd diffs(d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (Eigen::Index i = 0; i < d; ++i) diffs(i, static_cast<Eigen::Index>(j)) = pts[j][i] - pts[0][i];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

// Outward unit hyperplane through d affinely independent points, oriented
// away from `inside`.
Halfspace hyperplane_through(const std::vector<Point>& pts, const Point& inside) {
  const auto d = static_cast<Eigen::Index>(inside.size());
  Eigen::MatrixXd diffs(static_cast<Eigen::Index>(pts.size()) - 1, d);
  for (std::size_t r = 1; r < pts.size(); ++r)
    for (Eigen::Index c = 0; c < d; ++c) diffs(static_cast<Eigen::Index>(r) - 1, c) = pts[r][c] - pts[0][c];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
  Eigen::MatrixXd kernel = lu.kernel();
  Point n(static_cast<std::size_t>(d));
  for (Eigen::Index c = 0; c < d; ++c) n[c] = kernel(c, 0);
  n = normalized(std::move(n));
  double offset = dot(n, pts[0]);
  if (dot(n, inside) > offset) {
    for (double& x : n) x = -x;
    offset = -offset;
  }
  return {std::move(n), offset};
}

// ---------------------------------------------------------------- generators

RawPolytope make_box(const std::vector<double>& sides, ShapeKind shape) {
  const int d = static_cast<int>(sides.size());
  if (d < 1) throw ConstructionError("box: dimension must be >= 1");
  if (d > 12) throw UnsupportedDimensionError("box: dimension > 12 is not supported");
  for (double s : sides)
    if (!(s > 0.0) || !std::isfinite(s)) throw ConstructionError("box: side lengths must be positive");

  RawPolytope raw;
  raw.dim = d;
  raw.shape = shape;
  const std::size_t nv = std::size_t{1} << d;
  for (std::size_t mask = 0; mask < nv; ++mask) {
    Point v(d);
    for (int i = 0; i < d; ++i) v[i] = ((mask >> i) & 1U) ? sides[i] : 0.0;
    raw.vertices.push_back(std::move(v));
  }
  for (int i = 0; i < d; ++i) {
    Point lo(d, 0.0), hi(d, 0.0);
    lo[i] = -1.0;
    hi[i] = 1.0;
    raw.halfspaces.push_back({lo, 0.0});
    raw.halfspaces.push_back({hi, sides[i]});
  }
  // Faces are words over {0, 1, *}: coordinate fixed low, fixed high, or free.
  std::size_t words = 1;
  for (int i = 0; i < d; ++i) words *= 3;
  for (std::size_t w = 0; w + 1 < words; ++w) {  // last word is all-free, i.e. the cube
    std::vector<int> digit(d);
    std::size_t rest = w;
    int free_count = 0;
    for (int i = 0; i < d; ++i) {
      digit[i] = static_cast<int>(rest % 3);
      rest /= 3;
      if (digit[i] == 2) ++free_count;
    }
    VertexSet ids;
    for (std::size_t mask = 0; mask < nv; ++mask) {
      bool ok = true;
      for (int i = 0; i < d && ok; ++i)
        if (digit[i] != 2) ok = static_cast<int>((mask >> i) & 1U) == digit[i];
      if (ok) ids.push_back(mask);
    }
    raw.faces.push_back({free_count, std::move(ids)});
  }
  raw.volume = std::accumulate(sides.begin(), sides.end(), 1.0, std::multiplies<>());
  return raw;
}

RawPolytope make_simplex(int d, bool regular) {
  if (d < 1) throw ConstructionError("simplex: dimension must be >= 1");
  if (d > 12) throw UnsupportedDimensionError("simplex: dimension > 12 is not supported");
  RawPolytope raw;
  raw.dim = d;
  raw.shape = ShapeKind::simplex;
  if (regular) {
    // Standard basis of R^{d+1} in Helmert coordinates of the plane sum(x) = 1.
    for (int i = 0; i <= d; ++i) {
      Point v(d, 0.0);
      for (int j = 1; j <= d; ++j) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
        if (i < j) v[j - 1] = scale;
        else if (i == j) v[j - 1] = -static_cast<double>(j) * scale;
      }
      raw.vertices.push_back(std::move(v));
    }
  } else {
    raw.vertices.emplace_back(d, 0.0);
    for (int i = 0; i < d; ++i) {
      Point v(d, 0.0);
      v[i] = 1.0;
      raw.vertices.push_back(std::move(v));
    }
  }
  const std::size_t nv = static_cast<std::size_t>(d) + 1;
  const Point inside = centroid(raw.vertices, [&] {
    VertexSet all(nv);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }());
  for (std::size_t skip = 0; skip < nv; ++skip) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < nv; ++i)
      if (i != skip) pts.push_back(raw.vertices[i]);
    raw.halfspaces.push_back(hyperplane_through(pts, inside));
  }
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << nv); ++mask) {
    VertexSet ids;
    for (std::size_t i = 0; i < nv; ++i)
      if ((mask >> i) & 1U) ids.push_back(i);
    raw.faces.push_back({static_cast<int>(ids.size()) - 1, std::move(ids)});
  }
  Eigen::MatrixXd edges(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) edges(r, c) = raw.vertices[r + 1][c] - raw.vertices[0][c];
  raw.volume = std::abs(edges.determinant()) / std::tgamma(d + 1.0);
  return raw;
}

RawPolytope make_cross_polytope(int d) {
  if (d < 1) throw ConstructionError("cross_polytope: dimension must be >= 1");
  if (d > 10) throw UnsupportedDimensionError("cross_polytope: dimension > 10 is not supported");
  RawPolytope raw;
  raw.dim = d;
  raw.shape = ShapeKind::cross_polytope;
  for (int i = 0; i < d; ++i) {
    Point plus(d, 0.0), minus(d, 0.0);
    plus[i] = 1.0;
    minus[i] = -1.0;
    raw.vertices.push_back(std::move(plus));   // id 2i
    raw.vertices.push_back(std::move(minus));  // id 2i+1
  }
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t signs = 0; signs < (std::size_t{1} << d); ++signs) {
    Point n(d);
    for (int i = 0; i < d; ++i) n[i] = ((signs >> i) & 1U) ? -inv : inv;
    raw.halfspaces.push_back({std::move(n), inv});
  }
  std::size_t words = 1;
  for (int i = 0; i < d; ++i) words *= 3;
  // Word digits: 0 absent, 1 +e_i, 2 -e_i. Word 0 is the empty face.
  for (std::size_t w = 1; w < words; ++w) {
    VertexSet ids;
    std::size_t rest = w;
    for (int i = 0; i < d; ++i) {
      const auto digit = rest % 3;
      rest /= 3;
      if (digit == 1) ids.push_back(2 * static_cast<std::size_t>(i));
      if (digit == 2) ids.push_back(2 * static_cast<std::size_t>(i) + 1);
    }
    raw.faces.push_back({static_cast<int>(ids.size()) - 1, std::move(ids)});
  }
  raw.volume = std::pow(2.0, d) / std::tgamma(d + 1.0);
  return raw;
}

// Polygon from vertices in counter-clockwise order, no three collinear.
RawPolytope make_polygon(std::vector<Point> ccw, ShapeKind shape) {
  RawPolytope raw;
  raw.dim = 2;
  raw.shape = shape;
  const std::size_t m = ccw.size();
  raw.vertices = std::move(ccw);
  double twice_area = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Point& p = raw.vertices[i];
    const Point& q = raw.vertices[(i + 1) % m];
    twice_area += p[0] * q[1] - q[0] * p[1];
    Point n = normalized({q[1] - p[1], p[0] - q[0]});
    const double offset = dot(n, p);
    raw.halfspaces.push_back({std::move(n), offset});
  }
  for (std::size_t i = 0; i < m; ++i) raw.faces.push_back({0, {i}});
  for (std::size_t i = 0; i < m; ++i) {
    VertexSet e{i, (i + 1) % m};
    std::sort(e.begin(), e.end());
    raw.faces.push_back({1, std::move(e)});
  }
  raw.volume = 0.5 * twice_area;
  return raw;
}

double cross2(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; returns indices of strict hull vertices, CCW.
std::vector<std::size_t> hull2d(const std::vector<Point>& pts, double tol) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pts[a][0] < pts[b][0] || (pts[a][0] == pts[b][0] && pts[a][1] < pts[b][1]);
  });
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  auto turns_left = [&](std::size_t o, std::size_t a, std::size_t b) {
    return cross2(pts[o], pts[a], pts[b]) > tol * norm(sub(pts[a], pts[o]));
  };
  for (auto idx : order) {
    while (k >= 2 && !turns_left(hull[k - 2], hull[k - 1], idx)) --k;
    hull[k++] = idx;
  }
  for (std::size_t i = order.size() - 1, lower = k + 1; i-- > 0;) {
    const auto idx = order[i];
    while (k >= lower && !turns_left(hull[k - 2], hull[k - 1], idx)) --k;
    hull[k++] = idx;
  }
  hull.resize(k > 0 ? k - 1 : 0);
  return hull;
}

std::vector<Point> dedupe(const std::vector<Point>& pts, double tol) {
  std::vector<Point> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : out)
      if (norm(sub(p, q)) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

RawPolytope make_explicit_2d(const std::vector<Point>& input, double tol) {
  auto pts = dedupe(input, tol);
  auto idx = hull2d(pts, tol);
  if (idx.size() < 3) throw ConstructionError("explicit polygon: fewer than 3 non-collinear vertices");
  std::vector<Point> ccw;
  for (auto i : idx) ccw.push_back(pts[i]);
  return make_polygon(std::move(ccw), ShapeKind::explicit_vertices);
}

// Brute-force hull in R^3: every supporting plane through a point triple is
// a facet plane. O(n^4); meant for modest explicit vertex lists.
RawPolytope make_explicit_3d(const std::vector<Point>& input, double tol) {
  const auto pts = dedupe(input, tol);
  const std::size_t n = pts.size();

  struct Plane {
    Point normal;
    double offset;
  };
  std::vector<Plane> planes;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Point c = cross3(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
        const double len = norm(c);
        if (len <= tol * std::max(norm(sub(pts[j], pts[i])), norm(sub(pts[k], pts[i])))) continue;
        for (double& x : c) x /= len;
        double offset = dot(c, pts[i]);
        bool below = true, above = true;
        for (const auto& p : pts) {
          const double s = dot(c, p) - offset;
          if (s > tol) below = false;
          if (s < -tol) above = false;
        }
        if (!below && !above) continue;
        if (!below) {
          for (double& x : c) x = -x;
          offset = -offset;
        }
        const bool seen = std::any_of(planes.begin(), planes.end(), [&](const Plane& p) {
          return norm(sub(p.normal, c)) < 1e-9 && std::abs(p.offset - offset) <= tol;
        });
        if (!seen) planes.push_back({std::move(c), offset});
      }

  // Facet polygons over original point ids, then keep only polygon corners.
  std::vector<std::vector<std::size_t>> facet_loops;
  for (const auto& plane : planes) {
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(dot(plane.normal, pts[i]) - plane.offset) <= tol) on.push_back(i);
    // In-plane frame (u, w) with u x w = outward normal, giving CCW loops seen from outside.
    Point u = sub(pts[on[1]], pts[on[0]]);
    u = normalized(std::move(u));
    Point w = cross3(plane.normal, u);
    std::vector<Point> flat;
    for (auto i : on) {
      const Point rel = sub(pts[i], pts[on[0]]);
      flat.push_back({dot(rel, u), dot(rel, w)});
    }
    auto loop = hull2d(flat, tol);
    std::vector<std::size_t> ids;
    for (auto l : loop) ids.push_back(on[l]);
    facet_loops.push_back(std::move(ids));
  }

  std::set<std::size_t> used;
  for (const auto& loop : facet_loops) used.insert(loop.begin(), loop.end());
  std::map<std::size_t, std::size_t> remap;
  RawPolytope raw;
  raw.dim = 3;
  raw.shape = ShapeKind::explicit_vertices;
  for (auto i : used) {
    remap[i] = raw.vertices.size();
    raw.vertices.push_back(pts[i]);
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t f = 0; f < facet_loops.size(); ++f) {
    auto& loop = facet_loops[f];
    for (auto& i : loop) i = remap.at(i);
    for (std::size_t a = 0; a < loop.size(); ++a) {
      auto p = loop[a], q = loop[(a + 1) % loop.size()];
      edges.insert({std::min(p, q), std::max(p, q)});
    }
    raw.halfspaces.push_back({planes[f].normal, planes[f].offset});
  }
  for (std::size_t v = 0; v < raw.vertices.size(); ++v) raw.faces.push_back({0, {v}});
  for (const auto& [a, b] : edges) raw.faces.push_back({1, {a, b}});
  for (auto loop : facet_loops) {
    std::sort(loop.begin(), loop.end());
    raw.faces.push_back({2, std::move(loop)});
  }
  // Volume: cones from an interior point over each facet.
  VertexSet all(raw.vertices.size());
  std::iota(all.begin(), all.end(), 0);
  const Point c = centroid(raw.vertices, all);
  double volume = 0.0;
  for (std::size_t f = 0; f < facet_loops.size(); ++f) {
    const auto& loop = facet_loops[f];
    Point area_vec(3, 0.0);
    for (std::size_t a = 1; a + 1 < loop.size(); ++a) {
      const Point tri = cross3(sub(raw.vertices[loop[a]], raw.vertices[loop[0]]),
                               sub(raw.vertices[loop[a + 1]], raw.vertices[loop[0]]));
      for (int i = 0; i < 3; ++i) area_vec[i] += 0.5 * tri[i];
    }
    const double height = planes[f].offset - dot(planes[f].normal, c);
    volume += norm(area_vec) * height / 3.0;
  }
  raw.volume = volume;
  return raw;
}

RawPolytope make_explicit(const PolytopeSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3)
    throw UnsupportedDimensionError("explicit vertex lists are supported only for d in {2, 3} (got d=" +
                                    std::to_string(spec.dim) + ")");
  for (const auto& v : spec.vertices)
    if (static_cast<int>(v.size()) != spec.dim) throw ConstructionError("explicit vertex of wrong dimension");
  if (spec.vertices.size() < static_cast<std::size_t>(spec.dim) + 1)
    throw ConstructionError("explicit polytope needs at least d+1 vertices");
  const double diam = diameter_of(spec.vertices);
  const double tol = 1e-9 * std::max(diam, 1e-300);
  if (diam <= 0.0 || affine_rank(spec.vertices, tol) < spec.dim)
    throw ConstructionError("explicit polytope: vertices are affinely dependent (no interior)");
  return spec.dim == 2 ? make_explicit_2d(spec.vertices, tol) : make_explicit_3d(spec.vertices, tol);
}

std::string describe(const PolytopeSpec& spec) {
  std::ostringstream os;
  switch (spec.shape) {
    case ShapeKind::hypercube: os << "hypercube(" << spec.dim << ")"; break;
    case ShapeKind::box: {
      os << "box(";
      for (std::size_t i = 0; i < spec.sides.size(); ++i) os << (i ? "," : "") << spec.sides[i];
      os << ")";
      break;
    }
    case ShapeKind::simplex: os << (spec.regular ? "regular_simplex(" : "simplex(") << spec.dim << ")"; break;
    case ShapeKind::cross_polytope: os << "cross_polytope(" << spec.dim << ")"; break;
    case ShapeKind::regular_polygon: os << "regular_polygon(" << spec.polygon_vertices << ")"; break;
    case ShapeKind::explicit_vertices: os << "explicit" << spec.dim << "d(" << spec.vertices.size() << ")"; break;
  }
  if (spec.scale != 1.0) os << "*" << spec.scale;
  return os.str();
}

// Cone membership: v . n_i <= 0 for every active halfspace.
bool in_cone(const Polytope& poly, const Face& face, std::span<const double> v) {
  for (auto h : face.active_halfspaces)
    if (dot(poly.halfspaces()[h].normal, v) > 0.0) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- public

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::hypercube: return "hypercube";
    case ShapeKind::box: return "box";
    case ShapeKind::simplex: return "simplex";
    case ShapeKind::cross_polytope: return "cross_polytope";
    case ShapeKind::regular_polygon: return "regular_polygon";
    case ShapeKind::explicit_vertices: return "vertices";
  }
  return "unknown";
}

std::string to_string(RhoMethod method) {
  switch (method) {
    case RhoMethod::full_ball: return "full_ball";
    case RhoMethod::half_ball: return "half_ball";
    case RhoMethod::orthant: return "orthant";
    case RhoMethod::polygon_angle: return "polygon_angle";
    case RhoMethod::dihedral: return "dihedral";
    case RhoMethod::solid_angle: return "solid_angle";
    case RhoMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

PolytopeSpec PolytopeSpec::hypercube(int d) {
  PolytopeSpec s;
  s.shape = ShapeKind::hypercube;
  s.dim = d;
  return s;
}

PolytopeSpec PolytopeSpec::box(std::vector<double> sides) {
  PolytopeSpec s;
  s.shape = ShapeKind::box;
  s.dim = static_cast<int>(sides.size());
  s.sides = std::move(sides);
  return s;
}

PolytopeSpec PolytopeSpec::simplex(int d, bool regular) {
  PolytopeSpec s;
  s.shape = ShapeKind::simplex;
  s.dim = d;
  s.regular = regular;
  return s;
}

PolytopeSpec PolytopeSpec::cross_polytope(int d) {
  PolytopeSpec s;
  s.shape = ShapeKind::cross_polytope;
  s.dim = d;
  return s;
}

PolytopeSpec PolytopeSpec::regular_polygon(int m) {
  PolytopeSpec s;
  s.shape = ShapeKind::regular_polygon;
  s.dim = 2;
  s.polygon_vertices = m;
  return s;
}

PolytopeSpec PolytopeSpec::from_vertices(int d, std::vector<Point> vertices) {
  PolytopeSpec s;
  s.shape = ShapeKind::explicit_vertices;
  s.dim = d;
  s.vertices = std::move(vertices);
  return s;
}

double unit_ball_volume(int d) {
  if (d < 0) throw DomainError("unit_ball_volume: requires d >= 0");
  return std::pow(kPi, d / 2.0) / std::tgamma(1.0 + d / 2.0);
}

const Face& Polytope::face(std::size_t id) const {
  if (id >= faces_.size())
    throw LookupError("face id " + std::to_string(id) + " not in polytope " + name_);
  return faces_[id];
}

const Face& Polytope::full_face() const { return faces_.back(); }

bool Polytope::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw DomainError("contains: point has dimension " + std::to_string(x.size()) + ", polytope has " +
                      std::to_string(dim_));
  for (const auto& h : halfspaces_)
    if (dot(h.normal, x) - h.offset > 1e-12) return false;
  return true;
}

bool contains(const Polytope& polytope, std::span<const double> x) { return polytope.contains(x); }

const std::vector<Face>& face_lattice(const Polytope& polytope) { return polytope.faces(); }

Polytope build_polytope(const PolytopeSpec& spec) {
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale))
    throw ConstructionError("scale must be positive and finite");
  RawPolytope raw;
  switch (spec.shape) {
    case ShapeKind::hypercube:
      raw = make_box(std::vector<double>(static_cast<std::size_t>(std::max(spec.dim, 0)), 1.0), ShapeKind::hypercube);
      break;
    case ShapeKind::box:
      if (static_cast<int>(spec.sides.size()) != spec.dim)
        throw ConstructionError("box: number of side lengths must equal dim");
      raw = make_box(spec.sides, ShapeKind::box);
      break;
    case ShapeKind::simplex: raw = make_simplex(spec.dim, spec.regular); break;
    case ShapeKind::cross_polytope: raw = make_cross_polytope(spec.dim); break;
    case ShapeKind::regular_polygon: {
      if (spec.polygon_vertices < 3) throw ConstructionError("regular_polygon: needs at least 3 vertices");
      std::vector<Point> ccw;
      for (int i = 0; i < spec.polygon_vertices; ++i) {
        const double a = 2.0 * kPi * i / spec.polygon_vertices;
        ccw.push_back({std::cos(a), std::sin(a)});
      }
      raw = make_polygon(std::move(ccw), ShapeKind::regular_polygon);
      break;
    }
    case ShapeKind::explicit_vertices: raw = make_explicit(spec); break;
  }
  const int d = raw.dim;

  if (spec.scale != 1.0) {
    for (auto& v : raw.vertices)
      for (double& x : v) x *= spec.scale;
    for (auto& h : raw.halfspaces) h.offset *= spec.scale;
    raw.volume *= std::pow(spec.scale, d);
  }
  if (!(raw.volume > 0.0)) throw ConstructionError("polytope has zero volume");

  Polytope poly;
  poly.dim_ = d;
  poly.shape_ = raw.shape;
  poly.name_ = describe(spec);
  poly.vertices_ = std::move(raw.vertices);
  poly.halfspaces_ = std::move(raw.halfspaces);
  poly.volume_ = raw.volume;
  poly.diameter_ = diameter_of(poly.vertices_);
  poly.bbox_.lo = poly.vertices_.front();
  poly.bbox_.hi = poly.vertices_.front();
  for (const auto& v : poly.vertices_)
    for (int i = 0; i < d; ++i) {
      poly.bbox_.lo[i] = std::min(poly.bbox_.lo[i], v[i]);
      poly.bbox_.hi[i] = std::max(poly.bbox_.hi[i], v[i]);
    }
  const double tol = 1e-9 * std::max(poly.diameter_, 1.0);
  for (const auto& h : poly.halfspaces_) {
    if (std::abs(norm(h.normal) - 1.0) > 1e-9) throw ConstructionError("halfspace normal is not unit length");
    for (const auto& v : poly.vertices_)
      if (dot(h.normal, v) - h.offset > tol) throw ConstructionError("vertex violates a halfspace constraint");
  }

  // Faces ordered by dimension, then vertex ids; the polytope itself last.
  auto& faces = raw.faces;
  for (auto& f : faces) std::sort(f.vertices.begin(), f.vertices.end());
  std::sort(faces.begin(), faces.end(), [](const RawFace& a, const RawFace& b) {
    return a.dimension != b.dimension ? a.dimension < b.dimension : a.vertices < b.vertices;
  });
  VertexSet all(poly.vertices_.size());
  std::iota(all.begin(), all.end(), 0);
  faces.push_back({d, all});

  poly.faces_.resize(faces.size());
  std::vector<std::vector<std::size_t>> faces_with_vertex(poly.vertices_.size());
  for (std::size_t id = 0; id < faces.size(); ++id) {
    Face& f = poly.faces_[id];
    f.id = id;
    f.dimension = faces[id].dimension;
    f.vertex_ids = faces[id].vertices;
    f.relative_interior_point = centroid(poly.vertices_, f.vertex_ids);
    for (std::size_t h = 0; h < poly.halfspaces_.size(); ++h) {
      const auto& hs = poly.halfspaces_[h];
      const bool active = std::all_of(f.vertex_ids.begin(), f.vertex_ids.end(), [&](std::size_t v) {
        return std::abs(dot(hs.normal, poly.vertices_[v]) - hs.offset) <= tol;
      });
      if (active) f.active_halfspaces.push_back(h);
    }
    for (auto v : f.vertex_ids) faces_with_vertex[v].push_back(id);
  }
  for (auto& f : poly.faces_) {
    if (f.dimension == 0) continue;
    std::set<std::size_t> children;
    for (auto v : f.vertex_ids)
      for (auto cid : faces_with_vertex[v]) {
        const Face& c = poly.faces_[cid];
        if (c.dimension == f.dimension - 1 &&
            std::includes(f.vertex_ids.begin(), f.vertex_ids.end(), c.vertex_ids.begin(), c.vertex_ids.end()))
          children.insert(cid);
      }
    f.child_ids.assign(children.begin(), children.end());
  }
  for (const auto& f : poly.faces_)
    for (auto c : f.child_ids) poly.faces_[c].parent_ids.push_back(f.id);

  const double theta = unit_ball_volume(d);
  for (auto& f : poly.faces_) {
    if (f.dimension == d) {
      f.angular_volume = theta;
      f.rho_method = RhoMethod::full_ball;
    } else if (f.dimension == d - 1) {
      f.angular_volume = theta / 2.0;
      f.rho_method = RhoMethod::half_ball;
    } else if (poly.is_axis_box()) {
      f.angular_volume = theta / std::pow(2.0, d - f.dimension);
      f.rho_method = RhoMethod::orthant;
    } else if (d == 2 && f.dimension == 0) {
      f.angular_volume = vertex_angle(poly, f) / 2.0;
      f.rho_method = RhoMethod::polygon_angle;
    } else if (d == 3 && f.dimension == 1) {
      f.angular_volume = 2.0 * dihedral_angle(poly, f) / 3.0;
      f.rho_method = RhoMethod::dihedral;
    } else if (d == 3 && f.dimension == 0) {
      f.angular_volume = vertex_solid_angle(poly, f) / 3.0;
      f.rho_method = RhoMethod::solid_angle;
    } else {
      f.angular_volume = angular_volume_monte_carlo(poly, f, spec.mc_samples, derive_seed(spec.mc_seed, f.id));
      f.rho_method = RhoMethod::monte_carlo;
    }
  }
  return poly;
}

double angular_volume(const Polytope& polytope, const Face& face) {
  const auto& faces = polytope.faces();
  if (face.id >= faces.size() || faces[face.id].vertex_ids != face.vertex_ids ||
      faces[face.id].dimension != face.dimension)
    throw LookupError("angular_volume: face " + std::to_string(face.id) + " does not belong to " + polytope.name());
  return faces[face.id].angular_volume;
}

double angular_volume_monte_carlo(const Polytope& polytope, const Face& face, std::size_t samples,
                                  std::uint64_t seed) {
  if (samples == 0) throw DomainError("angular_volume_monte_carlo: requires samples >= 1");
  const int d = polytope.dim();
  Rng rng(seed);
  Point v(d);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    // Uniform in the unit ball: a uniform direction times U^{1/d}.
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) {
      v[i] = rng.normal();
      r2 += v[i] * v[i];
    }
    const double scale = std::pow(rng.uniform(), 1.0 / d) / std::sqrt(r2);
    for (double& x : v) x *= scale;
    if (in_cone(polytope, face, v)) ++hits;
  }
  return unit_ball_volume(d) * static_cast<double>(hits) / static_cast<double>(samples);
}

double dihedral_angle(const Polytope& polytope, const Face& edge) {
  if (polytope.dim() != 3 || edge.dimension != 1)
    throw DomainError("dihedral_angle: requires d = 3 and an edge (got d=" + std::to_string(polytope.dim()) +
                      ", face dimension " + std::to_string(edge.dimension) + ")");
  if (edge.active_halfspaces.size() < 2) throw DomainError("dihedral_angle: edge lies on fewer than two facets");
  // Facets meeting at the edge: take the pair of active halfspaces with the
  // widest normal spread (extra active planes are redundant).
  const auto& hs = polytope.halfspaces();
  double best = 0.0;
  for (std::size_t a = 0; a < edge.active_halfspaces.size(); ++a)
    for (std::size_t b = a + 1; b < edge.active_halfspaces.size(); ++b) {
      const auto& n1 = hs[edge.active_halfspaces[a]].normal;
      const auto& n2 = hs[edge.active_halfspaces[b]].normal;
      const double between = std::atan2(norm(cross3(n1, n2)), dot(n1, n2));
      best = std::max(best, between);
    }
  return kPi - best;
}

double vertex_angle(const Polytope& polytope, const Face& vertex) {
  if (polytope.dim() != 2 || vertex.dimension != 0)
    throw DomainError("vertex_angle: requires d = 2 and a vertex");
  const auto& v = polytope.vertices()[vertex.vertex_ids.front()];
  std::vector<Point> dirs;
  for (auto pid : vertex.parent_ids) {
    const Face& e = polytope.face(pid);
    for (auto w : e.vertex_ids)
      if (w != vertex.vertex_ids.front()) dirs.push_back(sub(polytope.vertices()[w], v));
  }
  if (dirs.size() != 2) throw DomainError("vertex_angle: vertex does not have two incident edges");
  const double c = dirs[0][0] * dirs[1][1] - dirs[0][1] * dirs[1][0];
  return std::atan2(std::abs(c), dot(dirs[0], dirs[1]));
}

double vertex_solid_angle(const Polytope& polytope, const Face& vertex) {
  if (polytope.dim() != 3 || vertex.dimension != 0)
    throw DomainError("vertex_solid_angle: requires d = 3 and a vertex");
  const auto apex_id = vertex.vertex_ids.front();
  const auto& apex = polytope.vertices()[apex_id];
  std::vector<Point> dirs;
  for (auto pid : vertex.parent_ids) {
    const Face& e = polytope.face(pid);
    for (auto w : e.vertex_ids)
      if (w != apex_id) dirs.push_back(normalized(sub(polytope.vertices()[w], apex)));
  }
  if (dirs.size() < 3) throw DomainError("vertex_solid_angle: vertex has fewer than three edges");

  // Order edge directions by angle around the cone axis.
  Point axis(3, 0.0);
  for (const auto& u : dirs)
    for (int i = 0; i < 3; ++i) axis[i] += u[i];
  axis = normalized(std::move(axis));
  Point helper = std::abs(axis[0]) < 0.9 ? Point{1, 0, 0} : Point{0, 1, 0};
  const Point e1 = normalized(cross3(axis, helper));
  const Point e2 = cross3(axis, e1);
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < dirs.size(); ++i) order.emplace_back(std::atan2(dot(dirs[i], e2), dot(dirs[i], e1)), i);
  std::sort(order.begin(), order.end());

  // Fan of spherical triangles; Van Oosterom-Strackee gives each excess.
  double total = 0.0;
  const Point& r1 = dirs[order[0].second];
  for (std::size_t i = 1; i + 1 < order.size(); ++i) {
    const Point& r2 = dirs[order[i].second];
    const Point& r3 = dirs[order[i + 1].second];
    const double numerator = dot(r1, cross3(r2, r3));
    const double denominator = 1.0 + dot(r1, r2) + dot(r2, r3) + dot(r3, r1);
    total += std::abs(2.0 * std::atan2(numerator, denominator));
  }
  return total;
}

}  // namespace polylink
