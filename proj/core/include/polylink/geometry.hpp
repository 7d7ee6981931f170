#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polylink {

using Point = std::vector<double>;

/// Outward halfspace {x : normal . x <= offset}, normal of unit length.
struct Halfspace {
  Point normal;
  double offset = 0.0;
};

struct BoundingBox {
  Point lo;
  Point hi;
};

enum class ShapeKind { hypercube, box, simplex, cross_polytope, regular_polygon, explicit_vertices };

std::string to_string(ShapeKind kind);

/// How a face's angular volume was obtained.
enum class RhoMethod { full_ball, half_ball, orthant, polygon_angle, dihedral, solid_angle, monte_carlo };

std::string to_string(RhoMethod method);

/// Construction request for a polytope: a builtin generator or an explicit
/// vertex list (d in {2, 3}).
struct PolytopeSpec {
  ShapeKind shape = ShapeKind::hypercube;
  int dim = 2;
  std::vector<double> sides;         // box
  int polygon_vertices = 0;          // regular_polygon
  bool regular = false;              // simplex: regular instead of corner simplex
  double scale = 1.0;                // uniform dilation about the origin
  std::vector<Point> vertices;       // explicit_vertices
  std::size_t mc_samples = 1'000'000;
  std::uint64_t mc_seed = 0x5eed'a11c'e5ULL;

  static PolytopeSpec hypercube(int d);
  static PolytopeSpec box(std::vector<double> sides);
  static PolytopeSpec simplex(int d, bool regular = false);
  static PolytopeSpec cross_polytope(int d);
  static PolytopeSpec regular_polygon(int m);
  static PolytopeSpec from_vertices(int d, std::vector<Point> vertices);
};

/// One element of the face set including the polytope itself. The local cone
/// of the face is {v : n_i . v <= 0 for every active halfspace i}.
struct Face {
  std::size_t id = 0;
  int dimension = 0;
  std::vector<std::size_t> vertex_ids;  // sorted
  std::vector<std::size_t> parent_ids;  // faces of dimension + 1 containing this one
  std::vector<std::size_t> child_ids;   // faces of dimension - 1 contained in this one
  std::vector<std::size_t> active_halfspaces;
  Point relative_interior_point;
  double angular_volume = 0.0;
  RhoMethod rho_method = RhoMethod::monte_carlo;
};

class Polytope {
 public:
  int dim() const { return dim_; }
  ShapeKind shape() const { return shape_; }
  const std::string& name() const { return name_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(std::size_t id) const;
  /// The d-dimensional face, i.e. the polytope itself.
  const Face& full_face() const;
  double volume() const { return volume_; }
  const BoundingBox& bounding_box() const { return bbox_; }
  double diameter() const { return diameter_; }
  /// Axis-aligned box (hypercube or box generator).
  bool is_axis_box() const { return shape_ == ShapeKind::hypercube || shape_ == ShapeKind::box; }

  bool contains(std::span<const double> x) const;

 private:
  friend Polytope build_polytope(const PolytopeSpec& spec);

  int dim_ = 0;
  ShapeKind shape_ = ShapeKind::hypercube;
  std::string name_;
  std::vector<Point> vertices_;
  std::vector<Halfspace> halfspaces_;
  std::vector<Face> faces_;
  double volume_ = 0.0;
  BoundingBox bbox_;
  double diameter_ = 0.0;
};

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

Polytope build_polytope(const PolytopeSpec& spec);

const std::vector<Face>& face_lattice(const Polytope& polytope);

/// Angular volume of `face`, the measure of its local cone intersected with
/// the unit ball. Throws LookupError when the face is not one of the
/// polytope's faces.
double angular_volume(const Polytope& polytope, const Face& face);

/// Fraction of uniform points of the unit ball falling in the face's local
/// cone, times the ball volume.
double angular_volume_monte_carlo(const Polytope& polytope, const Face& face, std::size_t samples,
                                  std::uint64_t seed);

/// Interior angle between the two facets meeting at an edge (d = 3).
double dihedral_angle(const Polytope& polytope, const Face& edge);

/// Interior angle at a polygon vertex (d = 2).
double vertex_angle(const Polytope& polytope, const Face& vertex);

/// Solid angle of the vertex cone (d = 3), by spherical excess.
double vertex_solid_angle(const Polytope& polytope, const Face& vertex);

bool contains(const Polytope& polytope, std::span<const double> x);

}  // namespace polylink
