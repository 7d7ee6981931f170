#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polylink/geometry.hpp"
#include "polylink/sampling.hpp"
#include "polylink/theory.hpp"

namespace polylink {

struct FaceContribution {
  std::size_t face_id = 0;
  int dimension = 0;
  double rho = 0.0;
  double f = 0.0;  // density infimum used for this face
  bool f_estimated = false;
  double contribution = 0.0;
};

/// Limit of n L^d / log n (finite beta) or n L^d / k(n) (infinite beta), the
/// same constant for the k-connectivity threshold M.
struct LimitReport {
  BetaMode beta = BetaMode::finite(0.0);
  std::vector<FaceContribution> per_face;
  double constant = 0.0;
  std::vector<std::size_t> argmax_faces;
  std::string normalization;  // "per log n" or "per k(n)"
};

/// Relative tolerance for listing tied faces in argmax_faces.
inline constexpr double kArgmaxRelTol = 1e-9;

LimitReport limit_constant(const Polytope& polytope, const DensityModel& density, BetaMode beta);

/// Polygon specialization in terms of vertex angles, f0, f1 and f(v).
LimitReport limit_constant_polygon(const Polytope& polytope, const DensityModel& density, double beta);

/// Polyhedron specialization in terms of dihedral angles, vertex angular
/// volumes, f0, f1, f_e and f(v).
LimitReport limit_constant_polyhedron(const Polytope& polytope, const DensityModel& density, double beta);

/// Hypercube specialization: max over codimension j of 2^j Hhat(1 - j/d) /
/// (theta_d f_j).
LimitReport limit_constant_hypercube(const Polytope& polytope, const DensityModel& density, double beta);

}  // namespace polylink
