#include "polylink/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "polylink/error.hpp"

namespace polylink {

namespace {

void check_density(const Polytope& polytope, const DensityModel& density) {
  if (density.face_count() != polytope.faces().size())
    throw ConfigError("density was built for a different polytope (face counts differ)");
  if (!(density.f0() > 0.0)) throw ConfigError("limit constants require f0 > 0");
}

void finish(LimitReport& report) {
  if (report.per_face.empty()) throw ConfigError("limit report has no faces");
  double best = 0.0;
  for (const auto& c : report.per_face) best = std::max(best, c.contribution);
  report.constant = best;
  report.argmax_faces.clear();
  for (const auto& c : report.per_face)
    if (c.contribution >= best * (1.0 - kArgmaxRelTol)) report.argmax_faces.push_back(c.face_id);
  report.normalization = report.beta.is_infinite() ? "per k(n)" : "per log n";
}

void require_finite_beta(double beta, const char* op) {
  if (!std::isfinite(beta) || beta < 0.0) throw DomainError(std::string(op) + ": requires 0 <= beta < inf");
}

FaceContribution entry(const Face& face, const DensityModel& density, double f, double contribution) {
  return {face.id, face.dimension, face.angular_volume, f, density.face_infimum_estimated(face.id), contribution};
}

}  // namespace

LimitReport limit_constant(const Polytope& polytope, const DensityModel& density, BetaMode beta) {
  check_density(polytope, density);
  LimitReport report;
  report.beta = beta;
  const double d = polytope.dim();
  for (const auto& face : polytope.faces()) {
    const double f = density.face_infimum(face.id);
    if (!(f > 0.0)) throw ConfigError("density infimum on face " + std::to_string(face.id) + " is not positive");
    const double numerator = beta.is_infinite() ? 1.0 : hhat(beta.value(), face.dimension / d);
    report.per_face.push_back(entry(face, density, f, numerator / (f * face.angular_volume)));
  }
  finish(report);
  return report;
}

LimitReport limit_constant_polygon(const Polytope& polytope, const DensityModel& density, double beta) {
  if (polytope.dim() != 2) throw DomainError("limit_constant_polygon: requires d = 2");
  require_finite_beta(beta, "limit_constant_polygon");
  check_density(polytope, density);
  LimitReport report;
  report.beta = BetaMode::finite(beta);
  const double pi = std::numbers::pi;
  const double interior = hhat(beta, 1.0) / (pi * density.f0());
  const double edge = 2.0 * hhat(beta, 0.5) / (pi * density.f1());
  for (const auto& face : polytope.faces()) {
    switch (face.dimension) {
      case 2: report.per_face.push_back(entry(face, density, density.f0(), interior)); break;
      case 1: report.per_face.push_back(entry(face, density, density.f1(), edge)); break;
      default: {
        const double fv = density.evaluate(polytope.vertices()[face.vertex_ids.front()]);
        const double omega = vertex_angle(polytope, face);
        report.per_face.push_back(entry(face, density, fv, 2.0 * beta / (omega * fv)));
      }
    }
  }
  finish(report);
  return report;
}

LimitReport limit_constant_polyhedron(const Polytope& polytope, const DensityModel& density, double beta) {
  if (polytope.dim() != 3) throw DomainError("limit_constant_polyhedron: requires d = 3");
  require_finite_beta(beta, "limit_constant_polyhedron");
  check_density(polytope, density);
  LimitReport report;
  report.beta = BetaMode::finite(beta);
  const double theta3 = 4.0 * std::numbers::pi / 3.0;
  const double interior = hhat(beta, 1.0) / (theta3 * density.f0());
  const double facet = 2.0 * hhat(beta, 2.0 / 3.0) / (theta3 * density.f1());
  const double edge_numerator = 3.0 * hhat(beta, 1.0 / 3.0);
  for (const auto& face : polytope.faces()) {
    switch (face.dimension) {
      case 3: report.per_face.push_back(entry(face, density, density.f0(), interior)); break;
      case 2: report.per_face.push_back(entry(face, density, density.f1(), facet)); break;
      case 1: {
        const double fe = density.face_infimum(face.id);
        const double alpha = dihedral_angle(polytope, face);
        report.per_face.push_back(entry(face, density, fe, edge_numerator / (2.0 * alpha * fe)));
        break;
      }
      default: {
        const double fv = density.evaluate(polytope.vertices()[face.vertex_ids.front()]);
        const double rho = vertex_solid_angle(polytope, face) / 3.0;
        report.per_face.push_back(entry(face, density, fv, beta / (rho * fv)));
      }
    }
  }
  finish(report);
  return report;
}

LimitReport limit_constant_hypercube(const Polytope& polytope, const DensityModel& density, double beta) {
  if (polytope.shape() != ShapeKind::hypercube) throw DomainError("limit_constant_hypercube: requires a hypercube");
  require_finite_beta(beta, "limit_constant_hypercube");
  check_density(polytope, density);
  const int d = polytope.dim();
  // f_j: infimum over the union of the (d - j)-dimensional faces.
  std::vector<double> fj(static_cast<std::size_t>(d) + 1, std::numeric_limits<double>::infinity());
  for (const auto& face : polytope.faces()) {
    const auto j = static_cast<std::size_t>(d - face.dimension);
    fj[j] = std::min(fj[j], density.face_infimum(face.id));
  }
  const double theta = unit_ball_volume(d);
  LimitReport report;
  report.beta = BetaMode::finite(beta);
  for (const auto& face : polytope.faces()) {
    const int j = d - face.dimension;
    const double f = fj[static_cast<std::size_t>(j)];
    const double value = std::pow(2.0, j) * hhat(beta, 1.0 - static_cast<double>(j) / d) / (theta * f);
    report.per_face.push_back(entry(face, density, f, value));
  }
  finish(report);
  return report;
}

}  // namespace polylink
