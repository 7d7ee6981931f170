#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polylink/geometry.hpp"

namespace polylink {

enum class DensityKind { uniform, product, grid };

std::string to_string(DensityKind kind);

/// Density request. Product factors are polynomials per coordinate,
/// coefficients in increasing degree (degree <= 3); the density is their
/// product, normalized over the polytope. Grid values are piecewise constant
/// on a regular grid over the polytope's bounding box, first coordinate
/// varying fastest.
struct DensitySpec {
  DensityKind kind = DensityKind::uniform;
  std::vector<std::vector<double>> factors;
  std::vector<double> values;
  std::vector<std::size_t> cells;
  std::size_t normalizer_samples = 1'000'000;
  std::size_t probe_points = 4096;
  std::uint64_t seed = 0xde'75'17ULL;

  static DensitySpec uniform();
  static DensitySpec product(std::vector<std::vector<double>> factors);
  static DensitySpec grid(std::vector<double> values, std::vector<std::size_t> cells);
};

/// A probability density on a polytope with the infima that appear in the
/// limit constants. Immutable after construction.
class DensityModel {
 public:
  DensityModel(const DensitySpec& spec, const Polytope& polytope);

  DensityKind kind() const { return spec_.kind; }
  const DensitySpec& spec() const { return spec_; }
  /// Normalized density at x. Assumes x lies in the polytope.
  double evaluate(std::span<const double> x) const;
  double sup_bound() const { return sup_bound_; }
  /// Essential infimum over the polytope.
  double f0() const { return f0_; }
  /// Infimum over the boundary.
  double f1() const { return f1_; }
  /// Infimum over a face (f0 for the polytope itself).
  double face_infimum(std::size_t face_id) const;
  /// True when the face infimum is a probe minimum (an upper bound on the
  /// true infimum) rather than an exact value.
  bool face_infimum_estimated(std::size_t face_id) const;
  const std::vector<double>& per_face_inf() const { return per_face_inf_; }
  double normalizer() const { return normalizer_; }
  /// True when the normalizer came from Monte Carlo integration.
  bool normalizer_estimated() const { return normalizer_estimated_; }
  std::size_t face_count() const { return per_face_inf_.size(); }

 private:
  friend double estimate_face_infimum(const DensityModel&, const Polytope&, const Face&, std::size_t,
                                      std::uint64_t);

  double raw(std::span<const double> x) const;
  double exact_box_face_infimum(const Polytope& polytope, const Face& face) const;
  double probe_face_minimum(const Polytope& polytope, const Face& face, std::size_t n_probe,
                            std::uint64_t seed) const;

  DensitySpec spec_;
  BoundingBox bbox_;
  double normalizer_ = 1.0;
  bool normalizer_estimated_ = false;
  double sup_bound_ = 0.0;
  double f0_ = 0.0;
  double f1_ = 0.0;
  std::vector<double> per_face_inf_;
  std::vector<bool> estimated_;
};

/// n points in R^d, stored row-major.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(int dim, std::vector<double> coords, std::uint64_t seed = 0, std::string provenance = {});

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const { return coords_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& provenance() const { return provenance_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
  std::uint64_t seed_ = 0;
  std::string provenance_;
};

struct SamplingOptions {
  /// Proposal budget per requested point.
  double max_proposals_per_point = 1e4;
};

/// i.i.d. draws by rejection from the bounding box. Bit-identical for
/// identical arguments.
PointCloud sample_points(const Polytope& polytope, const DensityModel& density, std::size_t n,
                         std::uint64_t seed, const SamplingOptions& options = {});

/// Infimum of the density over a face: exact for uniform densities and for
/// product densities on axis-aligned boxes, otherwise the minimum over
/// n_probe Halton points on the face.
double estimate_face_infimum(const DensityModel& density, const Polytope& polytope, const Face& face,
                             std::size_t n_probe, std::uint64_t seed);

/// Point i of the Halton sequence in `dims` dimensions (bases 2, 3, 5, ...).
std::vector<double> halton_point(std::size_t index, int dims);

}  // namespace polylink
