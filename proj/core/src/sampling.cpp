#include "polylink/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "polylink/error.hpp"
#include "polylink/random.hpp"

namespace polylink {

namespace {

double poly_eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Points of [lo, hi] where a cubic can attain its extrema.
std::vector<double> poly_critical_points(const std::vector<double>& c, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  const double a = c.size() > 3 ? 3.0 * c[3] : 0.0;
  const double b = c.size() > 2 ? 2.0 * c[2] : 0.0;
  const double k = c.size() > 1 ? c[1] : 0.0;
  auto keep = [&](double x) {
    if (x > lo && x < hi) pts.push_back(x);
  };
  if (a == 0.0) {
    if (b != 0.0) keep(-k / b);
  } else {
    const double disc = b * b - 4.0 * a * k;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      keep((-b + s) / (2.0 * a));
      keep((-b - s) / (2.0 * a));
    }
  }
  return pts;
}

double poly_min(const std::vector<double>& c, double lo, double hi) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : poly_critical_points(c, lo, hi)) best = std::min(best, poly_eval(c, x));
  return best;
}

double poly_max(const std::vector<double>& c, double lo, double hi) {
  double best = -std::numeric_limits<double>::infinity();
  for (double x : poly_critical_points(c, lo, hi)) best = std::max(best, poly_eval(c, x));
  return best;
}

double poly_integral(const std::vector<double>& c, double lo, double hi) {
  double s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double p = static_cast<double>(m) + 1.0;
    s += c[m] * (std::pow(hi, p) - std::pow(lo, p)) / p;
  }
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool inside_with_tolerance(const Polytope& polytope, std::span<const double> x, double tol) {
  for (const auto& h : polytope.halfspaces())
    if (dot(h.normal, x) - h.offset > tol) return false;
  return true;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::uniform: return "uniform";
    case DensityKind::product: return "product";
    case DensityKind::grid: return "grid";
  }
  return "unknown";
}

DensitySpec DensitySpec::uniform() { return {}; }

DensitySpec DensitySpec::product(std::vector<std::vector<double>> factors) {
  DensitySpec s;
  s.kind = DensityKind::product;
  s.factors = std::move(factors);
  return s;
}

DensitySpec DensitySpec::grid(std::vector<double> values, std::vector<std::size_t> cells) {
  DensitySpec s;
  s.kind = DensityKind::grid;
  s.values = std::move(values);
  s.cells = std::move(cells);
  return s;
}

std::vector<double> halton_point(std::size_t index, int dims) {
  if (dims > static_cast<int>(std::size(kPrimes))) throw DomainError("halton_point: too many dimensions");
  std::vector<double> out(static_cast<std::size_t>(dims));
  for (int j = 0; j < dims; ++j) {
    const int base = kPrimes[j];
    double f = 1.0, r = 0.0;
    for (std::size_t i = index; i > 0; i /= static_cast<std::size_t>(base)) {
      f /= base;
      r += f * static_cast<double>(i % static_cast<std::size_t>(base));
    }
    out[static_cast<std::size_t>(j)] = r;
  }
  return out;
}

DensityModel::DensityModel(const DensitySpec& spec, const Polytope& polytope)
    : spec_(spec), bbox_(polytope.bounding_box()) {
  const int d = polytope.dim();
  switch (spec_.kind) {
    case DensityKind::uniform: break;
    case DensityKind::product:
      if (static_cast<int>(spec_.factors.size()) != d)
        throw ConfigError("product density needs one factor per coordinate (" + std::to_string(d) + ")");
      for (std::size_t i = 0; i < spec_.factors.size(); ++i) {
        const auto& c = spec_.factors[i];
        if (c.empty() || c.size() > 4) throw ConfigError("product density factors must have 1 to 4 coefficients");
        if (!(poly_min(c, bbox_.lo[i], bbox_.hi[i]) > 0.0))
          throw ConfigError("product density factor " + std::to_string(i) + " is not positive on the polytope");
      }
      break;
    case DensityKind::grid: {
      if (static_cast<int>(spec_.cells.size()) != d) throw ConfigError("grid density needs one cell count per coordinate");
      std::size_t total = 1;
      for (auto c : spec_.cells) {
        if (c == 0) throw ConfigError("grid density cell counts must be >= 1");
        total *= c;
      }
      if (spec_.values.size() != total)
        throw ConfigError("grid density expects " + std::to_string(total) + " values, got " +
                          std::to_string(spec_.values.size()));
      for (double v : spec_.values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("grid density values must be finite and >= 0");
      break;
    }
  }

  // Normalizer: exact where the integral is closed-form, Monte Carlo otherwise.
  if (spec_.kind == DensityKind::uniform) {
    normalizer_ = polytope.volume();
  } else if (polytope.is_axis_box()) {
    if (spec_.kind == DensityKind::product) {
      normalizer_ = 1.0;
      for (int i = 0; i < d; ++i) normalizer_ *= poly_integral(spec_.factors[i], bbox_.lo[i], bbox_.hi[i]);
    } else {
      double cell_volume = 1.0;
      for (int i = 0; i < d; ++i) cell_volume *= (bbox_.hi[i] - bbox_.lo[i]) / static_cast<double>(spec_.cells[i]);
      normalizer_ = std::accumulate(spec_.values.begin(), spec_.values.end(), 0.0) * cell_volume;
    }
  } else {
    if (spec_.normalizer_samples == 0) throw ConfigError("normalizer_samples must be >= 1");
    Rng rng(derive_seed(spec_.seed, 0x6e6f726dULL));
    std::vector<double> x(static_cast<std::size_t>(d));
    double sum = 0.0;
    std::size_t accepted = 0;
    const std::size_t cap = 1000 * spec_.normalizer_samples;
    for (std::size_t tries = 0; accepted < spec_.normalizer_samples; ++tries) {
      if (tries >= cap) throw SamplingEfficiencyError("density normalizer: polytope fills too little of its bounding box");
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(bbox_.lo[i], bbox_.hi[i]);
      if (!polytope.contains(x)) continue;
      sum += raw(x);
      ++accepted;
    }
    normalizer_ = polytope.volume() * sum / static_cast<double>(accepted);
    normalizer_estimated_ = true;
  }
  if (!(normalizer_ > 0.0) || !std::isfinite(normalizer_)) throw ConfigError("density integrates to zero on the polytope");

  switch (spec_.kind) {
    case DensityKind::uniform: sup_bound_ = 1.0 / normalizer_; break;
    case DensityKind::product:
      sup_bound_ = 1.0;
      for (int i = 0; i < d; ++i) sup_bound_ *= poly_max(spec_.factors[i], bbox_.lo[i], bbox_.hi[i]);
      sup_bound_ /= normalizer_;
      break;
    case DensityKind::grid:
      sup_bound_ = *std::max_element(spec_.values.begin(), spec_.values.end()) / normalizer_;
      break;
  }

  const auto& faces = polytope.faces();
  per_face_inf_.resize(faces.size());
  estimated_.assign(faces.size(), false);
  for (const auto& face : faces) {
    const auto seed = derive_seed(spec_.seed, face.id, 0x696e66ULL);
    per_face_inf_[face.id] = estimate_face_infimum(*this, polytope, face, spec_.probe_points, seed);
    estimated_[face.id] = !(spec_.kind == DensityKind::uniform ||
                            (spec_.kind == DensityKind::product && polytope.is_axis_box()) || face.dimension == 0);
  }
  f0_ = per_face_inf_[polytope.full_face().id];
  f1_ = std::numeric_limits<double>::infinity();
  for (const auto& face : faces)
    if (face.dimension == d - 1) f1_ = std::min(f1_, per_face_inf_[face.id]);
  if (!(f0_ > 0.0)) throw ConfigError("density infimum over the polytope must be positive");
}

double DensityModel::raw(std::span<const double> x) const {
  switch (spec_.kind) {
    case DensityKind::uniform: return 1.0;
    case DensityKind::product: {
      double v = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) v *= poly_eval(spec_.factors[i], x[i]);
      return v;
    }
    case DensityKind::grid: {
      std::size_t index = 0, stride = 1;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double width = bbox_.hi[i] - bbox_.lo[i];
        const double rel = (x[i] - bbox_.lo[i]) / width * static_cast<double>(spec_.cells[i]);
        const auto cell = static_cast<std::size_t>(
            std::clamp(std::floor(rel), 0.0, static_cast<double>(spec_.cells[i] - 1)));
        index += cell * stride;
        stride *= spec_.cells[i];
      }
      return spec_.values[index];
    }
  }
  return 0.0;
}

double DensityModel::evaluate(std::span<const double> x) const { return raw(x) / normalizer_; }

double DensityModel::face_infimum(std::size_t face_id) const {
  if (face_id >= per_face_inf_.size()) throw LookupError("face_infimum: unknown face " + std::to_string(face_id));
  return per_face_inf_[face_id];
}

bool DensityModel::face_infimum_estimated(std::size_t face_id) const {
  if (face_id >= estimated_.size()) throw LookupError("face_infimum_estimated: unknown face " + std::to_string(face_id));
  return estimated_[face_id];
}

double DensityModel::exact_box_face_infimum(const Polytope& polytope, const Face& face) const {
  double v = 1.0;
  for (int i = 0; i < polytope.dim(); ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (auto id : face.vertex_ids) {
      lo = std::min(lo, polytope.vertices()[id][i]);
      hi = std::max(hi, polytope.vertices()[id][i]);
    }
    v *= lo == hi ? poly_eval(spec_.factors[i], lo) : poly_min(spec_.factors[i], lo, hi);
  }
  return v / normalizer_;
}

double DensityModel::probe_face_minimum(const Polytope& polytope, const Face& face, std::size_t n_probe,
                                        std::uint64_t seed) const {
  const auto& verts = polytope.vertices();
  double best = std::numeric_limits<double>::infinity();
  for (auto id : face.vertex_ids) best = std::min(best, evaluate(verts[id]));
  if (face.dimension == 0) return best;

  // Orthonormal frame of the face's affine hull.
  const Point& origin = verts[face.vertex_ids.front()];
  const std::size_t d = origin.size();
  std::vector<Point> basis;
  for (auto id : face.vertex_ids) {
    if (static_cast<int>(basis.size()) == face.dimension) break;
    Point v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = verts[id][i] - origin[i];
    for (const auto& b : basis) {
      const double proj = dot(v, b);
      for (std::size_t i = 0; i < d; ++i) v[i] -= proj * b[i];
    }
    const double len = std::sqrt(dot(v, v));
    if (len <= 1e-9 * std::max(polytope.diameter(), 1.0)) continue;
    for (double& x : v) x /= len;
    basis.push_back(std::move(v));
  }
  const std::size_t dims = basis.size();
  std::vector<double> lo(dims, std::numeric_limits<double>::infinity()), hi(dims, -lo[0]);
  for (auto id : face.vertex_ids)
    for (std::size_t j = 0; j < dims; ++j) {
      double c = 0.0;
      for (std::size_t i = 0; i < d; ++i) c += (verts[id][i] - origin[i]) * basis[j][i];
      lo[j] = std::min(lo[j], c);
      hi[j] = std::max(hi[j], c);
    }

  // Cranley-Patterson rotation of the Halton sequence keyed by the seed.
  Rng rng(seed);
  std::vector<double> shift(dims);
  for (double& s : shift) s = rng.uniform();
  const double tol = 1e-9 * std::max(polytope.diameter(), 1.0);
  Point x(d);
  std::size_t accepted = 0;
  for (std::size_t index = 1; accepted < n_probe && index <= 64 * n_probe; ++index) {
    const auto h = halton_point(index, static_cast<int>(dims));
    x = origin;
    for (std::size_t j = 0; j < dims; ++j) {
      const double u = std::fmod(h[j] + shift[j], 1.0);
      const double c = lo[j] + u * (hi[j] - lo[j]);
      for (std::size_t i = 0; i < d; ++i) x[i] += c * basis[j][i];
    }
    if (!inside_with_tolerance(polytope, x, tol)) continue;
    ++accepted;
    best = std::min(best, evaluate(x));
  }
  return best;
}

double estimate_face_infimum(const DensityModel& density, const Polytope& polytope, const Face& face,
                             std::size_t n_probe, std::uint64_t seed) {
  if (n_probe < 1) throw DomainError("estimate_face_infimum: requires n_probe >= 1");
  const auto& faces = polytope.faces();
  if (face.id >= faces.size() || faces[face.id].vertex_ids != face.vertex_ids)
    throw LookupError("estimate_face_infimum: face does not belong to " + polytope.name());
  switch (density.kind()) {
    case DensityKind::uniform: return 1.0 / density.normalizer();
    case DensityKind::product:
      if (polytope.is_axis_box()) return density.exact_box_face_infimum(polytope, face);
      break;
    case DensityKind::grid: break;
  }
  return density.probe_face_minimum(polytope, face, n_probe, seed);
}

PointCloud::PointCloud(int dim, std::vector<double> coords, std::uint64_t seed, std::string provenance)
    : dim_(dim), coords_(std::move(coords)), seed_(seed), provenance_(std::move(provenance)) {
  if (dim < 1) throw DomainError("PointCloud: dimension must be >= 1");
  if (coords_.size() % static_cast<std::size_t>(dim) != 0)
    throw DomainError("PointCloud: coordinate count is not a multiple of the dimension");
}

PointCloud sample_points(const Polytope& polytope, const DensityModel& density, std::size_t n,
                         std::uint64_t seed, const SamplingOptions& options) {
  if (n < 1) throw DomainError("sample_points: requires n >= 1");
  if (!(density.sup_bound() > 0.0)) throw SamplingEfficiencyError("sample_points: sup_bound must be positive");
  const int d = polytope.dim();
  const auto& box = polytope.bounding_box();
  double box_volume = 1.0;
  for (int i = 0; i < d; ++i) box_volume *= box.hi[i] - box.lo[i];

  // Acceptance probability per proposal is 1 / (box volume * sup bound).
  const double cap = options.max_proposals_per_point * static_cast<double>(n);
  const double expected = static_cast<double>(n) * box_volume * density.sup_bound();
  if (expected > cap)
    throw SamplingEfficiencyError("sample_points: expected " + std::to_string(expected) +
                                  " proposals exceeds the cap of " + std::to_string(cap));

  const bool flat = density.kind() == DensityKind::uniform;
  Rng rng(seed);
  std::vector<double> coords;
  coords.reserve(n * static_cast<std::size_t>(d));
  std::vector<double> x(static_cast<std::size_t>(d));
  double proposals = 0.0;
  std::size_t accepted = 0;
  while (accepted < n) {
    if (++proposals > cap) throw SamplingEfficiencyError("sample_points: proposal cap exhausted");
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
    if (!polytope.contains(x)) continue;
    if (!flat && rng.uniform() * density.sup_bound() >= density.evaluate(x)) continue;
    coords.insert(coords.end(), x.begin(), x.end());
    ++accepted;
  }
  return PointCloud(d, std::move(coords), seed, polytope.name());
}

}  // namespace polylink
