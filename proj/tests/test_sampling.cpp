#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "polylink/error.hpp"
#include "polylink/random.hpp"
#include "polylink/sampling.hpp"

using namespace polylink;

namespace {

// Upper 1e-4 quantiles of chi-square with 4^d - 1 degrees of freedom.
double chi2_critical(int d) {
  switch (d) {
    case 1: return 21.10751346616021;
    case 2: return 44.26322494417498;
    case 3: return 113.50499285105357;
  }
  return 0.0;
}

// Chi-square statistic of the cloud against per-cell probabilities on a
// 4^d grid over [0, 1]^d.
double chi2_statistic(const PointCloud& cloud, const std::vector<double>& probabilities) {
  const int d = cloud.dim();
  std::vector<double> counts(probabilities.size(), 0.0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::size_t index = 0, stride = 1;
    for (int a = 0; a < d; ++a) {
      index += std::min<std::size_t>(static_cast<std::size_t>(cloud.point(i)[a] * 4.0), 3) * stride;
      stride *= 4;
    }
    counts[index] += 1.0;
  }
  double stat = 0.0;
  const double n = static_cast<double>(cloud.size());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double expected = n * probabilities[c];
    stat += (counts[c] - expected) * (counts[c] - expected) / expected;
  }
  return stat;
}

}  // namespace

TEST_CASE("seed derivation and generator") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sampling is deterministic and seed-sensitive") {
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  const DensityModel uniform(DensitySpec::uniform(), sq);
  CHECK(sample_points(sq, uniform, 500, 9) == sample_points(sq, uniform, 500, 9));
  std::set<std::vector<double>> clouds;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto a = sample_points(sq, uniform, 50, 1000 + s);
    const auto b = sample_points(sq, uniform, 50, 2000 + s);
    CHECK(a.coords() != b.coords());
    clouds.insert(a.coords());
    clouds.insert(b.coords());
  }
  CHECK(clouds.size() == 200);
}

TEST_CASE("samples lie in the polytope") {
  for (const auto& spec : {PolytopeSpec::hypercube(3), PolytopeSpec::simplex(3, true), PolytopeSpec::cross_polytope(3),
                           PolytopeSpec::regular_polygon(5), PolytopeSpec::box({1, 0.5, 2})}) {
    PolytopeSpec s = spec;
    s.mc_samples = 1000;
    const auto p = build_polytope(s);
    const DensityModel uniform(DensitySpec::uniform(), p);
    const auto cloud = sample_points(p, uniform, 2000, 77);
    CHECK(cloud.size() == 2000);
    CHECK(cloud.dim() == p.dim());
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(p.contains(cloud.point(i)));
  }
}

TEST_CASE("uniform mass of [0, 1/2]^2") {
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  const DensityModel uniform(DensitySpec::uniform(), sq);
  const auto cloud = sample_points(sq, uniform, 100'000, 2024);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) inside += cloud.point(i)[0] <= 0.5 && cloud.point(i)[1] <= 0.5;
  CHECK(static_cast<double>(inside) / 1e5 == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("corner simplex fills half of its bounding box") {
  const auto tri = build_polytope(PolytopeSpec::simplex(2));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u;
  std::size_t accepted = 0;
  for (int i = 0; i < 100'000; ++i) {
    const std::vector<double> x{u(gen), u(gen)};
    accepted += tri.contains(x);
  }
  CHECK(std::abs(static_cast<double>(accepted) / 1e5 - 0.5) <= 0.01);
  CHECK(tri.volume() == doctest::Approx(0.5));
}

TEST_CASE("uniform samples pass a chi-square test on a 4^d grid") {
  for (int d = 1; d <= 3; ++d) {
    const auto cube = build_polytope(PolytopeSpec::hypercube(d));
    const DensityModel uniform(DensitySpec::uniform(), cube);
    const auto cloud = sample_points(cube, uniform, 100'000, 300 + d);
    const std::size_t cells = static_cast<std::size_t>(std::pow(4, d));
    const std::vector<double> probabilities(cells, 1.0 / static_cast<double>(cells));
    CHECK(chi2_statistic(cloud, probabilities) < chi2_critical(d));
  }
}

TEST_CASE("product density samples pass a chi-square test") {
  // f(x, y) proportional to (1 + x)(1 + 2 y^2) on the unit square.
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  const DensityModel density(DensitySpec::product({{1, 1}, {1, 0, 2}}), sq);
  CHECK_FALSE(density.normalizer_estimated());
  CHECK(density.normalizer() == doctest::Approx(1.5 * 5.0 / 3.0).epsilon(1e-12));
  auto mass_x = [](double a, double b) { return ((b + b * b / 2) - (a + a * a / 2)) / 1.5; };
  auto mass_y = [](double a, double b) { return ((b + 2 * b * b * b / 3) - (a + 2 * a * a * a / 3)) / (5.0 / 3.0); };
  std::vector<double> probabilities;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) probabilities.push_back(mass_x(i / 4.0, (i + 1) / 4.0) * mass_y(j / 4.0, (j + 1) / 4.0));
  const auto cloud = sample_points(sq, density, 100'000, 8);
  CHECK(chi2_statistic(cloud, probabilities) < chi2_critical(2));
}

TEST_CASE("face infima of f proportional to 1 + x") {
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  const DensityModel density(DensitySpec::product({{1, 1}, {1}}), sq);
  CHECK(density.f0() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(density.f1() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  for (const auto& f : sq.faces()) {
    CHECK_FALSE(density.face_infimum_estimated(f.id));
    bool on_x0 = true, at_11 = f.dimension == 0;
    for (auto v : f.vertex_ids) {
      on_x0 = on_x0 && sq.vertices()[v][0] == 0.0;
      at_11 = at_11 && sq.vertices()[v][0] == 1.0 && sq.vertices()[v][1] == 1.0;
    }
    if (on_x0 && f.dimension == 1) CHECK(density.face_infimum(f.id) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    if (at_11) CHECK(density.face_infimum(f.id) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }
  CHECK(density.sup_bound() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(density.face_infimum(99), LookupError);
}

TEST_CASE("face infima off axis boxes are probe estimates bounded by the exact value") {
  // f proportional to 1 + x on the corner triangle: minimum at x = 0.
  const auto tri = build_polytope(PolytopeSpec::simplex(2));
  auto spec = DensitySpec::product({{1, 1}, {1}});
  spec.normalizer_samples = 200'000;
  const DensityModel density(spec, tri);
  CHECK(density.normalizer_estimated());
  // Exact normalizer: integral of (1 + x) over the triangle is 1/2 + 1/6.
  CHECK(density.normalizer() == doctest::Approx(2.0 / 3.0).epsilon(0.01));
  CHECK_FALSE(density.face_infimum_estimated(0));
  CHECK(density.face_infimum_estimated(tri.full_face().id));
  // The probe includes the vertices, so the x = 0 minimum is attained.
  CHECK(density.f0() == doctest::Approx(1.0 / density.normalizer()).epsilon(1e-12));
}

TEST_CASE("grid density") {
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  const DensityModel density(DensitySpec::grid({1, 3}, {2, 1}), sq);
  CHECK(density.normalizer() == doctest::Approx(2.0));
  CHECK(density.evaluate(std::vector<double>{0.25, 0.5}) == doctest::Approx(0.5));
  CHECK(density.evaluate(std::vector<double>{0.75, 0.5}) == doctest::Approx(1.5));
  CHECK(density.f0() == doctest::Approx(0.5));
  const auto cloud = sample_points(sq, density, 100'000, 4);
  std::size_t left = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) left += cloud.point(i)[0] < 0.5;
  CHECK(static_cast<double>(left) / 1e5 == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("density configuration errors") {
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  CHECK_THROWS_AS(DensityModel(DensitySpec::product({{1, 1}}), sq), ConfigError);
  CHECK_THROWS_AS(DensityModel(DensitySpec::product({{1, 1, 1, 1, 1}, {1}}), sq), ConfigError);
  CHECK_THROWS_AS(DensityModel(DensitySpec::product({{-1, 1}, {1}}), sq), ConfigError);
  CHECK_THROWS_AS(DensityModel(DensitySpec::grid({1, 2, 3}, {2, 1}), sq), ConfigError);
  CHECK_THROWS_AS(DensityModel(DensitySpec::grid({0, 1}, {2, 1}), sq), ConfigError);
}

TEST_CASE("sampling efficiency errors") {
  auto spec = PolytopeSpec::simplex(12);
  spec.mc_samples = 10;
  // Acceptance 1/12! is far below the budget.
  const auto thin = build_polytope(spec);
  const DensityModel uniform(DensitySpec::uniform(), thin);
  CHECK_THROWS_AS(sample_points(thin, uniform, 10, 1), SamplingEfficiencyError);
  const auto tri = build_polytope(PolytopeSpec::simplex(2));
  const DensityModel flat(DensitySpec::uniform(), tri);
  CHECK_THROWS_AS(sample_points(tri, flat, 10, 1, SamplingOptions{1.5}), SamplingEfficiencyError);
  CHECK_THROWS_AS(sample_points(tri, flat, 0, 1), DomainError);
}

TEST_CASE("halton points") {
  CHECK(halton_point(1, 2) == std::vector<double>{0.5, 1.0 / 3.0});
  CHECK(halton_point(2, 2) == std::vector<double>{0.25, 2.0 / 3.0});
}

TEST_CASE("point cloud validation") {
  CHECK_THROWS_AS(PointCloud(2, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(PointCloud(0, {}), DomainError);
  const PointCloud c(2, {1, 2, 3, 4});
  CHECK(c.size() == 2);
  CHECK(c.point(1)[0] == 3.0);
}

TEST_CASE("normalized densities integrate to one") {
  auto check = [](const Polytope& p, const DensitySpec& spec) {
    const DensityModel density(spec, p);
    std::mt19937_64 gen(606);
    const auto& box = p.bounding_box();
    double box_volume = 1.0;
    std::vector<std::uniform_real_distribution<double>> axes;
    for (int i = 0; i < p.dim(); ++i) {
      box_volume *= box.hi[i] - box.lo[i];
      axes.emplace_back(box.lo[i], box.hi[i]);
    }
    constexpr int kSamples = 400'000;
    double sum = 0.0, lowest = 0.0;
    std::vector<double> x(static_cast<std::size_t>(p.dim()));
    for (int s = 0; s < kSamples; ++s) {
      for (int i = 0; i < p.dim(); ++i) x[i] = axes[i](gen);
      if (p.contains(x)) {
        const double v = density.evaluate(x);
        lowest = std::min(lowest, v);
        sum += v;
      }
    }
    CHECK(lowest >= 0.0);
    CHECK(sum * box_volume / kSamples == doctest::Approx(1.0).epsilon(0.01));
  };
  check(build_polytope(PolytopeSpec::simplex(2)), DensitySpec::product({{1, 1}, {1, 0, 2}}));
  check(build_polytope(PolytopeSpec::regular_polygon(5)), DensitySpec::grid({1, 2, 3, 4}, {2, 2}));
  check(build_polytope(PolytopeSpec::hypercube(3)), DensitySpec::product({{1, 1}, {2, -1}, {1, 0, 0, 1}}));
  check(build_polytope(PolytopeSpec::simplex(3, true)), DensitySpec::uniform());
}
