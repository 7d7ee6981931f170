#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "polylink/error.hpp"
#include "polylink/geometry.hpp"

using namespace polylink;
using std::numbers::pi;

namespace {

std::map<int, std::size_t> count_by_dimension(const Polytope& p) {
  std::map<int, std::size_t> counts;
  for (const auto& f : p.faces()) ++counts[f.dimension];
  return counts;
}

// Faces of [0,1]^d are words over {0, 1, *}; count those with D stars.
std::size_t cube_faces_of_dimension(int d, int D) {
  std::size_t total = 1, count = 0;
  for (int i = 0; i < d; ++i) total *= 3;
  for (std::size_t w = 0; w < total; ++w) {
    int stars = 0;
    for (std::size_t r = w; r > 0; r /= 3) stars += (r % 3 == 2);
    count += (stars == D);
  }
  return count;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
  CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0));
}

TEST_CASE("hypercube(2) lattice") {
  const auto p = build_polytope(PolytopeSpec::hypercube(2));
  auto counts = count_by_dimension(p);
  CHECK(counts[0] == 4);
  CHECK(counts[1] == 4);
  CHECK(counts[2] == 1);
  CHECK(face_lattice(p).size() == 9);
  CHECK(p.volume() == 1.0);
  CHECK(p.full_face().dimension == 2);
  CHECK(p.full_face().angular_volume == unit_ball_volume(2));
}

TEST_CASE("hypercube(3) lattice and angular volumes") {
  const auto p = build_polytope(PolytopeSpec::hypercube(3));
  auto counts = count_by_dimension(p);
  CHECK(counts[0] == 8);
  CHECK(counts[1] == 12);
  CHECK(counts[2] == 6);
  CHECK(counts[3] == 1);
  CHECK(p.faces().size() == 27);
  for (const auto& f : p.faces()) {
    const double rho = angular_volume(p, f);
    switch (f.dimension) {
      case 3: CHECK(rho == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15)); break;
      case 2: CHECK(rho == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-15)); break;
      case 1:
        CHECK(rho == doctest::Approx(pi / 3.0).epsilon(1e-15));
        CHECK(dihedral_angle(p, f) == doctest::Approx(pi / 2.0).epsilon(1e-15));
        break;
      case 0: CHECK(rho == doctest::Approx(pi / 6.0).epsilon(1e-15)); break;
    }
  }
}

TEST_CASE("hypercube(d) face counts match sign-vector enumeration") {
  for (int d = 1; d <= 6; ++d) {
    const auto p = build_polytope(PolytopeSpec::hypercube(d));
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    CHECK(p.faces().size() == total);
    auto counts = count_by_dimension(p);
    for (int D = 0; D <= d; ++D) CHECK(counts[D] == cube_faces_of_dimension(d, D));
  }
}

TEST_CASE("facet and interior angular volumes are exact") {
  for (const auto& spec : {PolytopeSpec::hypercube(4), PolytopeSpec::simplex(3), PolytopeSpec::cross_polytope(3),
                           PolytopeSpec::regular_polygon(7), PolytopeSpec::simplex(4, true)}) {
    PolytopeSpec s = spec;
    s.mc_samples = 1000;
    const auto p = build_polytope(s);
    const double theta = unit_ball_volume(p.dim());
    for (const auto& f : p.faces()) {
      if (f.dimension == p.dim()) CHECK(f.angular_volume == theta);
      if (f.dimension == p.dim() - 1) CHECK(f.angular_volume == theta / 2.0);
      CHECK(f.angular_volume > 0.0);
      CHECK(f.angular_volume <= theta);
    }
  }
}

TEST_CASE("corner simplex(2): vertex angles") {
  const auto p = build_polytope(PolytopeSpec::simplex(2));
  CHECK(p.vertices().size() == 3);
  CHECK(p.volume() == doctest::Approx(0.5));
  std::map<std::size_t, double> angle;
  for (const auto& f : p.faces())
    if (f.dimension == 0) angle[f.vertex_ids.front()] = vertex_angle(p, f);
  CHECK(angle[0] == doctest::Approx(pi / 2.0).epsilon(1e-14));  // origin
  CHECK(angle[1] == doctest::Approx(pi / 4.0).epsilon(1e-14));
  CHECK(angle[2] == doctest::Approx(pi / 4.0).epsilon(1e-14));
}

TEST_CASE("simplex(3) and cross_polytope(3) lattices") {
  const auto tet = build_polytope(PolytopeSpec::simplex(3));
  auto c = count_by_dimension(tet);
  CHECK(c[0] == 4);
  CHECK(c[1] == 6);
  CHECK(c[2] == 4);
  CHECK(c[3] == 1);
  CHECK(tet.faces().size() == 15);
  CHECK(tet.volume() == doctest::Approx(1.0 / 6.0));

  const auto oct = build_polytope(PolytopeSpec::cross_polytope(3));
  c = count_by_dimension(oct);
  CHECK(c[0] == 6);
  CHECK(c[1] == 12);
  CHECK(c[2] == 8);
  CHECK(oct.volume() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("Euler characteristic of 2- and 3-dimensional polytopes") {
  std::mt19937_64 gen(11);
  std::vector<Polytope> polys;
  polys.push_back(build_polytope(PolytopeSpec::hypercube(3)));
  polys.push_back(build_polytope(PolytopeSpec::simplex(3, true)));
  polys.push_back(build_polytope(PolytopeSpec::cross_polytope(3)));
  polys.push_back(build_polytope(PolytopeSpec::box({1, 2, 3})));
  polys.push_back(build_polytope(PolytopeSpec::regular_polygon(9)));
  for (int i = 0; i < 5; ++i) {
    std::normal_distribution<double> g;
    std::vector<Point> pts;
    for (int j = 0; j < 14; ++j) pts.push_back({g(gen), g(gen), g(gen)});
    polys.push_back(build_polytope(PolytopeSpec::from_vertices(3, pts)));
  }
  for (const auto& p : polys) {
    auto c = count_by_dimension(p);
    if (p.dim() == 2) CHECK(static_cast<long>(c[0]) - static_cast<long>(c[1]) == 0);
    if (p.dim() == 3) CHECK(static_cast<long>(c[0]) - static_cast<long>(c[1]) + static_cast<long>(c[2]) == 2);
  }
}

TEST_CASE("lattice soundness: children are subsets of parents") {
  for (const auto& spec : {PolytopeSpec::hypercube(4), PolytopeSpec::simplex(4), PolytopeSpec::cross_polytope(4),
                           PolytopeSpec::regular_polygon(5)}) {
    PolytopeSpec s = spec;
    s.mc_samples = 1000;
    const auto p = build_polytope(s);
    for (const auto& f : p.faces()) {
      if (f.dimension > 0) CHECK_FALSE(f.child_ids.empty());
      if (f.dimension < p.dim()) CHECK_FALSE(f.parent_ids.empty());
      for (auto pid : f.parent_ids) {
        const auto& parent = p.face(pid);
        CHECK(parent.dimension == f.dimension + 1);
        CHECK(std::includes(parent.vertex_ids.begin(), parent.vertex_ids.end(), f.vertex_ids.begin(),
                            f.vertex_ids.end()));
      }
      // Every face lies in d - D facets or more.
      CHECK(f.active_halfspaces.size() >= static_cast<std::size_t>(p.dim() - f.dimension));
    }
  }
}

TEST_CASE("dihedral angles") {
  const auto reg = build_polytope(PolytopeSpec::simplex(3, true));
  const auto box = build_polytope(PolytopeSpec::box({1, 1, 2}));
  for (const auto& f : reg.faces())
    if (f.dimension == 1) {
      CHECK(dihedral_angle(reg, f) == doctest::Approx(std::acos(1.0 / 3.0)).epsilon(1e-13));
      CHECK(f.angular_volume == doctest::Approx(2.0 * std::acos(1.0 / 3.0) / 3.0).epsilon(1e-13));
    }
  for (const auto& f : box.faces())
    if (f.dimension == 1) CHECK(dihedral_angle(box, f) == doctest::Approx(pi / 2.0));
  CHECK_THROWS_AS(dihedral_angle(reg, reg.faces().front()), DomainError);
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  CHECK_THROWS_AS(dihedral_angle(sq, sq.faces()[4]), DomainError);
}

TEST_CASE("vertex solid angles by spherical excess") {
  // Regular tetrahedron vertex: arccos(23/27).
  const auto reg = build_polytope(PolytopeSpec::simplex(3, true));
  for (const auto& f : reg.faces())
    if (f.dimension == 0) CHECK(vertex_solid_angle(reg, f) == doctest::Approx(std::acos(23.0 / 27.0)).epsilon(1e-12));
  // Corner simplex: the origin is an octant.
  const auto corner = build_polytope(PolytopeSpec::simplex(3));
  CHECK(vertex_solid_angle(corner, corner.faces()[0]) == doctest::Approx(pi / 2.0).epsilon(1e-13));
  // Octahedron vertices agree with the Monte Carlo path.
  const auto oct = build_polytope(PolytopeSpec::cross_polytope(3));
  for (const auto& f : oct.faces())
    if (f.dimension == 0) {
      const double mc = angular_volume_monte_carlo(oct, f, 200'000, 5 + f.id);
      CHECK(f.angular_volume == doctest::Approx(mc).epsilon(0.02));
      CHECK(f.rho_method == RhoMethod::solid_angle);
    }
}

TEST_CASE("Monte Carlo angular volume matches the orthant formula") {
  for (int d = 2; d <= 4; ++d) {
    const auto p = build_polytope(PolytopeSpec::hypercube(d));
    for (const auto& f : p.faces()) {
      if (f.vertex_ids.front() != 0) continue;  // one face per codimension class at the origin
      const double mc = angular_volume_monte_carlo(p, f, 300'000, 17 + f.id);
      const double exact = unit_ball_volume(d) / std::pow(2.0, d - f.dimension);
      CHECK(mc == doctest::Approx(exact).epsilon(0.02));
    }
  }
}

TEST_CASE("polygon angle sum") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + trial % 8;
    const auto p = build_polytope(PolytopeSpec::from_vertices(2, oracle::random_convex_polygon(gen, m)));
    double omega = 0.0, rho = 0.0;
    std::size_t vertices = 0;
    for (const auto& f : p.faces())
      if (f.dimension == 0) {
        omega += vertex_angle(p, f);
        rho += f.angular_volume;
        ++vertices;
      }
    const double mm = static_cast<double>(vertices);
    CHECK(std::abs(omega - (mm - 2.0) * pi) <= 1e-9);
    CHECK(std::abs(rho - (mm - 2.0) * pi / 2.0) <= 1e-9);
  }
}

TEST_CASE("contains") {
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  CHECK(contains(sq, std::vector<double>{0.5, 0.5}));
  CHECK_FALSE(contains(sq, std::vector<double>{1.0 + 1e-6, 0.5}));
  CHECK(contains(sq, std::vector<double>{1.0, 0.5}));
  CHECK_THROWS_AS(contains(sq, std::vector<double>{0.5}), DomainError);
}

TEST_CASE("explicit vertices: hull discards interior and boundary points") {
  std::vector<Point> pts;
  for (int m = 0; m < 8; ++m) pts.push_back({double(m & 1), double((m >> 1) & 1), double((m >> 2) & 1)});
  pts.push_back({0.5, 0.5, 0.5});  // interior
  pts.push_back({0.5, 0.0, 0.0});  // edge midpoint
  pts.push_back({0.5, 0.5, 1.0});  // facet centre
  const auto p = build_polytope(PolytopeSpec::from_vertices(3, pts));
  CHECK(p.vertices().size() == 8);
  CHECK(p.faces().size() == 27);
  CHECK(p.volume() == doctest::Approx(1.0));
  for (const auto& f : p.faces()) {
    if (f.dimension == 0) CHECK(f.angular_volume == doctest::Approx(pi / 6.0).epsilon(1e-12));
    if (f.dimension == 1) CHECK(f.angular_volume == doctest::Approx(pi / 3.0).epsilon(1e-12));
  }

  const auto sq = build_polytope(PolytopeSpec::from_vertices(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}}));
  CHECK(sq.vertices().size() == 4);
  CHECK(sq.volume() == doctest::Approx(1.0));
}

TEST_CASE("explicit vertices: degenerate and unsupported input") {
  CHECK_THROWS_AS(build_polytope(PolytopeSpec::from_vertices(2, {{0, 0}, {1, 1}, {2, 2}})), ConstructionError);
  CHECK_THROWS_AS(build_polytope(PolytopeSpec::from_vertices(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}})),
                  ConstructionError);
  CHECK_THROWS_AS(build_polytope(PolytopeSpec::from_vertices(2, {{0, 0}, {1, 0}})), ConstructionError);
  CHECK_THROWS_AS(
      build_polytope(PolytopeSpec::from_vertices(4, {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})),
      UnsupportedDimensionError);
}

TEST_CASE("scaling multiplies volume by s^d and leaves angular volumes unchanged") {
  auto spec = PolytopeSpec::simplex(3, true);
  const auto base = build_polytope(spec);
  spec.scale = 2.0;
  const auto big = build_polytope(spec);
  CHECK(big.volume() == doctest::Approx(8.0 * base.volume()));
  for (std::size_t i = 0; i < base.faces().size(); ++i)
    CHECK(big.faces()[i].angular_volume == doctest::Approx(base.faces()[i].angular_volume).epsilon(1e-12));
}

TEST_CASE("angular_volume rejects foreign faces") {
  const auto sq = build_polytope(PolytopeSpec::hypercube(2));
  const auto cube = build_polytope(PolytopeSpec::hypercube(3));
  CHECK_THROWS_AS(angular_volume(sq, cube.faces()[20]), LookupError);
  CHECK_THROWS_AS(sq.face(99), LookupError);
}

TEST_CASE("bounding box and halfspace invariants") {
  for (const auto& spec : {PolytopeSpec::hypercube(3), PolytopeSpec::simplex(4, true), PolytopeSpec::cross_polytope(2),
                           PolytopeSpec::regular_polygon(6)}) {
    PolytopeSpec s = spec;
    s.mc_samples = 1000;
    const auto p = build_polytope(s);
    for (const auto& h : p.halfspaces()) {
      double n2 = 0.0;
      for (double x : h.normal) n2 += x * x;
      CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (const auto& v : p.vertices())
      for (int i = 0; i < p.dim(); ++i) {
        CHECK(v[i] >= p.bounding_box().lo[i]);
        CHECK(v[i] <= p.bounding_box().hi[i]);
      }
    for (const auto& f : p.faces()) CHECK(p.contains(f.relative_interior_point));
  }
}
