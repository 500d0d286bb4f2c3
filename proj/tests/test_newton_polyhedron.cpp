#include "manin/error.hpp"
#include "manin/newton_polyhedron.hpp"
#include "manin/volume_constants.hpp"

#include <doctest.h>

#include <random>

using namespace manin;

namespace {

RationalVector rv(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

// Brute-force check of a facet list: each facet is valid on all points and
// recession directions, and tight on at least n affinely independent points
// or rays.
bool facet_valid(const Facet& f, const std::vector<IntVector>& pts) {
  for (const auto& w : f.normal)
    if (w < 0) return false;
  for (const auto& p : pts)
    if (dot(f.normal, to_rational(p)) < f.offset) return false;
  return true;
}

}  // namespace

TEST_CASE("facets of a simple staircase") {
  NewtonPolyhedron e = build_polyhedron(std::vector<IntVector>{{2, 0}, {0, 2}});
  CHECK(e.vertices().size() == 2);
  bool found = false;
  for (const auto& f : e.facets())
    if (f.normal == rv({1, 1}) && f.offset == 2) found = true;
  CHECK(found);
  CHECK(e.support_value(rv({1, 3})) == 2);
  CHECK(e.contains(rv({1, 1})));
  CHECK_FALSE(e.contains(RationalVector{Rational(1, 2), Rational(1, 2)}));
}

TEST_CASE("facets are valid and every generator satisfies them") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 3;
    std::vector<IntVector> pts;
    for (std::size_t k = 0; k < 2 + rng() % 5; ++k) {
      IntVector v(n);
      for (auto& x : v) x = static_cast<std::int64_t>(rng() % 8);
      if (std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; })) pts.push_back(v);
    }
    if (pts.empty()) continue;
    NewtonPolyhedron e = build_polyhedron(pts);
    for (const auto& f : e.facets()) CHECK(facet_valid(f, pts));
    // Every point outside E violates some facet: probe a point slightly below each vertex.
    for (const auto& v : e.vertices()) {
      RationalVector below = v;
      for (auto& x : below) x -= Rational(1, 7);
      CHECK_FALSE(e.contains(below));
    }
  }
}

TEST_CASE("diagonal face of the torus and of a=(1,1)") {
  DiagonalFace t = diagonal_face(build_polyhedron(std::vector<IntVector>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK(t.t0 == Rational(1, 3));
  CHECK(t.iota == 3);
  CHECK(t.rho == 1);
  CHECK(t.polar == rv({1, 1, 1}));
  CHECK(t.compact);
  DiagonalFace a = diagonal_face(build_polyhedron(std::vector<IntVector>{{2, 0}, {0, 2}}));
  CHECK(a.polar == RationalVector{Rational(1, 2), Rational(1, 2)});
  CHECK(a.iota == 1);
}

TEST_CASE("polar vector averages the normals through the diagonal point") {
  // generators of x1 x2 = x3^2 as a toric problem
  NewtonPolyhedron e = build_polyhedron(std::vector<IntVector>{{2, 0, 1}, {0, 2, 1}});
  DiagonalFace f = diagonal_face(e);
  CHECK(f.iota == 1);
  CHECK(f.rho == 1);
  CHECK(f.t0 == 1);
  CHECK(sum(f.polar) == 1);
  for (const auto& g : f.face.generators) CHECK(dot(f.polar, g) == 1);
  CHECK(iota_lp(e).iota == 1);
}

TEST_CASE("LP iota matches the diagonal face on random polyhedra") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    std::size_t n = 2 + rng() % 3;
    std::vector<IntVector> pts;
    for (std::size_t k = 0; k < 1 + rng() % 5; ++k) {
      IntVector v(n);
      for (auto& x : v) x = static_cast<std::int64_t>(rng() % 10);
      if (std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; })) pts.push_back(v);
    }
    if (pts.empty()) continue;
    NewtonPolyhedron e = build_polyhedron(pts);
    DiagonalFace f = diagonal_face(e);
    LpResult lp = iota_lp(e);
    CHECK(lp.iota == f.iota);
    CHECK(f.iota * f.t0 == 1);
    for (const auto& v : e.vertices()) CHECK(dot(lp.polar, v) >= 1);
  }
}

TEST_CASE("support faces and affine dimension") {
  NewtonPolyhedron e = build_polyhedron(std::vector<IntVector>{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}});
  SupportResult s = support_face(e, rv({1, 1, 1}));
  CHECK(s.minimum == 2);
  CHECK(s.face.generators.size() == 4);
  CHECK(s.face.dimension == 2);
  SupportResult r = support_face(e, rv({1, 0, 0}));
  CHECK(r.minimum == 0);
  CHECK_FALSE(r.face.compact);
  CHECK_THROWS_AS(support_face(e, rv({0, 0, 0})), Error);
}

TEST_CASE("exact polytope volumes") {
  RationalMatrix tri = {rv({0, 0}), {Rational(1, 2), Rational(1, 2)}, rv({0, 1})};
  CHECK(polytope_volume(tri) == Rational(1, 4));
  RationalMatrix five = {rv({0, 0, 0}), rv({1, 0, 0}), rv({0, 1, 0}), rv({0, 0, 1}),
                         {Rational(1, 3), Rational(1, 3), Rational(1, 3)}};
  CHECK(polytope_volume(five) == Rational(1, 6));
  RationalMatrix cube;
  for (int m = 0; m < 8; ++m) cube.push_back(rv({m & 1, (m >> 1) & 1, (m >> 2) & 1}));
  CHECK(polytope_volume(cube) == 1);
}

TEST_CASE("simplex volume ignores interior points") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t k = 2 + rng() % 4;
    RationalMatrix simplex;
    for (std::size_t i = 0; i <= k; ++i) {
      RationalVector v(k);
      for (auto& x : v) x = Rational(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
      simplex.push_back(v);
    }
    RationalMatrix edges;
    for (std::size_t i = 1; i <= k; ++i) {
      RationalVector e(k);
      for (std::size_t j = 0; j < k; ++j) e[j] = simplex[i][j] - simplex[0][j];
      edges.push_back(e);
    }
    Rational fact = 1;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<long>(i);
    Rational expected = abs(determinant(edges)) / fact;
    RationalMatrix cloud = simplex;
    for (int extra = 0; extra < 6; ++extra) {
      RationalVector p(k, Rational(0));
      Rational total = 0;
      std::vector<Rational> w;
      for (std::size_t i = 0; i <= k; ++i) {
        w.emplace_back(static_cast<long>(1 + rng() % 5));
        total += w.back();
      }
      for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = 0; j < k; ++j) p[j] += w[i] / total * simplex[i][j];
      cloud.insert(cloud.begin() + static_cast<std::ptrdiff_t>(rng() % cloud.size()), p);
    }
    CHECK(polytope_volume(cloud) == expected);
  }
}
