#pragma once

#include "manin/rational.hpp"

#include <cstddef>
#include <vector>

namespace manin {

// Inequality <normal, x> >= offset.
struct Facet {
  RationalVector normal;
  Rational offset;
};

// Facets of conv(points) + R_+^n for points of arbitrary sign, by double
// description on the cone of valid inequalities (w >= 0, m).
std::vector<Facet> upper_hull_facets(const RationalMatrix& points);

class NewtonPolyhedron {
 public:
  NewtonPolyhedron() = default;
  NewtonPolyhedron(std::size_t dimension, RationalMatrix generators, std::vector<Facet> facets);

  std::size_t dimension() const { return dimension_; }
  const RationalMatrix& generators() const { return generators_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const RationalMatrix& vertices() const { return vertices_; }
  // Indices into generators() of the vertices.
  const std::vector<std::size_t>& vertex_indices() const { return vertex_indices_; }

  bool contains(const RationalVector& x) const;
  // m(a) = min over E of <a, x>, attained at a vertex.
  Rational support_value(const RationalVector& a) const;

 private:
  std::size_t dimension_ = 0;
  RationalMatrix generators_;
  std::vector<Facet> facets_;
  RationalMatrix vertices_;
  std::vector<std::size_t> vertex_indices_;
};

NewtonPolyhedron build_polyhedron(const RationalMatrix& points, std::size_t hull_limit = 10);
NewtonPolyhedron build_polyhedron(const std::vector<IntVector>& points, std::size_t hull_limit = 10);

struct Face {
  std::vector<std::size_t> generator_indices;
  RationalMatrix generators;
  std::vector<std::size_t> recession_directions;
  std::size_t dimension = 0;
  bool compact = true;
};

struct SupportResult {
  Rational minimum;
  Face face;
};

SupportResult support_face(const NewtonPolyhedron& e, const RationalVector& a);

struct DiagonalFace {
  Rational t0;
  Face face;
  RationalVector polar;
  Rational iota;
  long rho = 0;
  bool compact = true;
  // Facets through t0 * 1, and their normals scaled so the offset is 1.
  std::vector<std::size_t> active_facets;
  RationalMatrix active_normals;
};

DiagonalFace diagonal_face(const NewtonPolyhedron& e);

struct LpResult {
  Rational iota;
  RationalVector polar;
};

// min sum(c) subject to <c, v> >= 1 for every vertex v and c >= 0.
LpResult iota_lp(const NewtonPolyhedron& e);

// (face meets the diagonal) == (|c| == iota); c must be a normalized polar
// vector of the face.
bool lemma1_check(const NewtonPolyhedron& e, const Face& face, const RationalVector& c);
// Affine dimension of conv(generators) + cone(recession directions).
std::size_t affine_dimension(const RationalMatrix& points, const std::vector<std::size_t>& recession,
                             std::size_t ambient);

}  // namespace manin
