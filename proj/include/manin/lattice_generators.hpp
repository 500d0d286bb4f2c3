#pragma once

#include "manin/problem_model.hpp"

#include <cstdint>
#include <vector>

namespace manin {

struct LatticePointSet {
  std::size_t arity = 0;
  // Minimal elements of the weight support, graded-lexicographic order.
  std::vector<IntVector> points;
  std::int64_t cap = 0;
  bool stabilized = false;
  // Per point: lies in at least one compact face of the Newton polyhedron.
  std::vector<bool> compact_face_members;
};

// 4 (n+1) max(1, scale) where scale is the largest matrix entry or q.
std::int64_t default_cap(std::size_t coordinates, std::int64_t scale);

LatticePointSet minimal_generators(const UniformMultiplicativeSpec& spec, std::int64_t cap);
LatticePointSet stabilization_check(const UniformMultiplicativeSpec& spec, const LatticePointSet& set);
std::uint64_t membership(const UniformMultiplicativeSpec& spec, const IntVector& nu);
RationalMatrix to_rational_points(const LatticePointSet& set);

}  // namespace manin
