#include "manin/lattice_generators.hpp"

#include "manin/error.hpp"
#include "manin/newton_polyhedron.hpp"
#include "manin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace manin {

namespace {

bool dominates(const IntVector& a, const IntVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

std::int64_t degree(const IntVector& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); }

bool graded_lex_less(const IntVector& a, const IntVector& b) {
  auto da = degree(a), db = degree(b);
  if (da != db) return da < db;
  return a > b;
}

// Every vector of the given degree with prescribed first coordinate, in
// descending lexicographic order.
template <class F>
void for_each_composition(std::size_t arity, std::int64_t first, std::int64_t total, F&& f) {
  IntVector v(arity, 0);
  v[0] = first;
  std::int64_t rest = total - first;
  if (arity == 1) {
    if (rest == 0) f(v);
    return;
  }
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i + 1 == arity) {
      v[i] = left;
      f(v);
      return;
    }
    for (std::int64_t x = left; x >= 0; --x) {
      v[i] = x;
      rec(i + 1, left - x);
    }
  };
  rec(1, rest);
}

double binomial(double n, double k) { return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)); }

std::vector<IntVector> enumerate_minimal(const UniformMultiplicativeSpec& spec, std::int64_t cap) {
  const std::size_t n = spec.arity();
  if (binomial(static_cast<double>(cap + n), static_cast<double>(n)) > 5e8)
    throw Error(ErrorCode::BoxTooLarge, "generator enumeration at cap " + std::to_string(cap) + " is too large");
  const std::size_t slices = static_cast<std::size_t>(cap) + 1;
  std::vector<std::vector<IntVector>> found(slices);
  parallel_for(slices, [&](std::size_t s) {
    auto first = static_cast<std::int64_t>(s);
    auto& accepted = found[s];
    for (std::int64_t total = std::max<std::int64_t>(first, 1); total <= cap; ++total) {
      if (n == 1 && total != first) continue;
      for_each_composition(n, first, total, [&](const IntVector& v) {
        for (const auto& a : accepted)
          if (dominates(v, a)) return;
        if (spec(v) != 0) accepted.push_back(v);
      });
    }
  });
  std::vector<IntVector> all;
  for (auto& f : found) all.insert(all.end(), f.begin(), f.end());
  std::sort(all.begin(), all.end(), graded_lex_less);
  std::vector<IntVector> minimal;
  for (const auto& v : all) {
    bool dominated = false;
    for (const auto& m : minimal)
      if (dominates(v, m)) dominated = true;
    if (!dominated) minimal.push_back(v);
  }
  return minimal;
}

std::vector<bool> compact_members(const std::vector<IntVector>& points) {
  std::vector<bool> flags(points.size(), false);
  if (points.empty()) return flags;
  NewtonPolyhedron e = build_polyhedron(points, 64);
  const std::size_t n = e.dimension();
  for (std::size_t k = 0; k < points.size(); ++k) {
    RationalVector p = to_rational(points[k]);
    std::vector<bool> bounded(n, false);
    for (const auto& f : e.facets()) {
      if (dot(f.normal, p) != f.offset) continue;
      for (std::size_t i = 0; i < n; ++i)
        if (f.normal[i] > 0) bounded[i] = true;
    }
    flags[k] = std::all_of(bounded.begin(), bounded.end(), [](bool b) { return b; });
  }
  return flags;
}

std::vector<IntVector> sorted_vertices(const std::vector<IntVector>& points) {
  NewtonPolyhedron e = build_polyhedron(points, 64);
  std::vector<IntVector> out;
  for (auto i : e.vertex_indices()) out.push_back(points[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::int64_t default_cap(std::size_t coordinates, std::int64_t scale) {
  return 4 * static_cast<std::int64_t>(coordinates) * std::max<std::int64_t>(1, scale);
}

std::uint64_t membership(const UniformMultiplicativeSpec& spec, const IntVector& nu) { return spec(nu); }

LatticePointSet minimal_generators(const UniformMultiplicativeSpec& spec, std::int64_t cap) {
  if (cap < 1) throw Error(ErrorCode::PreconditionViolation, "generator cap must be positive");
  LatticePointSet out;
  out.arity = spec.arity();
  out.cap = cap;
  out.points = enumerate_minimal(spec, cap);
  if (out.points.empty())
    throw Error(ErrorCode::CapTooSmall, "no support points with |nu| <= " + std::to_string(cap));
  out.compact_face_members = compact_members(out.points);
  return out;
}

LatticePointSet stabilization_check(const UniformMultiplicativeSpec& spec, const LatticePointSet& set) {
  LatticePointSet bigger = minimal_generators(spec, 2 * set.cap);
  bigger.stabilized = sorted_vertices(set.points) == sorted_vertices(bigger.points);
  return bigger;
}

RationalMatrix to_rational_points(const LatticePointSet& set) {
  RationalMatrix out;
  for (const auto& p : set.points) out.push_back(to_rational(p));
  return out;
}

}  // namespace manin
