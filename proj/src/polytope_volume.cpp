#include "manin/error.hpp"
#include "manin/volume_constants.hpp"

#include <algorithm>
#include <cstdint>

namespace manin {

namespace {

struct HalfSpace {
  RationalVector h;  // h . x <= b
  Rational b;
};

struct ConeRay {
  RationalVector y;  // (h, b)
  std::vector<bool> zero;
};

// Facets of a full-dimensional polytope in R^k by double description on the
// cone {(h, b) : h . p <= b for every point p}.
std::vector<HalfSpace> facets(const RationalMatrix& pts) {
  const std::size_t k = pts.front().size();
  const std::size_t d = k + 1;
  auto row = [&](std::size_t i) {
    RationalVector r(d);
    for (std::size_t j = 0; j < k; ++j) r[j] = -pts[i][j];
    r[k] = 1;
    return r;
  };
  // k+1 affinely independent points seed a simplicial cone.
  std::vector<std::size_t> seed;
  RationalMatrix chosen;
  for (std::size_t i = 0; i < pts.size() && seed.size() < d; ++i) {
    chosen.push_back(row(i));
    if (rank(chosen) == chosen.size())
      seed.push_back(i);
    else
      chosen.pop_back();
  }
  if (seed.size() < d) throw Error(ErrorCode::PreconditionViolation, "polytope is not full-dimensional");
  std::vector<ConeRay> rays;
  for (std::size_t i = 0; i < d; ++i) {
    RationalVector rhs(d, Rational(0));
    rhs[i] = 1;
    ConeRay r{*solve(chosen, rhs), std::vector<bool>(pts.size(), false)};
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) r.zero[seed[j]] = true;
    rays.push_back(std::move(r));
  }
  for (std::size_t c = 0; c < pts.size(); ++c) {
    if (std::find(seed.begin(), seed.end(), c) != seed.end()) continue;
    const RationalVector a = row(c);
    std::vector<Rational> s(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      s[r] = dot(a, rays[r].y);
      if (s[r] > 0) pos.push_back(r);
      if (s[r] < 0) neg.push_back(r);
    }
    std::vector<ConeRay> next;
    if (!neg.empty()) {
      for (auto p : pos) {
        for (auto q : neg) {
          std::vector<bool> common(pts.size());
          std::size_t count = 0;
          for (std::size_t j = 0; j < pts.size(); ++j) {
            common[j] = rays[p].zero[j] && rays[q].zero[j];
            count += common[j];
          }
          if (count + 2 < d) continue;
          bool adjacent = true;
          for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
            if (r == p || r == q) continue;
            bool contains = true;
            for (std::size_t j = 0; j < pts.size() && contains; ++j)
              if (common[j] && !rays[r].zero[j]) contains = false;
            if (contains) adjacent = false;
          }
          if (!adjacent) continue;
          ConeRay ray{RationalVector(d), common};
          for (std::size_t j = 0; j < d; ++j) ray.y[j] = s[p] * rays[q].y[j] - s[q] * rays[p].y[j];
          ray.zero[c] = true;
          next.push_back(std::move(ray));
        }
      }
    }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (s[r] < 0) continue;
      if (s[r] == 0) rays[r].zero[c] = true;
      next.push_back(std::move(rays[r]));
    }
    rays = std::move(next);
  }
  std::vector<HalfSpace> out;
  for (const auto& r : rays) out.push_back({RationalVector(r.y.begin(), r.y.begin() + static_cast<std::ptrdiff_t>(k)), r.y[k]});
  return out;
}

// Coordinates onto which the affine hull projects injectively.
std::vector<std::size_t> affine_frame(const RationalMatrix& pts) {
  RationalMatrix dirs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RationalVector v(pts[i].size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = pts[i][j] - pts[0][j];
    dirs.push_back(std::move(v));
  }
  if (dirs.empty()) return {};
  return row_reduce(dirs);
}

// Volume of a full-dimensional polytope: pyramids over the facets from the
// first point. Each facet is measured in a coordinate projection, which
// rescales its volume by |h_j| / |h| and cancels the height's 1 / |h|.
Rational volume(const RationalMatrix& pts) {
  const std::size_t k = pts.front().size();
  if (k == 1) {
    Rational lo = pts.front()[0], hi = lo;
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }
  const RationalVector& apex = pts.front();
  Rational total = 0;
  for (const auto& f : facets(pts)) {
    Rational height = f.b - dot(f.h, apex);
    if (height == 0) continue;
    std::size_t drop = 0;
    while (f.h[drop] == 0) ++drop;
    RationalMatrix face;
    for (const auto& p : pts) {
      if (dot(f.h, p) != f.b) continue;
      RationalVector q;
      for (std::size_t j = 0; j < k; ++j)
        if (j != drop) q.push_back(p[j]);
      face.push_back(std::move(q));
    }
    total += height / abs(f.h[drop]) * volume(face) / static_cast<long>(k);
  }
  return total;
}

}  // namespace

Rational polytope_volume(const RationalMatrix& points) {
  if (points.empty()) return 0;
  const std::size_t n = points.front().size();
  RationalMatrix unique;
  for (const auto& p : points)
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
  if (affine_frame(unique).size() < n) return 0;
  if (n == 0) return 1;
  return volume(unique);
}

}  // namespace manin
