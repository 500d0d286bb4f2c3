#include "manin/newton_polyhedron.hpp"

#include "manin/error.hpp"

#include <algorithm>
#include <cstdint>

namespace manin {

namespace {

using IntegerVector = std::vector<Integer>;

class Bits {
 public:
  explicit Bits(std::size_t size = 0) : words_((size + 63) / 64, 0) {}
  void set(std::size_t i) {
    if (i / 64 >= words_.size()) words_.resize(i / 64 + 1, 0);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.words_.resize(std::min(words_.size(), o.words_.size()));
    for (std::size_t k = 0; k < r.words_.size(); ++k) r.words_[k] = words_[k] & o.words_[k];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t other = k < o.words_.size() ? o.words_[k] : 0;
      if (words_[k] & ~other) return false;
    }
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

Integer dot(const IntegerVector& a, const IntegerVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void make_primitive(IntegerVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, abs(x));
  if (g > 1)
    for (auto& x : v) x /= g;
}

struct Ray {
  IntegerVector y;
  Bits zero;
};

}  // namespace

std::vector<Facet> upper_hull_facets(const RationalMatrix& points) {
  if (points.empty()) throw Error(ErrorCode::PreconditionViolation, "hull of an empty point set");
  const std::size_t n = points.front().size();
  const std::size_t d = n + 1;
  // Constraint rows on y = (w, m): e_i for w_i >= 0, (v, -1) per point.
  std::vector<IntegerVector> constraints;
  for (std::size_t i = 0; i < n; ++i) {
    IntegerVector row(d, 0);
    row[i] = 1;
    constraints.push_back(row);
  }
  for (const auto& v : points) {
    RationalVector hom = v;
    hom.push_back(-1);
    constraints.push_back(primitive_integer(hom));
  }

  // Start from the simplicial cone of e_1..e_n and the first point: its rays
  // are (D e_i, D v_i) and (0, -1).
  std::vector<Ray> rays;
  const RationalVector& v0 = points.front();
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector r(d, Rational(0));
    r[i] = 1;
    r[n] = v0[i];
    Ray ray{primitive_integer(r), Bits(constraints.size())};
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) ray.zero.set(j);
    ray.zero.set(n);
    rays.push_back(std::move(ray));
  }
  {
    Ray ray{IntegerVector(d, 0), Bits(constraints.size())};
    ray.y[n] = -1;
    for (std::size_t j = 0; j < n; ++j) ray.zero.set(j);
    rays.push_back(std::move(ray));
  }

  for (std::size_t c = n + 1; c < constraints.size(); ++c) {
    const auto& a = constraints[c];
    std::vector<Integer> s(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      s[r] = dot(a, rays[r].y);
      if (s[r] > 0)
        pos.push_back(r);
      else if (s[r] < 0)
        neg.push_back(r);
    }
    if (neg.empty()) {
      for (std::size_t r = 0; r < rays.size(); ++r)
        if (s[r] == 0) rays[r].zero.set(c);
      continue;
    }
    for (auto p : pos) {
      for (auto q : neg) {
        Bits common = rays[p].zero & rays[q].zero;
        if (common.count() + 2 < d) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.subset_of(rays[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray ray{IntegerVector(d), common};
        for (std::size_t k = 0; k < d; ++k) ray.y[k] = s[p] * rays[q].y[k] - s[q] * rays[p].y[k];
        make_primitive(ray.y);
        ray.zero.set(c);
        next.push_back(std::move(ray));
      }
    }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (s[r] > 0) {
        next.push_back(std::move(rays[r]));
      } else if (s[r] == 0) {
        rays[r].zero.set(c);
        next.push_back(std::move(rays[r]));
      }
    }
    rays = std::move(next);
  }

  std::vector<Facet> facets;
  for (const auto& ray : rays) {
    bool trivial = std::all_of(ray.y.begin(), ray.y.begin() + static_cast<std::ptrdiff_t>(n),
                               [](const Integer& x) { return x == 0; });
    if (trivial) continue;
    Facet f;
    for (std::size_t k = 0; k < n; ++k) f.normal.emplace_back(ray.y[k]);
    f.offset = Rational(ray.y[n]);
    facets.push_back(std::move(f));
  }
  std::sort(facets.begin(), facets.end(), [](const Facet& a, const Facet& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  });
  facets.erase(std::unique(facets.begin(), facets.end(),
                           [](const Facet& a, const Facet& b) { return a.normal == b.normal && a.offset == b.offset; }),
               facets.end());
  return facets;
}

NewtonPolyhedron::NewtonPolyhedron(std::size_t dimension, RationalMatrix generators, std::vector<Facet> facets)
    : dimension_(dimension), generators_(std::move(generators)), facets_(std::move(facets)) {
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    RationalMatrix tight;
    for (const auto& f : facets_)
      if (manin::dot(f.normal, generators_[g]) == f.offset) tight.push_back(f.normal);
    if (rank(tight) == dimension_) {
      vertex_indices_.push_back(g);
      vertices_.push_back(generators_[g]);
    }
  }
}

bool NewtonPolyhedron::contains(const RationalVector& x) const {
  return std::all_of(facets_.begin(), facets_.end(),
                     [&](const Facet& f) { return manin::dot(f.normal, x) >= f.offset; });
}

Rational NewtonPolyhedron::support_value(const RationalVector& a) const {
  Rational best = manin::dot(a, vertices_.front());
  for (const auto& v : vertices_) best = std::min(best, manin::dot(a, v));
  return best;
}

NewtonPolyhedron build_polyhedron(const RationalMatrix& points, std::size_t hull_limit) {
  if (points.empty()) throw Error(ErrorCode::PreconditionViolation, "Newton polyhedron of an empty set");
  const std::size_t n = points.front().size();
  if (n > hull_limit)
    throw Error(ErrorCode::DimensionOverflow,
                "dimension " + std::to_string(n) + " exceeds the hull limit " + std::to_string(hull_limit));
  RationalMatrix unique;
  for (const auto& p : points) {
    if (p.size() != n) throw Error(ErrorCode::PreconditionViolation, "points of mixed dimension");
    bool nonzero = false;
    for (const auto& x : p) {
      if (x < 0) throw Error(ErrorCode::PreconditionViolation, "Newton polyhedron points must be nonnegative");
      if (x != 0) nonzero = true;
    }
    if (!nonzero) throw Error(ErrorCode::PreconditionViolation, "Newton polyhedron points must be nonzero");
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
  }
  auto facets = upper_hull_facets(unique);
  return NewtonPolyhedron(n, std::move(unique), std::move(facets));
}

NewtonPolyhedron build_polyhedron(const std::vector<IntVector>& points, std::size_t hull_limit) {
  RationalMatrix pts;
  for (const auto& p : points) pts.push_back(to_rational(p));
  return build_polyhedron(pts, hull_limit);
}

std::size_t affine_dimension(const RationalMatrix& points, const std::vector<std::size_t>& recession,
                             std::size_t ambient) {
  RationalMatrix dirs;
  for (std::size_t k = 1; k < points.size(); ++k) {
    RationalVector v(ambient);
    for (std::size_t i = 0; i < ambient; ++i) v[i] = points[k][i] - points[0][i];
    dirs.push_back(std::move(v));
  }
  for (auto i : recession) {
    RationalVector e(ambient, Rational(0));
    e[i] = 1;
    dirs.push_back(std::move(e));
  }
  return dirs.empty() ? 0 : rank(dirs);
}

SupportResult support_face(const NewtonPolyhedron& e, const RationalVector& a) {
  if (a.size() != e.dimension()) throw Error(ErrorCode::PreconditionViolation, "support vector has wrong length");
  bool nonzero = false;
  for (const auto& x : a) {
    if (x < 0) throw Error(ErrorCode::PreconditionViolation, "support vector must be nonnegative");
    if (x != 0) nonzero = true;
  }
  if (!nonzero) throw Error(ErrorCode::PreconditionViolation, "support vector must be nonzero");
  SupportResult out;
  out.minimum = e.support_value(a);
  for (std::size_t g = 0; g < e.generators().size(); ++g) {
    if (dot(a, e.generators()[g]) == out.minimum) {
      out.face.generator_indices.push_back(g);
      out.face.generators.push_back(e.generators()[g]);
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == 0) out.face.recession_directions.push_back(i);
  out.face.compact = out.face.recession_directions.empty();
  out.face.dimension = affine_dimension(out.face.generators, out.face.recession_directions, e.dimension());
  return out;
}

DiagonalFace diagonal_face(const NewtonPolyhedron& e) {
  const std::size_t n = e.dimension();
  const auto& facets = e.facets();
  DiagonalFace out;
  bool found = false;
  for (const auto& f : facets) {
    if (f.offset <= 0) continue;
    Rational t = f.offset / sum(f.normal);
    if (!found || t > out.t0) out.t0 = t;
    found = true;
  }
  if (!found) throw Error(ErrorCode::PreconditionViolation, "no facet separates the origin");
  RationalVector diag(n, out.t0);
  for (std::size_t k = 0; k < facets.size(); ++k) {
    if (facets[k].offset > 0 && dot(facets[k].normal, diag) == facets[k].offset) {
      out.active_facets.push_back(k);
      RationalVector w = facets[k].normal;
      for (auto& x : w) x /= facets[k].offset;
      out.active_normals.push_back(std::move(w));
    }
  }
  out.polar.assign(n, Rational(0));
  for (const auto& w : out.active_normals)
    for (std::size_t i = 0; i < n; ++i) out.polar[i] += w[i];
  for (auto& x : out.polar) x /= static_cast<long>(out.active_normals.size());
  out.iota = sum(out.polar);

  for (std::size_t g = 0; g < e.generators().size(); ++g) {
    bool tight = true;
    for (auto k : out.active_facets)
      if (dot(facets[k].normal, e.generators()[g]) != facets[k].offset) tight = false;
    if (tight) {
      out.face.generator_indices.push_back(g);
      out.face.generators.push_back(e.generators()[g]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool recedes = std::all_of(out.active_facets.begin(), out.active_facets.end(),
                               [&](std::size_t k) { return facets[k].normal[i] == 0; });
    if (recedes) out.face.recession_directions.push_back(i);
  }
  RationalMatrix normals;
  for (auto k : out.active_facets) normals.push_back(facets[k].normal);
  out.face.dimension = n - rank(normals);
  out.face.compact = out.face.recession_directions.empty();
  out.compact = out.face.compact;
  out.rho = static_cast<long>(out.face.generators.size()) - static_cast<long>(out.face.dimension);
  return out;
}

LpResult iota_lp(const NewtonPolyhedron& e) {
  const std::size_t n = e.dimension();
  const auto& verts = e.vertices();
  const std::size_t m = verts.size();
  // Dual: max sum(y) with V^T y <= 1, y >= 0; columns y_1..y_m, s_1..s_n, rhs.
  const std::size_t cols = m + n;
  RationalMatrix t(n, RationalVector(cols + 1, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) t[i][k] = verts[k][i];
    t[i][m + i] = 1;
    t[i][cols] = 1;
  }
  RationalVector z(cols + 1, Rational(0));
  for (std::size_t k = 0; k < m; ++k) z[k] = -1;
  std::vector<std::size_t> basis(n);
  for (std::size_t i = 0; i < n; ++i) basis[i] = m + i;
  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (z[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = n;
    Rational best;
    for (std::size_t i = 0; i < n; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][cols] / t[i][enter];
      if (leave == n || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == n) throw Error(ErrorCode::PreconditionViolation, "dual LP unbounded");
    Rational piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    if (z[enter] != 0) {
      Rational f = z[enter];
      for (std::size_t j = 0; j <= cols; ++j) z[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  LpResult out;
  out.iota = z[cols];
  out.polar.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.polar[i] = z[m + i];
  return out;
}

bool lemma1_check(const NewtonPolyhedron& e, const Face& face, const RationalVector& c) {
  const std::size_t n = e.dimension();
  Rational t0;
  bool found = false;
  for (const auto& f : e.facets()) {
    if (f.offset <= 0) continue;
    Rational t = f.offset / sum(f.normal);
    if (!found || t > t0) t0 = t;
    found = true;
  }
  // Hull side: the face is the intersection of the facets containing it; it
  // meets the diagonal iff t0 * 1 lies on all of them.
  RationalVector diag(n, t0);
  bool meets = true;
  for (const auto& f : e.facets()) {
    bool contains_face = true;
    for (const auto& g : face.generators)
      if (dot(f.normal, g) != f.offset) contains_face = false;
    for (auto i : face.recession_directions)
      if (f.normal[i] != 0) contains_face = false;
    if (contains_face && dot(f.normal, diag) != f.offset) meets = false;
  }
  // LP side.
  bool optimal = sum(c) == iota_lp(e).iota;
  return meets == optimal;
}

}  // namespace manin
