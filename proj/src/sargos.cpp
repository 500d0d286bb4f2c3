#include "manin/error.hpp"
#include "manin/quadrature.hpp"
#include "manin/volume_constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace manin {

SargosData newton_at_infinity(const GeneralizedPolynomial& p) {
  if (!p.depends_on_all_variables())
    throw Error(ErrorCode::MissingVariable, "polynomial " + p.to_string() + " does not involve every variable");
  const std::size_t n = p.variables();
  SargosData data;
  data.variables = n;
  RationalMatrix negated;
  for (const auto& mono : p.monomials()) {
    RationalVector v = mono.exponents;
    for (auto& x : v) x = -x;
    negated.push_back(std::move(v));
  }
  for (auto f : upper_hull_facets(negated)) {
    f.offset = -f.offset;
    data.facets.push_back(std::move(f));
  }
  Rational tstar;
  bool found = false;
  for (const auto& f : data.facets) {
    if (f.offset <= 0) continue;
    Rational t = f.offset / sum(f.normal);
    if (!found || t < tstar) tstar = t;
    found = true;
  }
  if (!found) throw Error(ErrorCode::MissingVariable, "no facet of the polyhedron at infinity meets the diagonal");
  data.sigma0 = 1 / tstar;
  RationalMatrix normals;
  for (std::size_t k = 0; k < data.facets.size(); ++k) {
    const auto& f = data.facets[k];
    if (f.offset > 0 && sum(f.normal) * tstar == f.offset) {
      data.face_facets.push_back(k);
      normals.push_back(f.normal);
    }
  }
  for (std::size_t j = 0; j < p.monomials().size(); ++j) {
    bool on = true;
    for (auto k : data.face_facets)
      if (dot(data.facets[k].normal, p.monomials()[j].exponents) != data.facets[k].offset) on = false;
    if (on) data.face_monomials.push_back(j);
  }
  data.rho0 = rank(normals);
  std::vector<std::size_t> recession, transverse;
  for (std::size_t i = 0; i < n; ++i) {
    bool recedes = std::all_of(normals.begin(), normals.end(), [&](const RationalVector& w) { return w[i] == 0; });
    (recedes ? recession : transverse).push_back(i);
  }
  data.m = n - recession.size();
  // Greedy choice of rho0 transverse coordinates whose columns of the normal
  // matrix are independent.
  std::vector<std::size_t> chosen, rest;
  for (auto i : transverse) {
    if (chosen.size() < data.rho0) {
      RationalMatrix cols;
      for (const auto& w : normals) {
        RationalVector row;
        for (auto c : chosen) row.push_back(w[c]);
        row.push_back(w[i]);
        cols.push_back(std::move(row));
      }
      if (rank(cols) == chosen.size() + 1) {
        chosen.push_back(i);
        continue;
      }
    }
    rest.push_back(i);
  }
  data.permutation = chosen;
  data.permutation.insert(data.permutation.end(), rest.begin(), rest.end());
  data.permutation.insert(data.permutation.end(), recession.begin(), recession.end());

  RationalMatrix lambda_hull;
  lambda_hull.push_back(RationalVector(n, Rational(0)));
  for (auto k : data.face_facets) {
    RationalVector lam(n);
    for (std::size_t j = 0; j < n; ++j) lam[j] = data.facets[k].normal[data.permutation[j]] / data.facets[k].offset;
    data.lambdas.push_back(lam);
    lambda_hull.push_back(lam);
  }
  for (std::size_t j = data.rho0; j < n; ++j) {
    RationalVector e(n, Rational(0));
    e[j] = 1;
    lambda_hull.push_back(std::move(e));
  }
  data.lambda_volume = polytope_volume(lambda_hull);
  Rational fact = 1;
  for (std::size_t i = 2; i <= n; ++i) fact *= static_cast<long>(i);
  data.factorial_volume = fact * data.lambda_volume;
  return data;
}

namespace {

struct FaceIntegrand {
  std::size_t n, rho0, m;
  double sigma0;
  IntegrandMode mode;
  std::vector<std::vector<double>> exponents;  // permuted
  std::vector<double> coefficients;

  double raw(const std::vector<double>& z) const {
    double total = 0;
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      double logterm = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (exponents[k][i] != 0) logterm += exponents[k][i] * std::log(z[i]);
      if (mode == IntegrandMode::Sum)
        total += coefficients[k] * std::exp(logterm);
      else
        total = std::max(total, std::exp(logterm));
    }
    return std::pow(total, -sigma0);
  }

  // Point of the integration domain for cube coordinates u.
  double mapped(const std::vector<double>& u, const std::vector<double>& uc) const {
    std::vector<double> z(n, 1.0);
    double jac = 1.0;
    for (std::size_t a = 0; a < u.size(); ++a) {
      std::size_t i = rho0 + a;
      if (i < m) {
        double s = uc[a];
        z[i] = u[a] / s;
        jac /= s * s;
      } else {
        z[i] = 1.0 / u[a];
        jac /= u[a] * u[a];
      }
    }
    return raw(z) * jac;
  }
};

void divergence_guard(const FaceIntegrand& f) {
  const std::size_t k = f.n - f.rho0;
  if (k == 0) return;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    auto probe = [&](double R) {
      std::vector<double> z(f.n, 1.0);
      int dims = 0;
      for (std::size_t a = 0; a < k; ++a) {
        if ((mask >> a) & 1) {
          z[f.rho0 + a] = R;
          ++dims;
        }
      }
      return std::pow(R, dims) * f.raw(z);
    };
    double near = probe(std::ldexp(1.0, 20)), far = probe(std::ldexp(1.0, 30));
    if (!(far < 0.5 * near) && far > 1e-300)
      throw Error(ErrorCode::DivergentIntegral, "integrand does not decay along coordinate block mask " +
                                                    std::to_string(mask));
  }
}

}  // namespace

SargosResult sargos_constant(const GeneralizedPolynomial& p, const QuadratureConfig& quad, IntegrandMode mode) {
  SargosResult out;
  out.data = newton_at_infinity(p);
  const auto& d = out.data;
  const std::size_t k = d.variables - d.rho0;
  if (k > 8) throw Error(ErrorCode::DimensionTooHigh, "integral dimension " + std::to_string(k) + " exceeds 8");
  FaceIntegrand f{d.variables, d.rho0, d.m, to_double(d.sigma0), mode, {}, {}};
  for (auto j : d.face_monomials) {
    const auto& mono = p.monomials()[j];
    std::vector<double> e(d.variables);
    for (std::size_t i = 0; i < d.variables; ++i) e[i] = to_double(mono.exponents[d.permutation[i]]);
    f.exponents.push_back(std::move(e));
    f.coefficients.push_back(to_double(mono.coefficient));
  }
  divergence_guard(f);
  // The max integrand has kinks that nested Gauss-Kronrod cannot resolve below
  // ~1e-8, and an outer tolerance tighter than the inner noise bisects every
  // panel to full depth; QMC does not care about kinks.
  auto mapped = [&](const std::vector<double>& u, const std::vector<double>& uc) { return f.mapped(u, uc); };
  ConstantValue integral = mode == IntegrandMode::Max && k >= 2 ? integrate_unit_cube_qmc(mapped, k, quad)
                                                                 : integrate_unit_cube(mapped, k, quad);
  double scale = to_double(d.factorial_volume);
  out.constant.value = scale * integral.value;
  out.constant.abs_error = scale * integral.abs_error + 4e-16 * std::abs(out.constant.value);
  out.constant.method = integral.method + (mode == IntegrandMode::Max ? ", max integrand" : "");
  return out;
}

GeneralizedPolynomial volume_polynomial(const RationalMatrix& points, const std::vector<std::uint64_t>& multiplicities,
                                        const RationalVector& coefficients) {
  const std::size_t r = coefficients.size();
  if (points.empty() || points.size() != multiplicities.size())
    throw Error(ErrorCode::PreconditionViolation, "volume constant needs one multiplicity per point");
  for (const auto& c : coefficients)
    if (c <= 0) throw Error(ErrorCode::PreconditionViolation, "volume constant coefficients must be positive");
  std::vector<const RationalVector*> family;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != r)
      throw Error(ErrorCode::PreconditionViolation, "volume constant point has the wrong length");
    bool nonzero = false;
    for (const auto& x : points[i]) {
      if (x < 0) throw Error(ErrorCode::PreconditionViolation, "volume constant points must be nonnegative");
      if (x != 0) nonzero = true;
    }
    if (!nonzero) throw Error(ErrorCode::PreconditionViolation, "volume constant points must be nonzero");
    if (multiplicities[i] == 0) throw Error(ErrorCode::PreconditionViolation, "multiplicities must be positive");
    for (std::uint64_t rep = 0; rep < multiplicities[i]; ++rep) family.push_back(&points[i]);
  }
  const std::size_t q = family.size();
  std::vector<Monomial> monos;
  for (std::size_t k = 0; k < r; ++k) {
    Monomial m{RationalVector(q), coefficients[k]};
    for (std::size_t i = 0; i < q; ++i) m.exponents[i] = (*family[i])[k];
    monos.push_back(std::move(m));
  }
  return GeneralizedPolynomial(q, monos);
}

SargosResult volume_constant(const RationalMatrix& points, const std::vector<std::uint64_t>& multiplicities,
                             const RationalVector& coefficients, const QuadratureConfig& quad, IntegrandMode mode) {
  return sargos_constant(volume_polynomial(points, multiplicities, coefficients), quad, mode);
}

MixedTypeT mixed_type(const MixedTypeT& t, const GeneralizedPolynomial& p) {
  if (t.points.size() != t.multiplicities.size())
    throw Error(ErrorCode::PreconditionViolation, "polar type needs one multiplicity per point");
  MixedTypeT out;
  for (std::size_t b = 0; b < t.points.size(); ++b) {
    if (t.points[b].size() != p.variables())
      throw Error(ErrorCode::PreconditionViolation, "polar type arity differs from the polynomial");
    RationalVector mu;
    for (const auto& mono : p.monomials()) mu.push_back(dot(t.points[b], mono.exponents));
    auto it = std::find(out.points.begin(), out.points.end(), mu);
    if (it == out.points.end()) {
      out.points.push_back(std::move(mu));
      out.multiplicities.push_back(t.multiplicities[b]);
    } else {
      out.multiplicities[static_cast<std::size_t>(it - out.points.begin())] += t.multiplicities[b];
    }
  }
  return out;
}

SargosResult mixed_volume_constant(const MixedTypeT& t, const GeneralizedPolynomial& p, const QuadratureConfig& quad,
                                   IntegrandMode mode) {
  MixedTypeT merged = mixed_type(t, p);
  RationalVector b;
  for (const auto& mono : p.monomials()) b.push_back(mono.coefficient);
  return volume_constant(merged.points, merged.multiplicities, b, quad, mode);
}

ConstantValue mahler_constant(const GeneralizedPolynomial& p, const QuadratureConfig& quad) {
  const std::size_t N = p.variables();
  if (N > 6) throw Error(ErrorCode::DimensionTooHigh, "spherical quadrature supports at most 6 variables");
  if (N < 2) throw Error(ErrorCode::PreconditionViolation, "spherical quadrature needs at least 2 variables");
  if (!p.is_homogeneous()) throw Error(ErrorCode::PreconditionViolation, "Mahler constant needs a homogeneous P");
  ellipticity_witness(p);
  const double d = to_double(p.degree());
  const double half_pi = std::numbers::pi / 2;
  auto f = [&](const std::vector<double>& u, const std::vector<double>&) {
    std::vector<double> x(N);
    double s = 1.0, density = 1.0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
      double th = half_pi * u[i];
      x[i] = s * std::cos(th);
      density *= std::pow(std::sin(th), static_cast<double>(N - 2 - i));
      s *= std::sin(th);
    }
    x[N - 1] = s;
    return std::pow(p.evaluate(x), -static_cast<double>(N) / d) * density;
  };
  ConstantValue v = integrate_unit_cube(f, N - 1, quad);
  double scale = std::pow(half_pi, static_cast<double>(N - 1)) / static_cast<double>(N);
  return ConstantValue{v.value * scale, v.abs_error * scale + 4e-16 * std::abs(v.value * scale),
                       "spherical coordinates, " + v.method};
}

}  // namespace manin
