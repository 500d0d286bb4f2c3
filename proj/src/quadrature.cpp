#include "manin/quadrature.hpp"

#include "manin/error.hpp"
#include "manin/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/sobol.hpp>

#include <cmath>
#include <random>

namespace manin {

namespace {

constexpr std::size_t kPanels = 8;

struct NestedState {
  const CubeIntegrand* f;
  std::size_t k;
  std::vector<double> x;
  std::vector<double> xc;
  const QuadratureConfig* cfg;
};

double safe(double v) { return std::isfinite(v) ? v : 0.0; }

// S(s) = 6s^5 - 15s^4 + 10s^3 flattens both endpoints; applied twice, an
// endpoint behaviour (1-u)^a becomes (1-s)^(9a+8), which removes the algebraic
// singularities of the mapped integrands.
double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_derivative(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double smooth(double s) { return smoothstep(smoothstep(s)); }
double smooth_jacobian(double s) { return smoothstep_derivative(smoothstep(s)) * smoothstep_derivative(s); }

// Error returned includes the nested levels: the sup of the inner error
// estimates times the length of this axis.
double integrate_axis(NestedState& s, std::size_t axis, double a, double b, double* error) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double tol = axis == 0 ? s.cfg->rel_tol : std::max(s.cfg->rel_tol, 1e-11);
  unsigned depth = axis == 0 ? s.cfg->max_depth : std::min(s.cfg->max_depth, 12u);
  double inner_sup = 0;
  auto integrand = [&](double t) {
    s.x[axis] = smooth(t);
    s.xc[axis] = smooth(1.0 - t);
    double jac = smooth_jacobian(t);
    if (jac == 0) return 0.0;
    if (axis + 1 == s.k) return safe((*s.f)(s.x, s.xc)) * jac;
    double inner_err = 0;
    double v = integrate_axis(s, axis + 1, 0.0, 1.0, &inner_err);
    inner_sup = std::max(inner_sup, inner_err * jac);
    return v * jac;
  };
  double err = 0, l1 = 0;
  double v = GK::integrate(integrand, a, b, depth, tol, &err, &l1);
  if (error) *error = err + inner_sup * (b - a);
  return v;
}

ConstantValue nested(const CubeIntegrand& f, std::size_t k, const QuadratureConfig& cfg) {
  std::vector<double> values(kPanels), errors(kPanels);
  parallel_for(kPanels, [&](std::size_t p) {
    NestedState s{&f, k, std::vector<double>(k, 0.5), std::vector<double>(k, 0.5), &cfg};
    double a = static_cast<double>(p) / kPanels, b = static_cast<double>(p + 1) / kPanels;
    double err = 0;
    double v = integrate_axis(s, 0, a, b, &err);
    values[p] = v;
    errors[p] = err;
  });
  ConstantValue out;
  for (std::size_t p = 0; p < kPanels; ++p) {
    out.value += values[p];
    out.abs_error += errors[p];
  }
  out.method = "gauss-kronrod-15 nested with endpoint smoothing, dimension " + std::to_string(k) + ", " + std::to_string(kPanels) +
               " outer panels";
  return out;
}

}  // namespace

ConstantValue integrate_unit_cube_qmc(const CubeIntegrand& f, std::size_t k, const QuadratureConfig& cfg) {
  if (k == 0) return ConstantValue{safe(f({}, {})), 0.0, "point evaluation"};
  if (k > 8) throw Error(ErrorCode::DimensionTooHigh, "integral dimension " + std::to_string(k) + " exceeds 8");
  const unsigned reps = std::max(2u, cfg.qmc_replicates);
  std::vector<double> means(reps);
  parallel_for(reps, [&](std::size_t r) {
    std::mt19937_64 rng(cfg.seed * 1000003ULL + r);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> shift(k);
    for (auto& s : shift) s = unif(rng);
    boost::random::sobol eng(k);
    const double scale = 1.0 / (static_cast<double>(eng.max()) + 1.0);
    std::vector<double> x(k), xc(k);
    double total = 0;
    for (std::size_t i = 0; i < cfg.qmc_points; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        double u = static_cast<double>(eng()) * scale + shift[j];
        x[j] = u - std::floor(u);
        xc[j] = 1.0 - x[j];
      }
      total += safe(f(x, xc));
    }
    means[r] = total / static_cast<double>(cfg.qmc_points);
  });
  double mean = 0;
  for (auto m : means) mean += m;
  mean /= reps;
  double var = 0;
  for (auto m : means) var += (m - mean) * (m - mean);
  var /= (reps - 1);
  ConstantValue out;
  out.value = mean;
  out.abs_error = 3.0 * std::sqrt(var / reps);
  out.method = "randomized sobol qmc, dimension " + std::to_string(k) + ", " + std::to_string(reps) + " x " +
               std::to_string(cfg.qmc_points) + " points";
  return out;
}

ConstantValue integrate_unit_cube(const CubeIntegrand& f, std::size_t k, const QuadratureConfig& cfg) {
  if (k == 0) return ConstantValue{safe(f({}, {})), 0.0, "point evaluation"};
  if (k > 8) throw Error(ErrorCode::DimensionTooHigh, "integral dimension " + std::to_string(k) + " exceeds 8");
  if (k <= 4) return nested(f, k, cfg);
  return integrate_unit_cube_qmc(f, k, cfg);
}

}  // namespace manin
