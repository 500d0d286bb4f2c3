#include "manin/manin.hpp"

#include "manin/error.hpp"

#include <cmath>
#include <numeric>

namespace manin {

namespace {

double factorial(long k) {
  double f = 1;
  for (long i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

void finish_analysis(Analysis& out, const ManinConfig& cfg, std::int64_t scale) {
  const auto spec = out.weight();
  const std::int64_t cap = cfg.cap > 0 ? cfg.cap : default_cap(out.problem.coordinates(), scale);
  out.generators = minimal_generators(spec, cap);
  if (cfg.check_stabilization) {
    LatticePointSet bigger = stabilization_check(spec, out.generators);
    out.stabilized = bigger.stabilized;
    out.generators.stabilized = bigger.stabilized;
    out.stabilization_checked = true;
  }
  out.polyhedron = build_polyhedron(out.generators.points);
  out.face = diagonal_face(out.polyhedron);
  out.lp_iota = iota_lp(out.polyhedron).iota;
  out.sign_factor = sign_count(out.problem).value;
  out.dimension_ok = out.face.face.dimension == out.expected_dimension;
}

}  // namespace

UniformMultiplicativeSpec Analysis::weight() const { return hypersurface ? hypersurface_weight(a) : toric_weight(problem); }

std::vector<std::string> Analysis::flags() const {
  std::vector<std::string> f;
  if (!face.compact) f.push_back("non-compact face");
  if (!dimension_ok) f.push_back("dimension hypothesis fails: upper-bound order only");
  if (stabilization_checked && !stabilized) f.push_back("generators not stabilized");
  return f;
}

Analysis analyze(const ToricProblem& problem, const ManinConfig& cfg) {
  Analysis out;
  out.problem = problem;
  out.expected_dimension = problem.n() - problem.relations();
  finish_analysis(out, cfg, problem.max_entry());
  return out;
}

Analysis analyze_hypersurface(const IntVector& a, const ManinConfig& cfg) {
  check_hypersurface_vector(a);
  Analysis out;
  out.hypersurface = true;
  out.a = a;
  out.problem = hypersurface_problem(a);
  out.expected_dimension = a.size() - 1;
  finish_analysis(out, cfg, std::accumulate(a.begin(), a.end(), std::int64_t{0}));
  return out;
}

double ManinReport::combinatorial_factor() const { return 1.0 / (to_double(iota()) * factorial(rho() - 1)); }

ManinReport manin_constant(const Analysis& analysis, const GeneralizedPolynomial& p, const ManinConfig& cfg) {
  if (!analysis.face.compact)
    throw Error(ErrorCode::NonCompactFace, "the face of the Newton polyhedron meeting the diagonal is not compact");
  const std::size_t coords = analysis.problem.coordinates();
  if (p.variables() != coords)
    throw Error(ErrorCode::PreconditionViolation, "height polynomial has " + std::to_string(p.variables()) +
                                                      " variables, the problem has " + std::to_string(coords) +
                                                      " coordinates");
  ellipticity_witness(p);
  ManinReport r;
  r.analysis = analysis;
  r.polynomial = p;
  r.volume_input = analysis.hypersurface ? restrict_to_hypersurface(p, analysis.a) : p;
  r.degree = p.degree();

  MixedTypeT t;
  t.points = analysis.face.face.generators;
  t.multiplicities.assign(t.points.size(), 1);
  r.K = static_cast<unsigned>(t.points.size());
  r.volume = mixed_volume_constant(t, r.volume_input, cfg.quad, IntegrandMode::Sum);

  const double d = to_double(r.degree);
  const double factor = static_cast<double>(analysis.sign_factor) * r.combinatorial_factor();
  if (cfg.with_euler) {
    r.euler = euler_constant(analysis.weight(), analysis.face.polar, r.K, cfg.euler, &analysis.generators);
    const double e = r.euler->value;
    const double a0 = r.volume.constant.value;
    r.C = factor * std::pow(d, static_cast<double>(r.rho())) * a0 * e;
    r.C0 = r.C * to_double(analysis.face.iota) * factorial(r.rho() - 1);
    r.C_error = std::abs(r.C) * (r.volume.constant.abs_error / a0 + r.euler->error / e);
  }

  if (cfg.sup_norm && r.rho() == 1) {
    std::vector<Monomial> linear;
    for (std::size_t i = 0; i < coords; ++i) {
      Monomial m{RationalVector(coords, Rational(0)), Rational(1)};
      m.exponents[i] = 1;
      linear.push_back(std::move(m));
    }
    GeneralizedPolynomial sum(coords, linear);
    GeneralizedPolynomial input = analysis.hypersurface ? restrict_to_hypersurface(sum, analysis.a) : sum;
    try {
      SargosResult v = mixed_volume_constant(t, input, cfg.quad, IntegrandMode::Max);
      if (v.data.rho0 == 1) {
        r.sup_norm_volume = v;
        if (r.euler) {
          r.sup_norm_C = factor * v.constant.value * r.euler->value;
          r.sup_norm_C_error =
              std::abs(*r.sup_norm_C) * (v.constant.abs_error / v.constant.value + r.euler->error / r.euler->value);
        }
      }
    } catch (const Error&) {
      // no prediction for this geometry
    }
  }
  return r;
}

ManinReport manin_constant(const ToricProblem& problem, const GeneralizedPolynomial& p, const ManinConfig& cfg) {
  return manin_constant(analyze(problem, cfg), p, cfg);
}

ManinReport manin_constant_hypersurface(const IntVector& a, const GeneralizedPolynomial& p, const ManinConfig& cfg) {
  return manin_constant(analyze_hypersurface(a, cfg), p, cfg);
}

AsymptoticTable asymptotic_report(const std::vector<CountResult>& counts, const ManinReport& report, HeightMode mode) {
  if (!report.euler) throw Error(ErrorCode::PreconditionViolation, "the report carries no Euler product");
  double C = report.C;
  if (mode == HeightMode::SupNorm) {
    if (!report.sup_norm_C)
      throw Error(ErrorCode::PreconditionViolation, "no sup-norm prediction is available for this problem");
    C = *report.sup_norm_C;
  }
  return asymptotic_report(counts, C, report.iota(), report.rho());
}

}  // namespace manin
