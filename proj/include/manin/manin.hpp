#pragma once

#include "manin/counting_and_zeta.hpp"
#include "manin/euler_products.hpp"
#include "manin/lattice_generators.hpp"
#include "manin/newton_polyhedron.hpp"
#include "manin/volume_constants.hpp"

#include <optional>
#include <string>
#include <vector>

namespace manin {

struct ManinConfig {
  // Generator enumeration cap; 0 selects default_cap.
  std::int64_t cap = 0;
  bool check_stabilization = true;
  bool with_euler = true;
  // Also predict the sup-norm constant (only when rho = 1).
  bool sup_norm = true;
  QuadratureConfig quad;
  EulerConfig euler;
};

struct Analysis {
  bool hypersurface = false;
  IntVector a;  // hypersurface only
  ToricProblem problem;
  LatticePointSet generators;
  NewtonPolyhedron polyhedron;
  DiagonalFace face;
  Rational lp_iota;
  std::uint64_t sign_factor = 1;
  // n - l for the toric route, n - 1 for the hypersurface route.
  std::size_t expected_dimension = 0;
  bool dimension_ok = false;
  bool stabilized = false;
  bool stabilization_checked = false;

  UniformMultiplicativeSpec weight() const;
  std::vector<std::string> flags() const;
};

Analysis analyze(const ToricProblem& problem, const ManinConfig& cfg = {});
Analysis analyze_hypersurface(const IntVector& a, const ManinConfig& cfg = {});

struct ManinReport {
  Analysis analysis;
  GeneralizedPolynomial polynomial;
  // The polynomial the volume constant is taken of: P itself, or its
  // restriction to the hypersurface.
  GeneralizedPolynomial volume_input;
  Rational degree;
  SargosResult volume;
  std::optional<EulerReport> euler;
  unsigned K = 0;
  double C = 0;
  double C_error = 0;
  double C0 = 0;
  std::optional<SargosResult> sup_norm_volume;
  std::optional<double> sup_norm_C;
  std::optional<double> sup_norm_C_error;

  const Rational& iota() const { return analysis.face.iota; }
  long rho() const { return analysis.face.rho; }
  const RationalVector& polar() const { return analysis.face.polar; }
  // 1 / (iota (rho-1)!)
  double combinatorial_factor() const;
};

ManinReport manin_constant(const ToricProblem& problem, const GeneralizedPolynomial& p, const ManinConfig& cfg = {});
// P has n+1 variables; the volume constant uses its restriction to the
// hypersurface and the generators of J_n(a).
ManinReport manin_constant_hypersurface(const IntVector& a, const GeneralizedPolynomial& p,
                                        const ManinConfig& cfg = {});
ManinReport manin_constant(const Analysis& analysis, const GeneralizedPolynomial& p, const ManinConfig& cfg = {});

AsymptoticTable asymptotic_report(const std::vector<CountResult>& counts, const ManinReport& report, HeightMode mode);

}  // namespace manin
