#pragma once

#include "manin/newton_polyhedron.hpp"
#include "manin/problem_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace manin {

struct QuadratureConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-10;
  unsigned max_depth = 18;
  // Quasi-Monte Carlo: points per replicate and number of random shifts.
  std::size_t qmc_points = 1u << 15;
  unsigned qmc_replicates = 16;
  std::uint64_t seed = 0;
};

struct ConstantValue {
  double value = 0;
  double abs_error = 0;
  std::string method;
};

enum class IntegrandMode {
  Sum,  // P_G0^{-sigma0}
  Max,  // (max of the face monomials)^{-sigma0}, coefficients ignored
};

struct SargosData {
  std::size_t variables = 0;
  std::vector<Facet> facets;  // of conv(supp P) - R_+^n, as <normal, x> <= offset
  std::vector<std::size_t> face_facets;
  std::vector<std::size_t> face_monomials;  // indices into P.monomials() on G0
  Rational sigma0;
  std::size_t rho0 = 0;
  std::size_t m = 0;
  // New coordinate k is old coordinate permutation[k].
  std::vector<std::size_t> permutation;
  RationalMatrix lambdas;  // permuted coordinates
  Rational lambda_volume;  // exact Vol(Lambda)
  Rational factorial_volume;  // n! Vol(Lambda)
};

struct SargosResult {
  SargosData data;
  ConstantValue constant;
};

Rational polytope_volume(const RationalMatrix& points);

SargosData newton_at_infinity(const GeneralizedPolynomial& p);
SargosResult sargos_constant(const GeneralizedPolynomial& p, const QuadratureConfig& quad = {},
                             IntegrandMode mode = IntegrandMode::Sum);

struct MixedTypeT {
  RationalMatrix points;
  std::vector<std::uint64_t> multiplicities;
};

// P_(I;u;b) with gamma'^k_i = alpha'^i_k over the repeated family alpha'.
GeneralizedPolynomial volume_polynomial(const RationalMatrix& points, const std::vector<std::uint64_t>& multiplicities,
                                        const RationalVector& coefficients);
SargosResult volume_constant(const RationalMatrix& points, const std::vector<std::uint64_t>& multiplicities,
                             const RationalVector& coefficients, const QuadratureConfig& quad = {},
                             IntegrandMode mode = IntegrandMode::Sum);
// I_{T,P} and u_{T,P}: mu(beta) = sum_i beta_i alpha^i with colliding values merged.
MixedTypeT mixed_type(const MixedTypeT& t, const GeneralizedPolynomial& p);
SargosResult mixed_volume_constant(const MixedTypeT& t, const GeneralizedPolynomial& p, const QuadratureConfig& quad = {},
                                   IntegrandMode mode = IntegrandMode::Sum);

// (1/N) * integral over the positive part of the unit sphere of P_d^{-N/d}.
ConstantValue mahler_constant(const GeneralizedPolynomial& p, const QuadratureConfig& quad = {});

}  // namespace manin
