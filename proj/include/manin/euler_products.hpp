#pragma once

#include "manin/lattice_generators.hpp"
#include "manin/problem_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace manin {

struct EulerConfig {
  std::uint64_t prime_cutoff = 100000;
  // Per-prime truncation target is tolerance / p^2.
  double tolerance = 1e-15;
  // 113, 160 or 256; other values round up to the next supported width.
  unsigned precision_bits = 160;
  // Upper limit on weight evaluations when expanding the local series.
  std::uint64_t enumeration_budget = 20000000;
};

struct LocalFactor {
  std::uint64_t prime = 0;
  double value = 0;
  std::string value_text;  // 30 significant digits
  double tail_bound = 0;
  std::size_t terms = 0;
};

struct EulerReport {
  double value = 0;
  std::string value_text;
  std::uint64_t prime_cutoff = 0;
  unsigned K = 0;
  unsigned precision_bits = 0;
  Rational epsilon_gap;
  // log of the product over primes above the cutoff, from the prime zeta series.
  double tail_log_correction = 0;
  double tail_remainder = 0;
  double truncation_error = 0;
  double error = 0;
  std::size_t primes_used = 0;
  // (1 - 1/p)^K times the local factor, for the primes up to the cutoff.
  std::vector<double> regularized_factors;
  // Integer coefficients f_j of the regularized local series in x = p^(-1/D).
  std::uint64_t denominator = 1;
  std::vector<std::string> series_coefficients;
};

LocalFactor local_factor(const UniformMultiplicativeSpec& spec, const RationalVector& c, std::uint64_t p, double tol,
                         unsigned precision_bits = 160);
Rational epsilon_gap(const LatticePointSet& generators, const RationalVector& c);
EulerReport euler_constant(const UniformMultiplicativeSpec& spec, const RationalVector& c, unsigned K,
                           const EulerConfig& cfg = {}, const LatticePointSet* generators = nullptr);

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);
unsigned supported_precision(unsigned requested);

}  // namespace manin
