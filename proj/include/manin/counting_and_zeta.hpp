#pragma once

#include "manin/problem_model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace manin {

enum class HeightMode { Polynomial, SupNorm };

struct HeightSpec {
  HeightMode mode = HeightMode::SupNorm;
  GeneralizedPolynomial polynomial;  // unused in sup-norm mode

  static HeightSpec sup_norm() { return {}; }
  static HeightSpec from_polynomial(GeneralizedPolynomial p) { return {HeightMode::Polynomial, std::move(p)}; }
};

struct CountConfig {
  // Estimated enumeration size above which counting refuses to start.
  double operation_budget = 1e10;
};

struct CountResult {
  double t = 0;
  // Rational points: sign_factor * primitive.
  std::uint64_t N = 0;
  std::uint64_t primitive = 0;
  std::uint64_t sign_factor = 1;
  // Every coordinate of a counted point is <= box.
  std::int64_t box = 0;
  // Tuples reached after pruning.
  std::uint64_t leaves = 0;
  double elapsed = 0;
};

CountResult count_points(const ToricProblem& problem, const HeightSpec& height, double t, const CountConfig& cfg = {});
// Same count for the relation prod m_i^{a_i} = m_{n+1}^q, solving for the last
// coordinate by an integer q-th root.
CountResult count_points_hypersurface(const IntVector& a, const HeightSpec& height, double t,
                                      const CountConfig& cfg = {});

struct CountTarget {
  std::optional<ToricProblem> toric;
  std::optional<IntVector> hypersurface;

  static CountTarget of(ToricProblem p) { return {std::move(p), std::nullopt}; }
  static CountTarget of_hypersurface(IntVector a) { return {std::nullopt, std::move(a)}; }
};

CountResult count_points(const CountTarget& target, const HeightSpec& height, double t, const CountConfig& cfg = {});

struct ZetaSample {
  double s = 0;
  double partial_sum = 0;
  double cutoff = 0;
  // N(T) iota T^{-s} / (s - iota), the integral comparison for heights above T.
  double tail_estimate = 0;
  double value = 0;
  // (s - iota)^rho * value
  double scaled = 0;
};

struct ZetaProbe {
  Rational iota;
  long rho = 1;
  std::uint64_t points = 0;  // N(T)
  std::uint64_t leaves = 0;
  std::int64_t box = 0;
  std::vector<ZetaSample> samples;
};

ZetaProbe zeta_partial(const CountTarget& target, const HeightSpec& height, const std::vector<double>& s,
                       double cutoff, const Rational& iota, long rho, const CountConfig& cfg = {});

struct AsymptoticRow {
  double t = 0;
  std::uint64_t N = 0;
  double predicted = 0;
  double ratio = 0;
};

struct AsymptoticTable {
  std::vector<AsymptoticRow> rows;
  // |ratio - 1| is nonincreasing along the samples.
  bool monotone_approach = false;
  double last_deviation = 0;
};

// predicted = C t^iota (log t)^(rho-1)
AsymptoticTable asymptotic_report(const std::vector<CountResult>& counts, double C, const Rational& iota, long rho);

}  // namespace manin
