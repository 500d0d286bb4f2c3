#include "manin/counting_and_zeta.hpp"
#include "manin/error.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

using namespace manin;

namespace {

// Heights of all positive primitive solutions with every coordinate <= box,
// before the sign factor.
std::vector<double> brute_heights(const std::vector<IntVector>& rows, std::size_t k, const HeightSpec& h, double t,
                                  std::int64_t box) {
  std::vector<double> out;
  IntVector x(k, 1);
  const double d = h.mode == HeightMode::Polynomial ? to_double(h.polynomial.degree()) : 1;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      std::int64_t g = 0;
      for (auto v : x) g = std::gcd(g, v);
      if (g != 1) return;
      for (const auto& row : rows) {
        __int128 lhs = 1, rhs = 1;
        for (std::size_t j = 0; j < k; ++j)
          for (std::int64_t e = 0; e < std::abs(row[j]); ++e) (row[j] > 0 ? lhs : rhs) *= x[j];
        if (lhs != rhs) return;
      }
      double height;
      if (h.mode == HeightMode::SupNorm) {
        height = static_cast<double>(*std::max_element(x.begin(), x.end()));
      } else {
        std::vector<double> xd(x.begin(), x.end());
        height = std::pow(h.polynomial.evaluate(xd), 1 / d);
      }
      if (height <= t * (1 + 1e-13)) out.push_back(height);
      return;
    }
    for (std::int64_t v = 1; v <= box; ++v) {
      x[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::uint64_t brute_count(const std::vector<IntVector>& rows, std::size_t k, const HeightSpec& h, double t,
                          std::int64_t box, std::uint64_t sign) {
  return brute_heights(rows, k, h, t, box).size() * sign;
}

HeightSpec poly(const char* text) { return HeightSpec::from_polynomial(parse_polynomial(text)); }

}  // namespace

TEST_CASE("projective line, sup norm") {
  CountResult r = count_points(projective_torus(1), HeightSpec::sup_norm(), 5);
  CHECK(r.N == 38);
  CHECK(r.sign_factor == 2);
  CHECK(r.primitive == 19);
  CHECK(count_points(projective_torus(1), HeightSpec::sup_norm(), 200).N ==
        brute_count({}, 2, HeightSpec::sup_norm(), 200, 200, 2));
}

TEST_CASE("projective plane, sup and linear height") {
  auto p = projective_torus(2);
  CHECK(count_points(p, HeightSpec::sup_norm(), 25).N == brute_count({}, 3, HeightSpec::sup_norm(), 25, 25, 4));
  auto h = poly("X1+X2+2*X3");
  CHECK(count_points(p, h, 40).N == brute_count({}, 3, h, 40, 40, 4));
}

TEST_CASE("a=(1,1) against the triple loop") {
  const std::vector<IntVector> rows = {{1, 1, -2}};
  CHECK(count_points_hypersurface({1, 1}, HeightSpec::sup_norm(), 10).N == 14);
  CHECK(count_points_hypersurface({1, 1}, HeightSpec::sup_norm(), 50).N == 70);
  auto h = poly("X1^2+X2^2+X3^2");
  CHECK(count_points_hypersurface({1, 1}, h, 10).N == 10);
  CHECK(count_points_hypersurface({1, 1}, h, 50).N == 46);
  for (double t : {7.0, 30.0, 61.5}) {
    CHECK(count_points_hypersurface({1, 1}, HeightSpec::sup_norm(), t).N ==
          brute_count(rows, 3, HeightSpec::sup_norm(), t, static_cast<std::int64_t>(t), 2));
    CHECK(count_points_hypersurface({1, 1}, h, t).N == brute_count(rows, 3, h, t, static_cast<std::int64_t>(t), 2));
  }
  auto skew = poly("X1^2+2*X2^2+X1*X3+X3^2");
  CHECK(count_points_hypersurface({1, 1}, skew, 40).N == brute_count(rows, 3, skew, 40, 40, 2));
}

TEST_CASE("other hypersurfaces and toric relations") {
  CHECK(count_points_hypersurface({1, 1, 1}, HeightSpec::sup_norm(), 30).N ==
        brute_count({{1, 1, 1, -3}}, 4, HeightSpec::sup_norm(), 30, 30, count_points_hypersurface({1, 1, 1}, HeightSpec::sup_norm(), 1).sign_factor));
  auto s12 = count_points_hypersurface({1, 2}, HeightSpec::sup_norm(), 60);
  CHECK(s12.N == brute_count({{1, 2, -3}}, 3, HeightSpec::sup_norm(), 60, 60, s12.sign_factor));
  auto quad = poly("X1^2+X2^2+X3^2+X4^2");
  auto p = validate_toric_matrix({{1, 1, -1, -1}}, 4);
  auto r = count_points(p, quad, 24);
  CHECK(r.N == brute_count({{1, 1, -1, -1}}, 4, quad, 24, 24, r.sign_factor));
  auto two = validate_toric_matrix({{1, 1, -2, 0}, {1, 0, 1, -2}}, 4);
  auto r2 = count_points(two, HeightSpec::sup_norm(), 40);
  CHECK(r2.N == brute_count(two.matrix(), 4, HeightSpec::sup_norm(), 40, 40, r2.sign_factor));
}

TEST_CASE("generic and hypersurface paths agree") {
  for (const IntVector& a : std::vector<IntVector>{{1, 1}, {1, 2}, {2, 3}, {1, 1, 1}}) {
    std::string lin = "X1";
    for (std::size_t i = 2; i <= a.size() + 1; ++i) lin += "+X" + std::to_string(i);
    auto h = poly(lin.c_str());
    for (double t : {20.0, 45.0}) {
      CHECK(count_points(hypersurface_problem(a), h, t).N == count_points_hypersurface(a, h, t).N);
      CHECK(count_points(hypersurface_problem(a), HeightSpec::sup_norm(), t).N ==
            count_points_hypersurface(a, HeightSpec::sup_norm(), t).N);
    }
  }
}

TEST_CASE("counts are monotone in t and sandwiched between heights") {
  auto lin = poly("X1+X2+X3");
  std::uint64_t prev = 0;
  for (double t = 1; t <= 200; t *= 1.7) {
    auto sup = count_points_hypersurface({1, 1}, HeightSpec::sup_norm(), t).N;
    CHECK(sup >= prev);
    prev = sup;
    // max <= X1+X2+X3 <= 3 max
    CHECK(count_points_hypersurface({1, 1}, lin, t).N <= sup);
    CHECK(sup <= count_points_hypersurface({1, 1}, lin, 3 * t).N);
  }
}

TEST_CASE("zeta partial sums equal the Stieltjes sum of the count") {
  auto h = poly("X1^2+X2^2+X3^2");
  auto heights = brute_heights({{1, 1, -2}}, 3, h, 300, 300);
  std::vector<double> s = {1.5, 2.0, 3.0};
  ZetaProbe probe = zeta_partial(CountTarget::of_hypersurface({1, 1}), h, s, 300, Rational(1), 1);
  CHECK(probe.points == 2 * heights.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    long double direct = 0;
    for (double v : heights) direct += 2 * std::pow(static_cast<long double>(v), -s[k]);
    CHECK(probe.samples[k].partial_sum == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
    CHECK(probe.samples[k].tail_estimate > 0);
    CHECK(probe.samples[k].scaled == doctest::Approx((s[k] - 1) * probe.samples[k].value));
  }
}

TEST_CASE("projective line zeta at s = 3") {
  // Coprime positive pairs with max m: 1 for m = 1, else 2 phi(m).
  long double oracle = 0;
  const int M = 4000;
  std::vector<int> phi(M + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (int i = 2; i <= M; ++i)
    if (phi[i] == i)
      for (int j = i; j <= M; j += i) phi[j] -= phi[j] / i;
  for (int m = 1; m <= M; ++m) oracle += 2.0L * (m == 1 ? 1 : 2 * phi[m]) * std::pow(static_cast<long double>(m), -3.0L);
  ZetaProbe probe = zeta_partial(CountTarget::of(projective_torus(1)), HeightSpec::sup_norm(), {3.0}, M,
                                 Rational(2), 1);
  CHECK(probe.samples[0].partial_sum == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
}

TEST_CASE("preconditions and budgets") {
  CHECK_THROWS_AS(zeta_partial(CountTarget::of_hypersurface({1, 1}), HeightSpec::sup_norm(), {1.0}, 10, Rational(1), 1),
                  Error);
  try {
    CountConfig cfg;
    cfg.operation_budget = 1e3;
    count_points(projective_torus(3), HeightSpec::sup_norm(), 1e4, cfg);
    FAIL("expected BoxTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoxTooLarge);
  }
  std::vector<CountResult> few(2);
  CHECK_THROWS_AS(asymptotic_report(few, 1.0, Rational(1), 1), Error);
}
