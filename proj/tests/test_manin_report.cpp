#include "manin/error.hpp"
#include "manin/manin.hpp"

#include <doctest.h>

#include <cmath>

using namespace manin;

namespace {

constexpr double kZeta3 = 1.2020569031595942854;

ManinConfig quick() {
  ManinConfig cfg;
  cfg.euler.prime_cutoff = 20000;
  return cfg;
}

}  // namespace

TEST_CASE("projective plane with a cubic height") {
  ManinReport r = manin_constant(projective_torus(2), parse_polynomial("X1^3+X2^3+X3^3"), quick());
  CHECK(r.iota() == 3);
  CHECK(r.rho() == 1);
  CHECK(r.analysis.sign_factor == 4);
  // Vol{x^3 + y^3 + z^3 <= 1, x,y,z >= 0} = Gamma(4/3)^3
  const double vol = std::pow(std::tgamma(4.0 / 3), 3);
  CHECK(r.volume.constant.value == doctest::Approx(vol).epsilon(1e-8));
  CHECK(r.C == doctest::Approx(4 * 3 * vol / 3 / kZeta3).epsilon(1e-7));
  CHECK(r.C0 == doctest::Approx(r.C * 3).epsilon(1e-14));
  CHECK(r.combinatorial_factor() == doctest::Approx(1.0 / 3));
  // A direct count sits close to the prediction already at t = 60.
  auto n = count_points(projective_torus(2), HeightSpec::from_polynomial(r.polynomial), 60);
  CHECK(static_cast<double>(n.N) / (r.C * std::pow(60.0, 3)) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("C0 / C equals iota (rho - 1)!") {
  ManinConfig cfg = quick();
  cfg.sup_norm = false;
  ManinReport r = manin_constant_hypersurface({1, 1, 1}, parse_polynomial("X1+X2+X3+X4"), cfg);
  CHECK(r.rho() == 7);
  CHECK(r.K == 9);
  CHECK(r.C0 / r.C == doctest::Approx(1.0 * 720).epsilon(1e-12));
  CHECK_FALSE(r.sup_norm_C.has_value());
}

TEST_CASE("toric and hypersurface routes agree for a=(1,1)") {
  auto p = parse_polynomial("X1^2+X2^2+X3^2");
  ManinReport h = manin_constant_hypersurface({1, 1}, p, quick());
  ManinReport t = manin_constant(hypersurface_problem({1, 1}), p, quick());
  CHECK(h.C == doctest::Approx(1.0248133276506186).epsilon(1e-8));
  CHECK(t.C == doctest::Approx(h.C).epsilon(1e-8));
  CHECK(h.volume.constant.value == doctest::Approx(0.42143758870314896).epsilon(1e-9));
  REQUIRE(h.sup_norm_C.has_value());
  CHECK(*h.sup_norm_C == doctest::Approx(12 / (M_PI * M_PI)).epsilon(1e-7));
  CHECK(h.analysis.flags().empty());
  CHECK(h.analysis.dimension_ok);
}

TEST_CASE("polynomial checks") {
  CHECK_THROWS_AS(manin_constant(projective_torus(2), parse_polynomial("X1^2+X2^2"), quick()), Error);
  try {
    manin_constant(projective_torus(1), parse_polynomial("X1*X2"), quick());
    FAIL("expected NotElliptic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotElliptic);
  }
}

TEST_CASE("asymptotic table from counts") {
  ManinReport r = manin_constant_hypersurface({1, 1}, parse_polynomial("X1^2+X2^2+X3^2"), quick());
  std::vector<CountResult> counts;
  for (double t : {100.0, 300.0, 1000.0})
    counts.push_back(count_points_hypersurface({1, 1}, HeightSpec::from_polynomial(r.polynomial), t));
  AsymptoticTable tab = asymptotic_report(counts, r, HeightMode::Polynomial);
  CHECK(tab.rows.size() == 3);
  CHECK(tab.rows[2].predicted == doctest::Approx(r.C * 1000));
  CHECK(tab.last_deviation < 0.05);
  AsymptoticTable sup = asymptotic_report(counts, r, HeightMode::SupNorm);
  CHECK(sup.rows[0].predicted == doctest::Approx(*r.sup_norm_C * 100));
}
