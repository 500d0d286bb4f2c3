#include "manin/euler_products.hpp"

#include "manin/error.hpp"
#include "manin/parallel.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

namespace manin {

namespace bmp = boost::multiprecision;

namespace {

using Real113 = bmp::number<bmp::cpp_bin_float<113, bmp::digit_base_2>, bmp::et_off>;
using Real160 = bmp::number<bmp::cpp_bin_float<160, bmp::digit_base_2>, bmp::et_off>;
using Real256 = bmp::number<bmp::cpp_bin_float<256, bmp::digit_base_2>, bmp::et_off>;

constexpr std::size_t kChunks = 64;

struct Polar {
  std::uint64_t D = 1;
  std::vector<std::uint64_t> scaled;  // D * c_i
  double min_c = 0;
};

Polar make_polar(const RationalVector& c, std::size_t arity) {
  if (c.size() != arity) throw Error(ErrorCode::PreconditionViolation, "polar vector length differs from the weight arity");
  Polar out;
  for (const auto& x : c)
    if (x <= 0) throw Error(ErrorCode::NonPositivePolar, "polar vector has a non-positive coordinate " + to_string(x));
  Integer d = common_denominator(c);
  if (d > 1000000) throw Error(ErrorCode::PreconditionViolation, "polar vector denominators are too large");
  out.D = d.convert_to<std::uint64_t>();
  out.min_c = to_double(*std::min_element(c.begin(), c.end()));
  for (const auto& x : c) out.scaled.push_back(numerator(Rational(x * Rational(Integer(d)))).convert_to<std::uint64_t>());
  return out;
}

// Sum of (1+k)^M binom(k+n-1, n-1) z^k.
double growth_series(double z, std::size_t n, int M) {
  if (M == 0) return std::pow(1.0 - z, -static_cast<double>(n));
  double total = 0;
  for (std::size_t k = 0;; ++k) {
    double logterm = M * std::log1p(static_cast<double>(k)) + std::lgamma(static_cast<double>(k + n)) -
                     std::lgamma(static_cast<double>(k + 1)) - std::lgamma(static_cast<double>(n)) +
                     static_cast<double>(k) * std::log(z);
    double term = std::exp(logterm);
    total += term;
    double ratio = std::pow((k + 2.0) / (k + 1.0), M) * (k + n) / (k + 1.0) * z;
    if (k > n + static_cast<std::size_t>(M) && ratio < 1 && term < 1e-18 * total) {
      total += term * ratio / (1 - ratio);
      break;
    }
  }
  return total;
}

// Bound on sum_{j > J} W_j x^j with x = p^(-1/D), and the smallest J reaching
// a target; theta splits the decay between the truncation point and the
// growth series.
struct TailBound {
  const Polar* polar;
  std::size_t arity;
  GrowthBound growth;

  double log_bound(std::uint64_t J, double logp, double theta) const {
    double z = std::exp(-theta * polar->min_c * logp);
    return -(1 - theta) * static_cast<double>(J + 1) * logp / static_cast<double>(polar->D) +
           std::log(growth.constant * growth_series(z, arity, growth.exponent));
  }

  double bound(std::uint64_t J, double p) const {
    double logp = std::log(p), best = HUGE_VAL;
    for (int t = 1; t < 20; ++t) best = std::min(best, log_bound(J, logp, t / 20.0));
    return std::exp(best);
  }

  std::uint64_t terms_needed(double p, double tol) const {
    double logp = std::log(p);
    double best = HUGE_VAL;
    for (int t = 1; t < 20; ++t) {
      double theta = t / 20.0;
      double z = std::exp(-theta * polar->min_c * logp);
      double need = (std::log(growth.constant * growth_series(z, arity, growth.exponent)) - std::log(tol)) *
                        static_cast<double>(polar->D) / ((1 - theta) * logp) -
                    1;
      best = std::min(best, need);
    }
    return static_cast<std::uint64_t>(std::max(0.0, std::ceil(best)));
  }
};

// Exact weight sums W_j = sum of g(nu) over D<nu,c> = j, complete for j <= J.
struct WeightSeries {
  std::uint64_t J = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> terms;  // (j, W_j), W_j != 0, ascending
};

double estimate_points(const Polar& polar, std::uint64_t J, bool hyperplanes) {
  const std::size_t n = polar.scaled.size();
  double logcount = 0;
  std::size_t dims = hyperplanes ? n - 1 : n;
  for (std::size_t i = 0; i < dims; ++i) logcount += std::log(static_cast<double>(J + 1) / static_cast<double>(polar.scaled[i]));
  logcount -= std::lgamma(static_cast<double>(dims) + 1);
  return std::exp(logcount) * (hyperplanes ? static_cast<double>(n) : 1.0) + 1;
}

WeightSeries expand_weights(const UniformMultiplicativeSpec& spec, const Polar& polar, std::uint64_t J,
                            std::uint64_t budget) {
  const bool hyper = spec.support_on_coordinate_hyperplanes() && spec.arity() > 1;
  while (J > polar.D && estimate_points(polar, J, hyper) > static_cast<double>(budget)) J = J * 9 / 10;
  const std::size_t n = spec.arity();
  std::map<std::uint64_t, std::uint64_t> W;
  IntVector nu(n, 0);
  std::function<void(std::size_t, std::uint64_t, bool)> rec = [&](std::size_t i, std::uint64_t used, bool zero) {
    if (i == n) {
      std::uint64_t g = spec(nu);
      if (g) W[used] += g;
      return;
    }
    std::uint64_t cap = (J - used) / polar.scaled[i];
    if (hyper && i + 1 == n && !zero) cap = 0;
    for (std::uint64_t v = 0; v <= cap; ++v) {
      nu[i] = static_cast<std::int64_t>(v);
      rec(i + 1, used + v * polar.scaled[i], zero || v == 0);
    }
    nu[i] = 0;
  };
  rec(0, 0, false);
  WeightSeries out;
  out.J = J;
  for (const auto& [j, w] : W) out.terms.emplace_back(j, w);
  return out;
}

int moebius(std::uint64_t k) {
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= k; ++p) {
    if (k % p) continue;
    k /= p;
    if (k % p == 0) return 0;
    mu = -mu;
  }
  if (k > 1) mu = -mu;
  return mu;
}

template <class Real>
Real ipow(Real b, std::uint64_t e) {
  Real r = 1;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

template <class Real>
Real weight_sum(const WeightSeries& w, const Real& x, std::uint64_t J) {
  Real total = 0, power = 1;
  std::uint64_t last = 0;
  for (const auto& [j, wj] : w.terms) {
    if (j > J) break;
    power *= ipow(x, j - last);
    last = j;
    total += power * Real(wj);
  }
  return total;
}

template <class Real>
LocalFactor local_factor_impl(const UniformMultiplicativeSpec& spec, const RationalVector& c, std::uint64_t p,
                              double tol, std::uint64_t budget) {
  Polar polar = make_polar(c, spec.arity());
  TailBound tb{&polar, spec.arity(), spec.growth()};
  std::uint64_t J = std::max<std::uint64_t>(tb.terms_needed(static_cast<double>(p), tol), polar.D);
  WeightSeries w = expand_weights(spec, polar, J, budget);
  Real x = exp(-log(Real(p)) / Real(polar.D));
  Real v = weight_sum(w, x, w.J);
  LocalFactor out;
  out.prime = p;
  out.value = v.template convert_to<double>();
  out.value_text = v.str(30);
  out.tail_bound = tb.bound(w.J, static_cast<double>(p));
  out.terms = w.terms.size();
  return out;
}

template <class Real>
class PrimeZeta {
 public:
  explicit PrimeZeta(unsigned bits) : bits_(bits) {}

  // P(s) = sum_k mu(k)/k log zeta(k s) for s = j / D > 1.
  Real operator()(std::uint64_t j, std::uint64_t D) {
    Real total = 0;
    const double s = static_cast<double>(j) / static_cast<double>(D);
    for (std::uint64_t k = 1; static_cast<double>(k) * s < bits_ + 16.0; ++k) {
      int mu = moebius(k);
      if (!mu) continue;
      total += Real(mu) / Real(k) * log_zeta(j * k, D);
    }
    return total;
  }

 private:
  Real log_zeta(std::uint64_t num, std::uint64_t D) {
    Rational key(num, D);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Real sigma = Real(num) / Real(D);
    Real value;
    if (sigma >= 20) {
      Real u = 0;
      for (std::uint64_t n = 2;; ++n) {
        Real t = exp(-sigma * log(Real(n)));
        u += t;
        if (t < ldexp(Real(1), -static_cast<int>(bits_) - 16)) break;
      }
      value = log1p(u);
    } else {
      value = log(boost::math::zeta(sigma));
    }
    cache_.emplace(key, value);
    return value;
  }

  unsigned bits_;
  std::map<Rational, Real> cache_;
};

template <class Real>
EulerReport euler_impl(const UniformMultiplicativeSpec& spec, const RationalVector& c, unsigned K,
                       const EulerConfig& cfg, unsigned bits) {
  Polar polar = make_polar(c, spec.arity());
  const std::uint64_t D = polar.D;
  const std::uint64_t P0 = cfg.prime_cutoff;
  if (P0 < 2) throw Error(ErrorCode::PreconditionViolation, "prime cutoff must be at least 2");
  if (!(cfg.tolerance > 0)) throw Error(ErrorCode::PreconditionViolation, "Euler tolerance must be positive");
  TailBound tb{&polar, spec.arity(), spec.growth()};

  // Terms of the log series needed beyond the cutoff: b_j P0^(1 - j/D) must
  // drop below the working precision.
  const double log10P0 = std::log10(static_cast<double>(P0));
  std::uint64_t J_tail = D * (2 + static_cast<std::uint64_t>(std::ceil((bits * 0.30103 + 5) / log10P0)));
  std::uint64_t J_small = std::max<std::uint64_t>(tb.terms_needed(2.0, cfg.tolerance / 4 / std::pow(1.5, K)), D) +
                          static_cast<std::uint64_t>(K) * D;
  WeightSeries w = expand_weights(spec, polar, std::max(J_tail, J_small), cfg.enumeration_budget);
  J_tail = std::min(J_tail, w.J);

  const std::uint64_t J_all = w.J;
  std::vector<Integer> W(J_all + 1, 0);
  for (const auto& [j, wj] : w.terms) W[j] = wj;
  if (W[0] != 1) throw Error(ErrorCode::PreconditionViolation, "weights must satisfy g(0) = 1");
  for (std::uint64_t j = 1; j < D && j <= J_all; ++j)
    if (W[j] != 0)
      throw Error(ErrorCode::PreconditionViolation, "polar vector is not normalized: support below <nu,c> = 1");
  if (D <= J_all && W[D] != K)
    throw Error(ErrorCode::PreconditionViolation,
                "K = " + std::to_string(K) + " but the weight on the face is " + W[D].str());

  // f_j of F(x) = (1 - x^D)^K L(x), exact.
  std::vector<Integer> f(J_all + 1, 0);
  {
    std::vector<Integer> binom(K + 1, 1);
    for (unsigned i = 1; i <= K; ++i) binom[i] = binom[i - 1] * (K - i + 1) / i;
    for (std::uint64_t j = 0; j <= J_all; ++j)
      for (unsigned i = 0; i <= K && i * D <= j; ++i)
        if (W[j - i * D] != 0) f[j] += (i % 2 ? -binom[i] : binom[i]) * W[j - i * D];
  }
  std::vector<std::pair<std::uint64_t, Real>> f_sparse;
  for (std::uint64_t j = 0; j <= J_all; ++j)
    if (f[j] != 0) f_sparse.emplace_back(j, Real(f[j]));
  // log F = sum b_j x^j.
  std::vector<Real> b(J_tail + 1, Real(0));
  for (std::uint64_t j = 1; j <= J_tail; ++j) {
    Real acc = 0;
    for (std::uint64_t k = 1; k < j; ++k)
      if (b[k] != 0 && f[j - k] != 0) acc += Real(k) * b[k] * Real(f[j - k]);
    b[j] = Real(f[j]) - acc / Real(j);
  }

  auto primes = primes_up_to(P0);
  const std::size_t np = primes.size();
  std::vector<double> factors(np);
  std::vector<Real> chunk_log(kChunks, Real(0));
  std::vector<double> chunk_trunc(kChunks, 0.0);
  std::vector<std::vector<Real>> chunk_powers(kChunks, std::vector<Real>(J_tail + 1, Real(0)));
  parallel_for(kChunks, [&](std::size_t ch) {
    std::size_t lo = np * ch / kChunks, hi = np * (ch + 1) / kChunks;
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t p = primes[i];
      const double pd = static_cast<double>(p);
      const double tol_p = cfg.tolerance / (pd * pd);
      // sum_{j > J} |f_j| x^j <= (1 + x^D)^K T_W(J - DK).
      const double spread = std::pow(1 + std::pow(pd, -1.0), K);
      const std::uint64_t shift = static_cast<std::uint64_t>(K) * D;
      std::uint64_t J = std::max<std::uint64_t>(tb.terms_needed(pd, tol_p / spread), D) + shift;
      if (J > J_all) J = J_all;
      double trunc = J >= shift ? spread * tb.bound(J - shift, pd) : HUGE_VAL;
      Real x = exp(-log(Real(p)) / Real(D));
      Real F = 0, power = 1;
      std::uint64_t last = 0;
      for (const auto& [j, fj] : f_sparse) {
        if (j > J) break;
        power *= ipow(x, j - last);
        last = j;
        F += fj * power;
      }
      factors[i] = F.template convert_to<double>();
      chunk_log[ch] += log(F);
      chunk_trunc[ch] += trunc;
      Real xp = 1;
      for (std::uint64_t j = 1; j <= J_tail; ++j) {
        xp *= x;
        chunk_powers[ch][j] += xp;
      }
    }
  });
  Real log_value = 0;
  double trunc_total = 0;
  std::vector<Real> small_sums(J_tail + 1, Real(0));
  for (std::size_t ch = 0; ch < kChunks; ++ch) {
    log_value += chunk_log[ch];
    trunc_total += chunk_trunc[ch];
    for (std::uint64_t j = 1; j <= J_tail; ++j) small_sums[j] += chunk_powers[ch][j];
  }

  PrimeZeta<Real> pz(bits);
  Real tail = 0;
  const Real negligible = ldexp(Real(1), -static_cast<int>(bits));
  const double lnP0 = std::log(static_cast<double>(P0));
  for (std::uint64_t j = D + 1; j <= J_tail; ++j) {
    if (b[j] == 0) continue;
    double s = static_cast<double>(j) / static_cast<double>(D);
    double est = std::abs(b[j].template convert_to<double>()) * std::exp((1 - s) * lnP0) / (s - 1);
    if (est < negligible.template convert_to<double>()) continue;
    tail += b[j] * (pz(j, D) - small_sums[j]);
  }
  // Envelope for the series beyond J_tail.
  double bmax = 0;
  for (std::uint64_t j = J_tail > D ? J_tail - D + 1 : 1; j <= J_tail; ++j)
    bmax = std::max(bmax, std::abs(b[j].template convert_to<double>()));
  double s_next = static_cast<double>(J_tail + 1) / static_cast<double>(D);
  double remainder = s_next > 1 ? 2 * bmax * std::exp((1 - s_next) * lnP0) / (s_next - 1) * static_cast<double>(D) : HUGE_VAL;

  Real total_log = log_value + tail;
  Real value = exp(total_log);
  EulerReport out;
  out.value = value.template convert_to<double>();
  out.value_text = value.str(30);
  out.prime_cutoff = P0;
  out.K = K;
  out.precision_bits = bits;
  out.tail_log_correction = tail.template convert_to<double>();
  out.tail_remainder = remainder;
  // Per-prime truncation is charged at its target for every prime, so the
  // bound does not grow with the cutoff; the excess beyond the target (when
  // the enumeration budget capped the series) is added on top.
  const double prime_zeta_2 = 0.45224742004106549851;
  out.truncation_error = cfg.tolerance * prime_zeta_2 + std::max(0.0, trunc_total - cfg.tolerance * prime_zeta_2);
  double rounding = std::ldexp(1.0, -static_cast<int>(bits) + 40);
  double log_error = out.truncation_error + remainder + rounding;
  out.error = out.value * std::expm1(log_error);
  out.primes_used = np;
  out.regularized_factors = std::move(factors);
  out.denominator = D;
  for (std::uint64_t j = 0; j <= std::min<std::uint64_t>(J_all, 4 * D); ++j) out.series_coefficients.push_back(f[j].str());
  return out;
}

}  // namespace

unsigned supported_precision(unsigned requested) {
  if (requested <= 113) return 113;
  if (requested <= 160) return 160;
  if (requested <= 256) return 256;
  throw Error(ErrorCode::PreconditionViolation, "precision above 256 bits is not supported");
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t k = i * i; k <= limit; k += i) composite[k] = true;
  }
  return out;
}

LocalFactor local_factor(const UniformMultiplicativeSpec& spec, const RationalVector& c, std::uint64_t p, double tol,
                         unsigned precision_bits) {
  if (p < 2) throw Error(ErrorCode::PreconditionViolation, "local factor needs a prime");
  if (!(tol > 0)) throw Error(ErrorCode::PreconditionViolation, "tolerance must be positive");
  const std::uint64_t budget = 20000000;
  switch (supported_precision(precision_bits)) {
    case 113: return local_factor_impl<Real113>(spec, c, p, tol, budget);
    case 160: return local_factor_impl<Real160>(spec, c, p, tol, budget);
    default: return local_factor_impl<Real256>(spec, c, p, tol, budget);
  }
}

Rational epsilon_gap(const LatticePointSet& generators, const RationalVector& c) {
  Rational eps = 1;
  for (const auto& g : generators.points) {
    Rational v = dot(to_rational(g), c);
    if (v > 1) eps = std::min(eps, Rational(v - 1));
  }
  return eps;
}

EulerReport euler_constant(const UniformMultiplicativeSpec& spec, const RationalVector& c, unsigned K,
                           const EulerConfig& cfg, const LatticePointSet* generators) {
  unsigned bits = supported_precision(cfg.precision_bits);
  EulerReport r;
  switch (bits) {
    case 113: r = euler_impl<Real113>(spec, c, K, cfg, bits); break;
    case 160: r = euler_impl<Real160>(spec, c, K, cfg, bits); break;
    default: r = euler_impl<Real256>(spec, c, K, cfg, bits); break;
  }
  r.epsilon_gap = generators ? epsilon_gap(*generators, c) : Rational(1);
  return r;
}

}  // namespace manin
