#include "manin/counting_and_zeta.hpp"

#include "manin/error.hpp"
#include "manin/parallel.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace manin {

namespace {

using HighFloat = boost::multiprecision::cpp_bin_float_50;
using u128 = unsigned __int128;

constexpr std::size_t kChunks = 64;

bool checked_mul(u128& acc, u128 factor) { return !__builtin_mul_overflow(acc, factor, &acc); }

bool checked_pow_mul(u128& acc, std::uint64_t base, std::int64_t exp) {
  for (std::int64_t k = 0; k < exp; ++k)
    if (!checked_mul(acc, base)) return false;
  return true;
}

Integer big_product(const std::vector<std::int64_t>& m, const std::vector<std::int64_t>& exps) {
  Integer out = 1;
  for (std::size_t j = 0; j < m.size(); ++j)
    if (exps[j] > 0) out *= boost::multiprecision::pow(Integer(m[j]), static_cast<unsigned>(exps[j]));
  return out;
}

std::optional<std::int64_t> exact_root(const Integer& value, std::int64_t e) {
  Integer r;
  if (mpz_root(r.backend().data(), value.backend().data(), static_cast<unsigned long>(e)) == 0) return std::nullopt;
  if (r > Integer(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
  return r.convert_to<std::int64_t>();
}

// Integer e-th root of v when v is a perfect e-th power: float seed, then
// Newton-style correction with exact verification.
std::optional<std::int64_t> exact_root(u128 v, std::int64_t e) {
  if (e == 1) {
    if (v > static_cast<u128>(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
    return static_cast<std::int64_t>(v);
  }
  if (e == 2) {
    // squares mod 64 fall in 12 residue classes
    constexpr std::uint64_t square_residues = 0x0202021202030213ULL;
    if (!((square_residues >> static_cast<unsigned>(v & 63)) & 1)) return std::nullopt;
  }
  long double guess = std::pow(static_cast<long double>(v), 1.0L / static_cast<long double>(e));
  u128 r = static_cast<u128>(std::llround(guess));
  auto power_cmp = [&](u128 base) {
    u128 acc = 1;
    for (std::int64_t k = 0; k < e; ++k)
      if (!checked_mul(acc, base)) return 1;
    return acc < v ? -1 : (acc == v ? 0 : 1);
  };
  while (r > 0 && power_cmp(r) > 0) --r;
  while (power_cmp(r + 1) <= 0) ++r;
  if (power_cmp(r) != 0) return std::nullopt;
  return static_cast<std::int64_t>(r);
}

class FastPolynomial {
 public:
  FastPolynomial() = default;
  explicit FastPolynomial(const GeneralizedPolynomial& p) {
    for (const auto& mono : p.monomials()) {
      Term term;
      term.coefficient = static_cast<long double>(to_double(mono.coefficient));
      for (std::size_t i = 0; i < mono.exponents.size(); ++i) {
        const Rational& e = mono.exponents[i];
        if (e == 0) continue;
        if (is_integral(e))
          term.integer_powers.emplace_back(i, boost::multiprecision::numerator(e).convert_to<int>());
        else
          term.real_powers.emplace_back(i, static_cast<long double>(to_double(e)));
      }
      terms_.push_back(std::move(term));
    }
  }

  long double operator()(const std::vector<long double>& x) const {
    long double total = 0;
    for (const auto& term : terms_) {
      long double v = term.coefficient;
      for (const auto& [i, e] : term.integer_powers)
        for (int k = 0; k < e; ++k) v *= x[i];
      for (const auto& [i, e] : term.real_powers) v *= std::pow(x[i], e);
      total += v;
    }
    return total;
  }

 private:
  struct Term {
    long double coefficient = 0;
    std::vector<std::pair<std::size_t, int>> integer_powers;
    std::vector<std::pair<std::size_t, long double>> real_powers;
  };
  std::vector<Term> terms_;
};

class HeightTest {
 public:
  HeightTest(const HeightSpec& spec, double t, std::size_t coordinates) : mode_(spec.mode) {
    if (!(t >= 1)) throw Error(ErrorCode::PreconditionViolation, "height bound t must be at least 1");
    if (mode_ == HeightMode::SupNorm) {
      box_ = static_cast<std::int64_t>(std::floor(t));
      return;
    }
    const auto& p = spec.polynomial;
    if (p.variables() != coordinates)
      throw Error(ErrorCode::PreconditionViolation, "height polynomial has " + std::to_string(p.variables()) +
                                                        " variables, expected " + std::to_string(coordinates));
    polynomial_ = p;
    fast_ = FastPolynomial(p);
    degree_ = p.degree();
    if (degree_ <= 0) throw Error(ErrorCode::PreconditionViolation, "height polynomial must have positive degree");
    const long double d = static_cast<long double>(to_double(degree_));
    bound_ = std::pow(static_cast<long double>(t), d);
    inverse_degree_ = 1.0L / d;
    integral_ = is_integral(degree_);
    for (const auto& mono : p.monomials())
      for (const auto& e : mono.exponents)
        if (!is_integral(e)) integral_ = false;
    if (integral_) {
      exact_bound_ = 1;
      const Rational base(t);
      for (unsigned k = boost::multiprecision::numerator(degree_).convert_to<unsigned>(); k > 0; --k) exact_bound_ *= base;
    } else {
      HighFloat d_hf = HighFloat(boost::multiprecision::numerator(degree_).str()) /
                       HighFloat(boost::multiprecision::denominator(degree_).str());
      high_bound_ = boost::multiprecision::pow(HighFloat(t), d_hf);
    }
    const double kappa = ellipticity_witness(p);
    const double reach = t / std::pow(kappa, 1.0 / to_double(degree_));
    box_ = static_cast<std::int64_t>(std::floor(reach * (1 + 1e-12)));
  }

  std::int64_t box() const { return box_; }

  // x is a coordinatewise lower bound for every completion of a partial tuple.
  bool exceeds(const std::vector<long double>& x) const {
    if (mode_ == HeightMode::SupNorm)
      return *std::max_element(x.begin(), x.end()) > static_cast<long double>(box_) * (1 + 1e-12L);
    return fast_(x) > bound_ * (1 + 1e-12L);
  }

  bool accepts(const std::vector<std::int64_t>& m, std::vector<long double>& scratch, long double& height) const {
    if (mode_ == HeightMode::SupNorm) {
      std::int64_t top = *std::max_element(m.begin(), m.end());
      height = static_cast<long double>(top);
      return top <= box_;
    }
    for (std::size_t i = 0; i < m.size(); ++i) scratch[i] = static_cast<long double>(m[i]);
    const long double value = fast_(scratch);
    height = std::pow(value, inverse_degree_);
    if (value < bound_ * (1 - 1e-14L)) return true;
    if (value > bound_ * (1 + 1e-14L)) return false;
    return integral_ ? exact_accepts(m) : high_accepts(m);
  }

 private:
  bool exact_accepts(const std::vector<std::int64_t>& m) const {
    Rational total = 0;
    for (const auto& mono : polynomial_.monomials()) {
      Rational term = mono.coefficient;
      for (std::size_t i = 0; i < m.size(); ++i)
        if (mono.exponents[i] != 0)
          term *= boost::multiprecision::pow(Integer(m[i]),
                                             boost::multiprecision::numerator(mono.exponents[i]).convert_to<unsigned>());
      total += term;
    }
    return total <= exact_bound_;
  }

  bool high_accepts(const std::vector<std::int64_t>& m) const {
    HighFloat total = 0;
    for (const auto& mono : polynomial_.monomials()) {
      HighFloat term = HighFloat(boost::multiprecision::numerator(mono.coefficient).str()) /
                       HighFloat(boost::multiprecision::denominator(mono.coefficient).str());
      for (std::size_t i = 0; i < m.size(); ++i) {
        const Rational& e = mono.exponents[i];
        if (e == 0) continue;
        HighFloat ehf = HighFloat(boost::multiprecision::numerator(e).str()) /
                        HighFloat(boost::multiprecision::denominator(e).str());
        term *= boost::multiprecision::pow(HighFloat(m[i]), ehf);
      }
      total += term;
    }
    return total <= high_bound_ * (1 + HighFloat("1e-40"));
  }

  HeightMode mode_;
  std::int64_t box_ = 0;
  GeneralizedPolynomial polynomial_;
  FastPolynomial fast_;
  Rational degree_;
  long double bound_ = 0;
  long double inverse_degree_ = 1;
  bool integral_ = true;
  Rational exact_bound_;
  HighFloat high_bound_;
};

// Solves one toric relation for a chosen coordinate and checks the others.
class RelationSolver {
 public:
  explicit RelationSolver(const ToricProblem& problem) : rows_(problem.matrix()) {
    const std::size_t coords = problem.coordinates();
    for (std::size_t j = coords; j-- > 0 && !solved_;) {
      for (std::size_t r = 0; r < rows_.size(); ++r)
        if (rows_[r][j] != 0) {
          solved_ = j;
          pivot_row_ = rows_[r];
          if (pivot_row_[j] < 0)
            for (auto& v : pivot_row_) v = -v;
          break;
        }
    }
    if (solved_) {
      numerator_exps_.assign(coords, 0);
      denominator_exps_.assign(coords, 0);
      for (std::size_t j = 0; j < coords; ++j) {
        if (j == *solved_) continue;
        if (pivot_row_[j] < 0) numerator_exps_[j] = -pivot_row_[j];
        if (pivot_row_[j] > 0) denominator_exps_[j] = pivot_row_[j];
      }
      for (const auto& row : rows_) {
        IntVector pos(coords, 0), neg(coords, 0);
        for (std::size_t j = 0; j < coords; ++j) (row[j] > 0 ? pos : neg)[j] = std::abs(row[j]);
        checks_.emplace_back(std::move(pos), std::move(neg));
      }
    }
  }

  std::optional<std::size_t> solved() const { return solved_; }

  long double lower_bound(const std::vector<long double>&) const { return 1.0L; }

  bool solve(std::vector<std::int64_t>& m) const {
    const std::size_t s = *solved_;
    const std::int64_t e = pivot_row_[s];
    m[s] = 1;
    u128 num = 1, den = 1;
    bool fits = true;
    for (std::size_t j = 0; j < m.size() && fits; ++j) {
      if (numerator_exps_[j]) fits = checked_pow_mul(num, m[j], numerator_exps_[j]);
      if (fits && denominator_exps_[j]) fits = checked_pow_mul(den, m[j], denominator_exps_[j]);
    }
    std::optional<std::int64_t> root;
    if (fits) {
      if (num % den != 0) return false;
      root = exact_root(num / den, e);
    } else {
      Integer bn = big_product(m, numerator_exps_), bd = big_product(m, denominator_exps_);
      if (bn % bd != 0) return false;
      root = exact_root(Integer(bn / bd), e);
    }
    if (!root) return false;
    m[s] = *root;
    for (const auto& [pos, neg] : checks_) {
      u128 lhs = 1, rhs = 1;
      bool ok = true;
      for (std::size_t j = 0; j < m.size() && ok; ++j) {
        if (pos[j]) ok = checked_pow_mul(lhs, m[j], pos[j]);
        if (ok && neg[j]) ok = checked_pow_mul(rhs, m[j], neg[j]);
      }
      if (ok) {
        if (lhs != rhs) return false;
      } else if (big_product(m, pos) != big_product(m, neg)) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<IntVector> rows_;
  std::optional<std::size_t> solved_;
  IntVector pivot_row_;
  IntVector numerator_exps_, denominator_exps_;
  std::vector<std::pair<IntVector, IntVector>> checks_;
};

// m_{n+1} = (prod m_i^{a_i})^{1/q}.
class HypersurfaceSolver {
 public:
  explicit HypersurfaceSolver(const IntVector& a) : a_(a), q_(std::accumulate(a.begin(), a.end(), std::int64_t{0})) {
    for (auto v : a_) scaled_.push_back(static_cast<long double>(v) / static_cast<long double>(q_));
  }

  std::optional<std::size_t> solved() const { return a_.size(); }

  long double lower_bound(const std::vector<long double>& x) const {
    long double log_sum = 0;
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (x[i] > 1) log_sum += scaled_[i] * std::log(x[i]);
    return std::max(1.0L, std::exp(log_sum) * (1 - 1e-15L));
  }

  bool solve(std::vector<std::int64_t>& m) const {
    const std::size_t n = a_.size();
    u128 product = 1;
    bool fits = true;
    for (std::size_t i = 0; i < n && fits; ++i) fits = checked_pow_mul(product, m[i], a_[i]);
    std::optional<std::int64_t> root;
    if (fits) {
      root = exact_root(product, q_);
    } else {
      IntVector exps(a_);
      exps.push_back(0);
      root = exact_root(big_product(m, exps), q_);
    }
    if (!root) return false;
    m[n] = *root;
    return true;
  }

 private:
  IntVector a_;
  std::int64_t q_;
  std::vector<long double> scaled_;
};

class NoRelation {
 public:
  std::optional<std::size_t> solved() const { return std::nullopt; }
  long double lower_bound(const std::vector<long double>&) const { return 1.0L; }
  bool solve(std::vector<std::int64_t>&) const { return true; }
};

struct ChunkTotals {
  std::uint64_t count = 0;
  std::uint64_t leaves = 0;
  std::vector<long double> sums;
};

struct EnumerationTotals {
  std::uint64_t count = 0;
  std::uint64_t leaves = 0;
  std::int64_t box = 0;
  std::vector<long double> sums;
};

template <class Solver>
EnumerationTotals enumerate(const Solver& solver, std::size_t coordinates, const HeightSpec& spec, double t,
                            const std::vector<double>& exponents, const CountConfig& cfg) {
  if (coordinates < 2) throw Error(ErrorCode::PreconditionViolation, "counting needs at least two coordinates");
  HeightTest height(spec, t, coordinates);
  const std::int64_t box = height.box();
  const auto solved = solver.solved();
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < coordinates; ++j)
    if (!solved || j != *solved) order.push_back(j);
  const double estimate = std::pow(static_cast<double>(box), static_cast<double>(order.size()));
  if (estimate > cfg.operation_budget) {
    std::ostringstream msg;
    msg << "enumeration box " << box << "^" << order.size() << " ~ " << estimate << " exceeds the budget "
        << cfg.operation_budget;
    throw Error(ErrorCode::BoxTooLarge, msg.str());
  }

  std::vector<ChunkTotals> chunks(kChunks);
  parallel_for(kChunks, [&](std::size_t c) {
    ChunkTotals& out = chunks[c];
    out.sums.assign(exponents.size(), 0.0L);
    std::vector<std::int64_t> m(coordinates, 1);
    std::vector<long double> x(coordinates, 1.0L), scratch(coordinates, 1.0L);
    // Largest value of coordinate order[level] whose lower bound stays inside
    // the height region; the bound is monotone in that coordinate.
    auto limit = [&](std::size_t idx) {
      auto outside = [&](std::int64_t v) {
        x[idx] = static_cast<long double>(v);
        if (solved) x[*solved] = solver.lower_bound(x);
        return height.exceeds(x);
      };
      std::int64_t lo = 0, hi = box;
      if (!outside(hi)) {
        lo = hi;
      } else {
        while (hi - lo > 1) {
          std::int64_t mid = lo + (hi - lo) / 2;
          (outside(mid) ? hi : lo) = mid;
        }
      }
      x[idx] = 1.0L;
      if (solved) x[*solved] = solver.lower_bound(x);
      return lo;
    };
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t level, std::int64_t g) {
      const std::size_t idx = order[level];
      const std::int64_t start = level == 0 ? static_cast<std::int64_t>(c) + 1 : 1;
      const std::int64_t step = level == 0 ? static_cast<std::int64_t>(kChunks) : 1;
      const std::int64_t top = limit(idx);
      const bool leaf = level + 1 == order.size();
      for (std::int64_t v = start; v <= top; v += step) {
        m[idx] = v;
        x[idx] = static_cast<long double>(v);
        if (!leaf) {
          rec(level + 1, std::gcd(g, v));
          continue;
        }
        ++out.leaves;
        if (solved && !solver.solve(m)) continue;
        std::int64_t gv = std::gcd(g, v);
        if (solved) gv = std::gcd(gv, m[*solved]);
        if (gv != 1) continue;
        long double h = 0;
        if (!height.accepts(m, scratch, h)) continue;
        ++out.count;
        for (std::size_t k = 0; k < exponents.size(); ++k)
          out.sums[k] += std::pow(h, -static_cast<long double>(exponents[k]));
      }
      m[idx] = 1;
      x[idx] = 1.0L;
      if (solved) m[*solved] = 1;
    };
    rec(0, 0);
  });

  EnumerationTotals total;
  total.box = box;
  total.sums.assign(exponents.size(), 0.0L);
  for (const auto& c : chunks) {
    total.count += c.count;
    total.leaves += c.leaves;
    for (std::size_t k = 0; k < exponents.size(); ++k) total.sums[k] += c.sums[k];
  }
  return total;
}

EnumerationTotals enumerate_target(const CountTarget& target, const HeightSpec& height, double t,
                                   const std::vector<double>& exponents, const CountConfig& cfg,
                                   std::uint64_t& sign_factor) {
  if (target.hypersurface) {
    check_hypersurface_vector(*target.hypersurface);
    sign_factor = sign_count(hypersurface_problem(*target.hypersurface)).value;
    return enumerate(HypersurfaceSolver(*target.hypersurface), target.hypersurface->size() + 1, height, t, exponents,
                     cfg);
  }
  if (!target.toric) throw Error(ErrorCode::InvalidInput, "count target has neither a toric matrix nor a vector a");
  const ToricProblem& problem = *target.toric;
  sign_factor = sign_count(problem).value;
  if (problem.relations() == 0) return enumerate(NoRelation{}, problem.coordinates(), height, t, exponents, cfg);
  return enumerate(RelationSolver(problem), problem.coordinates(), height, t, exponents, cfg);
}

CountResult run_count(const CountTarget& target, const HeightSpec& height, double t, const CountConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  CountResult out;
  out.t = t;
  EnumerationTotals totals = enumerate_target(target, height, t, {}, cfg, out.sign_factor);
  out.primitive = totals.count;
  out.N = totals.count * out.sign_factor;
  out.box = totals.box;
  out.leaves = totals.leaves;
  out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

CountResult count_points(const ToricProblem& problem, const HeightSpec& height, double t, const CountConfig& cfg) {
  return run_count(CountTarget::of(problem), height, t, cfg);
}

CountResult count_points_hypersurface(const IntVector& a, const HeightSpec& height, double t, const CountConfig& cfg) {
  return run_count(CountTarget::of_hypersurface(a), height, t, cfg);
}

CountResult count_points(const CountTarget& target, const HeightSpec& height, double t, const CountConfig& cfg) {
  return run_count(target, height, t, cfg);
}

ZetaProbe zeta_partial(const CountTarget& target, const HeightSpec& height, const std::vector<double>& s,
                       double cutoff, const Rational& iota, long rho, const CountConfig& cfg) {
  const double iota_d = to_double(iota);
  for (double v : s)
    if (!(v > iota_d))
      throw Error(ErrorCode::PreconditionViolation,
                  "zeta partial sums need s > iota = " + to_string(iota) + ", got " + std::to_string(v));
  if (rho < 1) throw Error(ErrorCode::PreconditionViolation, "rho must be positive");
  ZetaProbe probe;
  probe.iota = iota;
  probe.rho = rho;
  std::uint64_t sign = 1;
  EnumerationTotals totals = enumerate_target(target, height, cutoff, s, cfg, sign);
  probe.points = totals.count * sign;
  probe.leaves = totals.leaves;
  probe.box = totals.box;
  for (std::size_t k = 0; k < s.size(); ++k) {
    ZetaSample sample;
    sample.s = s[k];
    sample.cutoff = cutoff;
    sample.partial_sum = static_cast<double>(static_cast<long double>(sign) * totals.sums[k]);
    sample.tail_estimate =
        static_cast<double>(probe.points) * iota_d * std::pow(cutoff, -s[k]) / (s[k] - iota_d);
    sample.value = sample.partial_sum + sample.tail_estimate;
    sample.scaled = std::pow(s[k] - iota_d, static_cast<double>(rho)) * sample.value;
    probe.samples.push_back(sample);
  }
  return probe;
}

AsymptoticTable asymptotic_report(const std::vector<CountResult>& counts, double C, const Rational& iota, long rho) {
  if (counts.size() < 3) throw Error(ErrorCode::PreconditionViolation, "asymptotic report needs at least 3 samples");
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (!(counts[i].t > counts[i - 1].t))
      throw Error(ErrorCode::PreconditionViolation, "count samples must have increasing t");
  if (!(C > 0)) throw Error(ErrorCode::PreconditionViolation, "predicted constant must be positive");
  AsymptoticTable table;
  const double iota_d = to_double(iota);
  for (const auto& c : counts) {
    AsymptoticRow row;
    row.t = c.t;
    row.N = c.N;
    row.predicted = C * std::pow(c.t, iota_d) * std::pow(std::log(c.t), static_cast<double>(rho - 1));
    row.ratio = static_cast<double>(c.N) / row.predicted;
    table.rows.push_back(row);
  }
  table.monotone_approach = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (std::abs(table.rows[i].ratio - 1) > std::abs(table.rows[i - 1].ratio - 1)) table.monotone_approach = false;
  table.last_deviation = std::abs(table.rows.back().ratio - 1);
  return table;
}

}  // namespace manin
