#include "manin/problem_model.hpp"

#include "manin/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace manin {

std::int64_t ToricProblem::max_entry() const {
  std::int64_t m = 0;
  for (const auto& row : matrix_)
    for (auto a : row) m = std::max<std::int64_t>(m, std::llabs(a));
  return m;
}

ToricProblem validate_toric_matrix(const std::vector<IntVector>& rows, std::size_t coordinates) {
  if (coordinates < 2)
    throw Error(ErrorCode::PreconditionViolation, "need at least two homogeneous coordinates");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != coordinates)
      throw Error(ErrorCode::PreconditionViolation,
                  "row " + std::to_string(i) + " has length " + std::to_string(rows[i].size()) + ", expected " +
                      std::to_string(coordinates));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::int64_t s = std::accumulate(rows[i].begin(), rows[i].end(), std::int64_t{0});
    if (s != 0) throw Error(ErrorCode::NonZeroRowSum, "row " + std::to_string(i) + " sums to " + std::to_string(s));
  }
  RationalMatrix m;
  for (const auto& row : rows) m.push_back(to_rational(row));
  if (rank(m) < rows.size())
    throw Error(ErrorCode::DependentRows, "relation rows are linearly dependent over Q");
  if (rows.size() >= coordinates)
    throw Error(ErrorCode::DependentRows, "too many relations for the ambient space");
  ToricProblem p;
  p.matrix_ = rows;
  p.coordinates_ = coordinates;
  return p;
}

ToricProblem projective_torus(std::size_t n) { return validate_toric_matrix({}, n + 1); }

void check_hypersurface_vector(const IntVector& a) {
  if (a.size() < 2) throw Error(ErrorCode::PreconditionViolation, "hypersurface vector needs n >= 2 entries");
  for (auto x : a) {
    if (x < 1) throw Error(ErrorCode::PreconditionViolation, "hypersurface exponents must be positive");
  }
}

ToricProblem hypersurface_problem(const IntVector& a) {
  check_hypersurface_vector(a);
  IntVector row = a;
  row.push_back(-std::accumulate(a.begin(), a.end(), std::int64_t{0}));
  return validate_toric_matrix({row}, a.size() + 1);
}

SignCount sign_count(const ToricProblem& problem) {
  const std::size_t k = problem.coordinates();
  const auto& rows = problem.matrix();
  std::vector<std::uint64_t> parity;
  for (const auto& row : rows) {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < k; ++j)
      if (row[j] % 2 != 0) mask |= std::uint64_t{1} << j;
    parity.push_back(mask);
  }
  if (k <= 24) {
    std::uint64_t passing = 0;
    for (std::uint64_t eps = 0; eps < (std::uint64_t{1} << k); ++eps) {
      bool ok = true;
      for (auto mask : parity) {
        if (__builtin_popcountll(eps & mask) % 2 != 0) {
          ok = false;
          break;
        }
      }
      if (ok) ++passing;
    }
    return SignCount{passing / 2};
  }
  // Sign vectors form the kernel of the parity matrix over GF(2).
  std::vector<std::vector<bool>> m;
  for (const auto& row : rows) {
    std::vector<bool> r(k);
    for (std::size_t j = 0; j < k; ++j) r[j] = row[j] % 2 != 0;
    m.push_back(r);
  }
  std::size_t rnk = 0;
  for (std::size_t c = 0; c < k && rnk < m.size(); ++c) {
    std::size_t p = rnk;
    while (p < m.size() && !m[p][c]) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rnk]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i != rnk && m[i][c]) {
        for (std::size_t j = 0; j < k; ++j) m[i][j] = m[i][j] != m[rnk][j];
      }
    }
    ++rnk;
  }
  std::size_t free = k - rnk;
  if (free - 1 >= 64) throw Error(ErrorCode::DimensionOverflow, "sign count exceeds 64 bits");
  return SignCount{std::uint64_t{1} << (free - 1)};
}

GeneralizedPolynomial::GeneralizedPolynomial(std::size_t variables, std::vector<Monomial> monomials)
    : variables_(variables) {
  if (monomials.empty()) throw Error(ErrorCode::InvalidInput, "polynomial has no monomials");
  std::map<RationalVector, Rational, std::greater<>> merged;
  for (auto& m : monomials) {
    if (m.exponents.size() != variables)
      throw Error(ErrorCode::InvalidInput, "monomial arity does not match the variable count");
    if (m.coefficient <= 0) throw Error(ErrorCode::InvalidInput, "coefficients must be positive");
    for (const auto& e : m.exponents)
      if (e < 0) throw Error(ErrorCode::InvalidInput, "exponents must be nonnegative");
    merged[m.exponents] += m.coefficient;
  }
  for (auto& [e, c] : merged) monomials_.push_back(Monomial{e, c});
}

Rational GeneralizedPolynomial::degree() const {
  Rational d = 0;
  for (const auto& m : monomials_) d = std::max(d, sum(m.exponents));
  return d;
}

bool GeneralizedPolynomial::is_homogeneous() const {
  Rational d = degree();
  return std::all_of(monomials_.begin(), monomials_.end(), [&](const Monomial& m) { return sum(m.exponents) == d; });
}

GeneralizedPolynomial GeneralizedPolynomial::top_degree_part() const {
  Rational d = degree();
  std::vector<Monomial> top;
  for (const auto& m : monomials_)
    if (sum(m.exponents) == d) top.push_back(m);
  return GeneralizedPolynomial(variables_, top);
}

bool GeneralizedPolynomial::depends_on_all_variables() const {
  for (std::size_t i = 0; i < variables_; ++i) {
    bool found = std::any_of(monomials_.begin(), monomials_.end(),
                             [&](const Monomial& m) { return m.exponents[i] != 0; });
    if (!found) return false;
  }
  return true;
}

namespace {

template <class Real>
Real evaluate_impl(const std::vector<Monomial>& monomials, const std::vector<Real>& x) {
  Real total = 0;
  for (const auto& m : monomials) {
    Real term = m.coefficient.convert_to<Real>();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& e = m.exponents[i];
      if (e == 0) continue;
      if (e == 1)
        term *= x[i];
      else if (is_integral(e) && e <= 64) {
        int k = numerator(e).convert_to<int>();
        Real b = x[i], r = 1;
        while (k) {
          if (k & 1) r *= b;
          b *= b;
          k >>= 1;
        }
        term *= r;
      } else {
        term *= std::pow(x[i], e.convert_to<Real>());
      }
    }
    total += term;
  }
  return total;
}

}  // namespace

double GeneralizedPolynomial::evaluate(const std::vector<double>& x) const { return evaluate_impl(monomials_, x); }

long double GeneralizedPolynomial::evaluate(const std::vector<long double>& x) const {
  return evaluate_impl(monomials_, x);
}

double GeneralizedPolynomial::evaluate_max_monomial(const std::vector<double>& x) const {
  double best = 0;
  for (const auto& m : monomials_) {
    double term = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (m.exponents[i] != 0) term *= std::pow(x[i], to_double(m.exponents[i]));
    best = std::max(best, term);
  }
  return best;
}

GeneralizedPolynomial GeneralizedPolynomial::permuted(const std::vector<std::size_t>& order) const {
  // New variable k is old variable order[k].
  std::vector<Monomial> out;
  for (const auto& m : monomials_) {
    Monomial p{RationalVector(variables_), m.coefficient};
    for (std::size_t k = 0; k < variables_; ++k) p.exponents[k] = m.exponents[order[k]];
    out.push_back(std::move(p));
  }
  return GeneralizedPolynomial(variables_, out);
}

GeneralizedPolynomial GeneralizedPolynomial::with_coefficients_scaled(const Rational& factor) const {
  std::vector<Monomial> out = monomials_;
  for (auto& m : out) m.coefficient *= factor;
  return GeneralizedPolynomial(variables_, out);
}

std::string GeneralizedPolynomial::to_string() const {
  std::string s;
  for (const auto& m : monomials_) {
    if (!s.empty()) s += "+";
    std::string term;
    for (std::size_t i = 0; i < variables_; ++i) {
      if (m.exponents[i] == 0) continue;
      if (!term.empty()) term += "*";
      term += "X" + std::to_string(i + 1);
      if (m.exponents[i] != 1) term += "^" + manin::to_string(m.exponents[i]);
    }
    if (term.empty())
      term = manin::to_string(m.coefficient);
    else if (m.coefficient != 1)
      term = manin::to_string(m.coefficient) + "*" + term;
    s += term;
  }
  return s;
}

bool operator==(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b) {
  if (a.variables_ != b.variables_ || a.monomials_.size() != b.monomials_.size()) return false;
  for (std::size_t k = 0; k < a.monomials_.size(); ++k) {
    if (a.monomials_[k].exponents != b.monomials_[k].exponents) return false;
    if (a.monomials_[k].coefficient != b.monomials_[k].coefficient) return false;
  }
  return true;
}

GeneralizedPolynomial restrict_to_hypersurface(const GeneralizedPolynomial& p, const IntVector& a) {
  check_hypersurface_vector(a);
  const std::size_t n = a.size();
  if (p.variables() != n + 1)
    throw Error(ErrorCode::PreconditionViolation, "polynomial must have n+1 variables for the hypersurface");
  const Rational q = std::accumulate(a.begin(), a.end(), std::int64_t{0});
  std::vector<Monomial> out;
  for (const auto& m : p.monomials()) {
    Monomial r{RationalVector(n), m.coefficient};
    for (std::size_t j = 0; j < n; ++j) r.exponents[j] = m.exponents[j] + m.exponents[n] * Rational(a[j]) / q;
    out.push_back(std::move(r));
  }
  return GeneralizedPolynomial(n, out);
}

namespace {

// Lower bound of the top-degree part on the box [lo, hi] (monomials are
// nondecreasing in every variable).
double box_lower_bound(const std::vector<Monomial>& monomials, const std::vector<double>& lo) {
  double total = 0;
  for (const auto& m : monomials) {
    double term = to_double(m.coefficient);
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (m.exponents[i] != 0) term *= std::pow(lo[i], to_double(m.exponents[i]));
    total += term;
  }
  return total;
}

// Visits every box of width 1/N (integer corner k) that meets the simplex.
template <class F>
void for_each_cell(std::size_t dims, int N, F&& f) {
  std::vector<int> k(dims, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == dims) {
      // lower corner sum <= N <= upper corner sum
      if (used <= N && used + static_cast<int>(dims) >= N) f(k);
      return;
    }
    for (int v = 0; v < N && used + v <= N; ++v) {
      k[i] = v;
      rec(i + 1, used + v);
    }
  };
  rec(0, 0);
}

}  // namespace

double ellipticity_witness(const GeneralizedPolynomial& p) {
  GeneralizedPolynomial top = p.top_degree_part();
  const std::size_t m = top.variables();
  const Rational d = top.degree();
  // The minimum over the simplex is positive iff every vertex e_i is positive,
  // i.e. every variable carries a pure power.
  for (std::size_t i = 0; i < m; ++i) {
    bool pure = false;
    for (const auto& mono : top.monomials()) {
      bool only_i = true;
      for (std::size_t j = 0; j < m; ++j)
        if (j != i && mono.exponents[j] != 0) only_i = false;
      if (only_i && mono.exponents[i] != 0) pure = true;
    }
    if (!pure) throw Error(ErrorCode::NotElliptic, "P_d vanishes at the vertex e_" + std::to_string(i + 1));
  }
  if (d == 1) {
    bool linear = std::all_of(top.monomials().begin(), top.monomials().end(), [](const Monomial& mono) {
      return std::all_of(mono.exponents.begin(), mono.exponents.end(),
                         [](const Rational& e) { return e == 0 || e == 1; });
    });
    if (linear) {
      Rational best = top.monomials().front().coefficient;
      for (const auto& mono : top.monomials()) best = std::min(best, mono.coefficient);
      return to_double(best);
    }
  }
  int N = 64;
  while (N > 8 && std::pow(static_cast<double>(N), static_cast<double>(m) - 1) * static_cast<double>(m) > 2e6) N /= 2;
  while (N <= static_cast<int>(m)) N *= 2;
  const auto& monos = top.monomials();
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<int>>> cells;
  for_each_cell(m, N, [&](const std::vector<int>& k) {
    std::vector<double> lo(m);
    for (std::size_t i = 0; i < m; ++i) lo[i] = static_cast<double>(k[i]) / N;
    cells.emplace_back(box_lower_bound(monos, lo), k);
  });
  // Upper estimate of the minimum from grid points on the simplex itself.
  for_each_cell(m, N, [&](const std::vector<int>& k) {
    int s = std::accumulate(k.begin(), k.end(), 0);
    if (s != N) return;
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = static_cast<double>(k[i]) / N;
    best_value = std::min(best_value, top.evaluate(x));
  });
  double kappa = std::numeric_limits<double>::infinity();
  const std::size_t children = std::size_t{1} << m;
  for (const auto& [lb, k] : cells) {
    if (lb >= best_value || m > 12) {
      kappa = std::min(kappa, lb);
      continue;
    }
    // One bisection stage: split the cell into 2^m halves.
    for (std::size_t mask = 0; mask < children; ++mask) {
      std::vector<double> lo(m);
      double lo_sum = 0, hi_sum = 0;
      for (std::size_t i = 0; i < m; ++i) {
        lo[i] = (2.0 * k[i] + ((mask >> i) & 1)) / (2.0 * N);
        lo_sum += lo[i];
        hi_sum += lo[i] + 0.5 / N;
      }
      if (lo_sum > 1.0 + 1e-15 || hi_sum < 1.0 - 1e-15) continue;
      kappa = std::min(kappa, box_lower_bound(monos, lo));
    }
  }
  // Guard against pow rounding.
  return kappa * (1.0 - 1e-12);
}

UniformMultiplicativeSpec::UniformMultiplicativeSpec(std::size_t arity, Evaluator g, GrowthBound growth,
                                                     std::string description, bool support_on_coordinate_hyperplanes)
    : arity_(arity),
      g_(std::move(g)),
      growth_(growth),
      description_(std::move(description)),
      hyperplane_support_(support_on_coordinate_hyperplanes) {
  if (arity_ < 1) throw Error(ErrorCode::PreconditionViolation, "weight arity must be positive");
}

std::uint64_t UniformMultiplicativeSpec::operator()(const IntVector& nu) const {
  if (nu.size() != arity_)
    throw Error(ErrorCode::PreconditionViolation,
                "weight of arity " + std::to_string(arity_) + " applied to a vector of length " +
                    std::to_string(nu.size()));
  for (auto v : nu)
    if (v < 0) throw Error(ErrorCode::PreconditionViolation, "weights are defined on nonnegative vectors");
  return g_(nu);
}

namespace {

bool has_zero(const IntVector& nu) {
  return std::any_of(nu.begin(), nu.end(), [](std::int64_t v) { return v == 0; });
}

}  // namespace

UniformMultiplicativeSpec toric_weight(const ToricProblem& problem) {
  auto rows = problem.matrix();
  auto g = [rows](const IntVector& nu) -> std::uint64_t {
    if (!has_zero(nu)) return 0;
    for (const auto& row : rows) {
      __int128 s = 0;
      for (std::size_t j = 0; j < nu.size(); ++j) s += static_cast<__int128>(row[j]) * nu[j];
      if (s != 0) return 0;
    }
    return 1;
  };
  std::string desc = "toric relations, " + std::to_string(rows.size()) + " rows";
  return UniformMultiplicativeSpec(problem.coordinates(), g, GrowthBound{1.0, 0}, desc, true);
}

UniformMultiplicativeSpec hypersurface_weight(const IntVector& a) {
  check_hypersurface_vector(a);
  const std::int64_t q = std::accumulate(a.begin(), a.end(), std::int64_t{0});
  auto g = [a, q](const IntVector& nu) -> std::uint64_t {
    if (!has_zero(nu)) return 0;
    __int128 s = 0;
    for (std::size_t j = 0; j < nu.size(); ++j) s += static_cast<__int128>(a[j]) * nu[j];
    return s % q == 0 ? 1 : 0;
  };
  return UniformMultiplicativeSpec(a.size(), g, GrowthBound{1.0, 0}, "hypersurface q | <a,nu>", true);
}

UniformMultiplicativeSpec constant_weight(std::size_t arity) {
  return UniformMultiplicativeSpec(arity, [](const IntVector&) -> std::uint64_t { return 1; }, GrowthBound{1.0, 0},
                                   "constant 1");
}

}  // namespace manin
