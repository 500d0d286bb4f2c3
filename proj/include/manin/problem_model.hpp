#pragma once

#include "manin/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace manin {

class ToricProblem {
 public:
  ToricProblem() = default;

  // Number of homogeneous coordinates n+1.
  std::size_t coordinates() const { return coordinates_; }
  std::size_t n() const { return coordinates_ - 1; }
  std::size_t relations() const { return matrix_.size(); }
  std::size_t dimension() const { return n() - relations(); }
  const std::vector<IntVector>& matrix() const { return matrix_; }
  std::int64_t max_entry() const;

  friend ToricProblem validate_toric_matrix(const std::vector<IntVector>& rows, std::size_t coordinates);

 private:
  std::vector<IntVector> matrix_;
  std::size_t coordinates_ = 0;
};

struct Monomial {
  RationalVector exponents;
  Rational coefficient;
};

class GeneralizedPolynomial {
 public:
  GeneralizedPolynomial() = default;
  // Merges equal exponent vectors and sorts the support; rejects non-positive
  // coefficients and negative exponents.
  GeneralizedPolynomial(std::size_t variables, std::vector<Monomial> monomials);

  std::size_t variables() const { return variables_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  std::size_t size() const { return monomials_.size(); }

  // Largest total degree |gamma| over the support.
  Rational degree() const;
  bool is_homogeneous() const;
  GeneralizedPolynomial top_degree_part() const;
  bool depends_on_all_variables() const;

  double evaluate(const std::vector<double>& x) const;
  long double evaluate(const std::vector<long double>& x) const;
  // Maximum over the monomials of the bare products x^gamma.
  double evaluate_max_monomial(const std::vector<double>& x) const;

  GeneralizedPolynomial permuted(const std::vector<std::size_t>& order) const;
  GeneralizedPolynomial with_coefficients_scaled(const Rational& factor) const;

  std::string to_string() const;

  friend bool operator==(const GeneralizedPolynomial& a, const GeneralizedPolynomial& b);

 private:
  std::size_t variables_ = 0;
  std::vector<Monomial> monomials_;
};

// Parses sums of monomials such as "3/2*X1^2*X2 + X3^1/2".
GeneralizedPolynomial parse_polynomial(std::string_view text, std::optional<std::size_t> variables = std::nullopt);

struct GrowthBound {
  double constant = 1.0;
  int exponent = 0;
};

class UniformMultiplicativeSpec {
 public:
  using Evaluator = std::function<std::uint64_t(const IntVector&)>;

  UniformMultiplicativeSpec(std::size_t arity, Evaluator g, GrowthBound growth, std::string description,
                            bool support_on_coordinate_hyperplanes = false);

  std::size_t arity() const { return arity_; }
  const GrowthBound& growth() const { return growth_; }
  const std::string& description() const { return description_; }
  // True when g(nu) != 0 forces some nu_i == 0; enumerators may use it to skip
  // the interior of the orthant.
  bool support_on_coordinate_hyperplanes() const { return hyperplane_support_; }

  std::uint64_t operator()(const IntVector& nu) const;

 private:
  std::size_t arity_;
  Evaluator g_;
  GrowthBound growth_;
  std::string description_;
  bool hyperplane_support_;
};

struct SignCount {
  std::uint64_t value = 1;
};

ToricProblem validate_toric_matrix(const std::vector<IntVector>& rows, std::size_t coordinates);
ToricProblem projective_torus(std::size_t n);
// The relation (a_1, ..., a_n, -q) with q = |a|.
ToricProblem hypersurface_problem(const IntVector& a);
void check_hypersurface_vector(const IntVector& a);

SignCount sign_count(const ToricProblem& problem);
GeneralizedPolynomial restrict_to_hypersurface(const GeneralizedPolynomial& p, const IntVector& a);
double ellipticity_witness(const GeneralizedPolynomial& p);

UniformMultiplicativeSpec toric_weight(const ToricProblem& problem);
UniformMultiplicativeSpec hypersurface_weight(const IntVector& a);
UniformMultiplicativeSpec constant_weight(std::size_t arity);

}  // namespace manin
