#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace manin {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;
using IntVector = std::vector<std::int64_t>;

// "p/q" or "p"; accepts an optional sign and surrounding whitespace.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);
double to_double(const Rational& value);

RationalVector to_rational(const IntVector& v);
Rational dot(const RationalVector& a, const RationalVector& b);
Rational sum(const RationalVector& v);
bool is_integral(const Rational& value);
Integer common_denominator(const RationalVector& v);

// Row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(RationalMatrix& rows);
std::size_t rank(RationalMatrix rows);
// Basis of {x : rows * x = 0}.
RationalMatrix null_space(RationalMatrix rows, std::size_t columns);
// Solves rows * x = rhs when the system is consistent (any solution).
std::optional<RationalVector> solve(RationalMatrix rows, RationalVector rhs);
Rational determinant(RationalMatrix m);

// Scales a rational vector to the primitive integer vector with the same direction.
std::vector<Integer> primitive_integer(const RationalVector& v);

}  // namespace manin
