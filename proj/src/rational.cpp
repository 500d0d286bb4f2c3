#include "manin/rational.hpp"

#include "manin/error.hpp"

#include <cctype>

namespace manin {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonZeroRowSum: return "NonZeroRowSum";
    case ErrorCode::DependentRows: return "DependentRows";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::CapTooSmall: return "CapTooSmall";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::MissingVariable: return "MissingVariable";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::DimensionTooHigh: return "DimensionTooHigh";
    case ErrorCode::NonPositivePolar: return "NonPositivePolar";
    case ErrorCode::NonCompactFace: return "NonCompactFace";
    case ErrorCode::BoxTooLarge: return "BoxTooLarge";
  }
  return "Unknown";
}

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw Error(ErrorCode::ParseError, "bad rational '" + std::string(whole) + "'");
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw Error(ErrorCode::ParseError, "bad rational '" + std::string(whole) + "'");
  }
  return Integer(std::string(digits));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    value = Rational(parse_integer(s, text));
  } else {
    Integer num = parse_integer(s.substr(0, slash), text);
    Integer den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

RationalVector to_rational(const IntVector& v) {
  RationalVector out;
  out.reserve(v.size());
  for (auto x : v) out.emplace_back(x);
  return out;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational sum(const RationalVector& v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

bool is_integral(const Rational& value) { return denominator(value) == 1; }

Integer common_denominator(const RationalVector& v) {
  Integer d = 1;
  for (const auto& x : v) d = boost::multiprecision::lcm(d, Integer(denominator(x)));
  return d;
}

std::vector<std::size_t> row_reduce(RationalMatrix& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rational inv = 1 / rows[r][c];
    for (std::size_t k = c; k < cols; ++k) rows[r][k] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= f * rows[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

std::size_t rank(RationalMatrix rows) { return row_reduce(rows).size(); }

RationalMatrix null_space(RationalMatrix rows, std::size_t columns) {
  auto pivots = row_reduce(rows);
  std::vector<bool> is_pivot(columns, false);
  for (auto p : pivots) is_pivot[p] = true;
  RationalMatrix basis;
  for (std::size_t free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(columns, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> solve(RationalMatrix rows, RationalVector rhs) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].push_back(rhs[i]);
  auto pivots = row_reduce(rows);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  RationalVector x(cols, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = rows[r][cols];
  return x;
}

Rational determinant(RationalMatrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
    }
  }
  return det;
}

std::vector<Integer> primitive_integer(const RationalVector& v) {
  Integer d = common_denominator(v);
  std::vector<Integer> out;
  out.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Rational scaled = x * d;
    out.push_back(numerator(scaled));
    g = boost::multiprecision::gcd(g, abs(out.back()));
  }
  if (g > 1) {
    for (auto& x : out) x /= g;
  }
  return out;
}

}  // namespace manin
