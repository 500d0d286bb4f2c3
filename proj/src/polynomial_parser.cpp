#include "manin/error.hpp"
#include "manin/problem_model.hpp"

#include <cctype>
#include <map>

namespace manin {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<std::pair<std::map<std::size_t, Rational>, Rational>> parse() {
    std::vector<std::pair<std::map<std::size_t, Rational>, Rational>> terms;
    skip_space();
    terms.push_back(term());
    skip_space();
    while (pos_ < text_.size()) {
      expect('+');
      terms.push_back(term());
      skip_space();
    }
    return terms;
  }

 private:
  std::pair<std::map<std::size_t, Rational>, Rational> term() {
    std::map<std::size_t, Rational> powers;
    Rational coeff = 1;
    factor(powers, coeff);
    skip_space();
    while (peek() == '*') {
      ++pos_;
      factor(powers, coeff);
      skip_space();
    }
    return {powers, coeff};
  }

  void factor(std::map<std::size_t, Rational>& powers, Rational& coeff) {
    skip_space();
    char c = peek();
    if (c == 'X' || c == 'x') {
      ++pos_;
      std::size_t start = pos_;
      std::string digits = number("variable index");
      std::size_t index = std::stoul(digits);
      if (index == 0) fail(start, "variable indices start at 1");
      Rational e = 1;
      skip_space();
      if (peek() == '^') {
        ++pos_;
        skip_space();
        e = rational("exponent");
      }
      powers[index - 1] += e;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      Rational v = rational("coefficient");
      if (v == 0) fail(start, "coefficients must be positive");
      coeff *= v;
    } else {
      fail(pos_, "expected a variable Xk or a positive number");
    }
  }

  Rational rational(const char* what) {
    Integer num(number(what));
    if (peek() == '/') {
      ++pos_;
      std::size_t start = pos_;
      Integer den(number(what));
      if (den == 0) fail(start, "zero denominator");
      return Rational(num, den);
    }
    return Rational(num);
  }

  std::string number(const char* what) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail(pos_, std::string("expected digits for ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (peek() != c) fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(std::size_t at, const std::string& message) const {
    std::string found = at < text_.size() ? std::string("'") + text_[at] + "'" : std::string("end of input");
    throw Error(ErrorCode::ParseError,
                "position " + std::to_string(at + 1) + ": " + message + " (found " + found + ") in \"" +
                    std::string(text_) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

GeneralizedPolynomial parse_polynomial(std::string_view text, std::optional<std::size_t> variables) {
  auto terms = Parser(text).parse();
  std::size_t vars = 0;
  for (const auto& [powers, coeff] : terms)
    if (!powers.empty()) vars = std::max(vars, powers.rbegin()->first + 1);
  if (variables) {
    if (*variables < vars)
      throw Error(ErrorCode::ParseError, "polynomial uses X" + std::to_string(vars) + " but only " +
                                             std::to_string(*variables) + " variables are available");
    vars = *variables;
  }
  if (vars == 0) throw Error(ErrorCode::ParseError, "polynomial has no variables");
  std::vector<Monomial> monos;
  for (const auto& [powers, coeff] : terms) {
    Monomial m{RationalVector(vars, Rational(0)), coeff};
    for (const auto& [i, e] : powers) m.exponents[i] = e;
    monos.push_back(std::move(m));
  }
  return GeneralizedPolynomial(vars, monos);
}

}  // namespace manin
