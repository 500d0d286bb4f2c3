#include "manin/problem_io.hpp"

#include "manin/error.hpp"

#include <fstream>
#include <sstream>

namespace manin {

ToricProblem ProblemFile::problem() const {
  if (toric) return *toric;
  if (hypersurface) return hypersurface_problem(*hypersurface);
  throw Error(ErrorCode::InvalidInput, "problem has neither a matrix nor a hypersurface");
}

nlohmann::json polynomial_to_json(const GeneralizedPolynomial& p) {
  nlohmann::json monos = nlohmann::json::array();
  for (const auto& m : p.monomials()) {
    nlohmann::json e = nlohmann::json::array();
    for (const auto& x : m.exponents) e.push_back(to_string(x));
    monos.push_back({{"exponents", e}, {"coefficient", to_string(m.coefficient)}});
  }
  return {{"monomials", monos}};
}

namespace {

Rational rational_field(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw Error(ErrorCode::InvalidInput, "rationals must be \"p/q\" strings or integers");
}

}  // namespace

GeneralizedPolynomial polynomial_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_polynomial(j.get<std::string>());
  if (!j.is_object() || !j.contains("monomials") || !j["monomials"].is_array())
    throw Error(ErrorCode::InvalidInput, "polynomial needs a \"monomials\" array");
  std::vector<Monomial> monos;
  std::size_t vars = 0;
  for (const auto& m : j["monomials"]) {
    if (!m.contains("exponents") || !m["exponents"].is_array())
      throw Error(ErrorCode::InvalidInput, "monomial needs an \"exponents\" array");
    Monomial mono;
    for (const auto& e : m["exponents"]) mono.exponents.push_back(rational_field(e));
    mono.coefficient = m.contains("coefficient") ? rational_field(m["coefficient"]) : Rational(1);
    if (monos.empty()) vars = mono.exponents.size();
    monos.push_back(std::move(mono));
  }
  return GeneralizedPolynomial(vars, monos);
}

ProblemFile problem_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "problem file must be a JSON object");
  ProblemFile out;
  if (j.contains("polynomial")) out.polynomial = polynomial_from_json(j["polynomial"]);
  if (j.contains("hypersurface")) {
    out.hypersurface = j["hypersurface"].get<IntVector>();
    check_hypersurface_vector(*out.hypersurface);
  }
  if (j.contains("matrix")) {
    auto rows = j["matrix"].get<std::vector<IntVector>>();
    std::size_t coords = 0;
    if (!rows.empty())
      coords = rows.front().size();
    else if (j.contains("coordinates"))
      coords = j["coordinates"].get<std::size_t>();
    else if (out.polynomial)
      coords = out.polynomial->variables();
    else
      throw Error(ErrorCode::InvalidInput, "empty matrix needs \"coordinates\" or a polynomial");
    out.toric = validate_toric_matrix(rows, coords);
  }
  if (!out.toric && !out.hypersurface) throw Error(ErrorCode::InvalidInput, "need \"matrix\" or \"hypersurface\"");
  return out;
}

nlohmann::json problem_to_json(const ProblemFile& problem) {
  nlohmann::json j = nlohmann::json::object();
  if (problem.toric) {
    j["matrix"] = problem.toric->matrix();
    if (problem.toric->relations() == 0 && !problem.polynomial) j["coordinates"] = problem.toric->coordinates();
  }
  if (problem.hypersurface) j["hypersurface"] = *problem.hypersurface;
  if (problem.polynomial) j["polynomial"] = polynomial_to_json(*problem.polynomial);
  return j;
}

ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return problem_from_json(j);
}

}  // namespace manin
