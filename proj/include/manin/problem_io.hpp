#pragma once

#include "manin/problem_model.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace manin {

struct ProblemFile {
  std::optional<ToricProblem> toric;
  std::optional<IntVector> hypersurface;
  std::optional<GeneralizedPolynomial> polynomial;

  // The toric problem, building the hypersurface relation when needed.
  ToricProblem problem() const;
};

ProblemFile problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const ProblemFile& problem);
ProblemFile read_problem_file(const std::string& path);

nlohmann::json polynomial_to_json(const GeneralizedPolynomial& p);
GeneralizedPolynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace manin
