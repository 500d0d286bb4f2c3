#pragma once

#include "manin/manin.hpp"

#include <json.hpp>

#include <string>

namespace manin {

// Reports carry no timing so that identical inputs give identical bytes.
nlohmann::json to_json(const RationalVector& v);
nlohmann::json to_json(const ConstantValue& v);
nlohmann::json to_json(const LatticePointSet& set);
nlohmann::json to_json(const EulerReport& e);
nlohmann::json to_json(const Analysis& a);
nlohmann::json to_json(const ManinReport& r);
nlohmann::json to_json(const CountResult& c);
nlohmann::json to_json(const ZetaProbe& z);
nlohmann::json to_json(const AsymptoticTable& t);

// Adds "schema": 1.
nlohmann::json versioned(nlohmann::json body);
std::string to_csv(const AsymptoticTable& t);

}  // namespace manin
