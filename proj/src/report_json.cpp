#include "manin/report_json.hpp"

#include "manin/problem_io.hpp"

#include <iomanip>
#include <sstream>

namespace manin {

using nlohmann::json;

json to_json(const RationalVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

json to_json(const ConstantValue& v) { return {{"value", v.value}, {"abs_error", v.abs_error}, {"method", v.method}}; }

json to_json(const LatticePointSet& set) {
  json pts = json::array();
  for (const auto& p : set.points) pts.push_back(p);
  json members = json::array();
  for (bool b : set.compact_face_members) members.push_back(b);
  return {{"arity", set.arity},
          {"cap", set.cap},
          {"stabilized", set.stabilized},
          {"points", pts},
          {"compact_face_members", members}};
}

json to_json(const EulerReport& e) {
  return {{"value", e.value},
          {"value_text", e.value_text},
          {"prime_cutoff", e.prime_cutoff},
          {"K", e.K},
          {"precision_bits", e.precision_bits},
          {"epsilon_gap", to_string(e.epsilon_gap)},
          {"tail_log_correction", e.tail_log_correction},
          {"tail_remainder", e.tail_remainder},
          {"truncation_error", e.truncation_error},
          {"error", e.error},
          {"primes_used", e.primes_used},
          {"denominator", e.denominator},
          {"series_coefficients", e.series_coefficients}};
}

json to_json(const Analysis& a) {
  json problem;
  if (a.hypersurface) {
    problem["hypersurface"] = a.a;
  } else {
    ProblemFile pf;
    pf.toric = a.problem;
    problem = problem_to_json(pf);
  }
  json facets = json::array();
  for (auto k : a.face.active_facets) {
    const auto& f = a.polyhedron.facets()[k];
    facets.push_back({{"normal", to_json(f.normal)}, {"offset", to_string(f.offset)}});
  }
  json face_points = json::array();
  for (const auto& g : a.face.face.generators) face_points.push_back(to_json(g));
  return {{"problem", problem},
          {"generators", to_json(a.generators)},
          {"vertices", a.polyhedron.vertices().size()},
          {"facets", a.polyhedron.facets().size()},
          {"t0", to_string(a.face.t0)},
          {"iota", to_string(a.face.iota)},
          {"iota_lp", to_string(a.lp_iota)},
          {"rho", a.face.rho},
          {"c", to_json(a.face.polar)},
          {"sign_factor", a.sign_factor},
          {"face_generators", face_points},
          {"face_dimension", a.face.face.dimension},
          {"expected_dimension", a.expected_dimension},
          {"active_facets", facets},
          {"compact", a.face.compact},
          {"dimension_ok", a.dimension_ok},
          {"stabilized", a.stabilized},
          {"flags", a.flags()}};
}

namespace {

json sargos_json(const SargosResult& s) {
  return {{"constant", to_json(s.constant)},
          {"variables", s.data.variables},
          {"sigma0", to_string(s.data.sigma0)},
          {"rho0", s.data.rho0},
          {"lambda_volume", to_string(s.data.lambda_volume)}};
}

}  // namespace

json to_json(const ManinReport& r) {
  json out = to_json(r.analysis);
  out["polynomial"] = r.polynomial.to_string();
  out["volume_polynomial"] = r.volume_input.to_string();
  out["degree"] = to_string(r.degree);
  out["K"] = r.K;
  out["A0"] = sargos_json(r.volume);
  if (r.euler) {
    out["euler"] = to_json(*r.euler);
    out["C"] = r.C;
    out["C_error"] = r.C_error;
    out["C0"] = r.C0;
  }
  if (r.sup_norm_volume) out["sup_norm_A0"] = sargos_json(*r.sup_norm_volume);
  if (r.sup_norm_C) {
    out["sup_norm_C"] = *r.sup_norm_C;
    out["sup_norm_C_error"] = *r.sup_norm_C_error;
  }
  return out;
}

json to_json(const CountResult& c) {
  return {{"t", c.t},
          {"N", c.N},
          {"primitive", c.primitive},
          {"sign_factor", c.sign_factor},
          {"box", c.box},
          {"leaves", c.leaves}};
}

json to_json(const ZetaProbe& z) {
  json samples = json::array();
  for (const auto& s : z.samples)
    samples.push_back({{"s", s.s},
                       {"partial_sum", s.partial_sum},
                       {"cutoff", s.cutoff},
                       {"tail_estimate", s.tail_estimate},
                       {"value", s.value},
                       {"scaled", s.scaled}});
  return {{"iota", to_string(z.iota)},
          {"rho", z.rho},
          {"points", z.points},
          {"leaves", z.leaves},
          {"box", z.box},
          {"samples", samples}};
}

json to_json(const AsymptoticTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"t", r.t}, {"N", r.N}, {"predicted", r.predicted}, {"ratio", r.ratio}});
  return {{"rows", rows}, {"monotone_approach", t.monotone_approach}, {"last_deviation", t.last_deviation}};
}

json versioned(json body) {
  json out = {{"schema", 1}};
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

std::string to_csv(const AsymptoticTable& t) {
  std::ostringstream out;
  out << "t,N,predicted,ratio\n" << std::setprecision(17);
  for (const auto& r : t.rows) out << r.t << ',' << r.N << ',' << r.predicted << ',' << r.ratio << '\n';
  return out.str();
}

}  // namespace manin
