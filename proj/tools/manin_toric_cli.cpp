#include "manin/error.hpp"
#include "manin/manin.hpp"
#include "manin/parallel.hpp"
#include "manin/problem_io.hpp"
#include "manin/report_json.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace {

using manin::Error;
using manin::ErrorCode;
using nlohmann::json;
using IntVector = manin::IntVector;

struct RunConfig {
  std::string problem_file;
  std::string hypersurface;
  std::string matrix;
  int projective_torus = 0;
  std::string polynomial;
  bool toric_route = false;
  bool sup_norm = false;
  std::vector<double> t_values;
  std::vector<double> s_values{1.5, 1.3, 1.2, 1.1};
  double cutoff = 1000;
  double quad_tol = 1e-9;
  double euler_tol = 1e-15;
  std::uint64_t prime_cutoff = 100000;
  std::int64_t cap = 0;
  double budget = 1e10;
  unsigned precision = 160;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool no_euler = false;
  bool allow_flags = false;
  double ratio_tol = 0.05;
  double certified_tol = 1e-6;
  std::string out;
  std::string csv;
};

IntVector parse_int_list(const std::string& text) {
  IntVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "not an integer list: \"" + text + "\"");
    }
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty integer list");
  return out;
}

struct Problem {
  manin::ProblemFile file;
  bool hypersurface_route = false;
  manin::GeneralizedPolynomial polynomial;
};

Problem load_problem(const RunConfig& cfg, bool need_polynomial) {
  Problem p;
  int sources = !cfg.problem_file.empty() + !cfg.hypersurface.empty() + !cfg.matrix.empty() + (cfg.projective_torus > 0);
  if (sources != 1)
    throw Error(ErrorCode::InvalidInput,
                "give exactly one of --problem, --hypersurface, --matrix, --projective-torus");
  if (!cfg.problem_file.empty()) {
    p.file = manin::read_problem_file(cfg.problem_file);
  } else if (!cfg.hypersurface.empty()) {
    p.file.hypersurface = parse_int_list(cfg.hypersurface);
    manin::check_hypersurface_vector(*p.file.hypersurface);
  } else if (!cfg.matrix.empty()) {
    std::vector<IntVector> rows;
    std::stringstream ss(cfg.matrix);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_int_list(row));
    p.file.toric = manin::validate_toric_matrix(rows, rows.front().size());
  } else {
    p.file.toric = manin::projective_torus(static_cast<std::size_t>(cfg.projective_torus));
  }
  p.hypersurface_route = p.file.hypersurface.has_value() && !cfg.toric_route;
  const std::size_t coords = p.file.problem().coordinates();
  if (!cfg.polynomial.empty()) {
    p.polynomial = manin::parse_polynomial(cfg.polynomial, coords);
  } else if (p.file.polynomial) {
    p.polynomial = *p.file.polynomial;
  } else if (need_polynomial) {
    // X1 + ... + X_{n+1}
    std::vector<manin::Monomial> monos;
    for (std::size_t i = 0; i < coords; ++i) {
      manin::Monomial m{manin::RationalVector(coords, manin::Rational(0)), manin::Rational(1)};
      m.exponents[i] = 1;
      monos.push_back(std::move(m));
    }
    p.polynomial = manin::GeneralizedPolynomial(coords, monos);
  }
  return p;
}

manin::ManinConfig manin_config(const RunConfig& cfg) {
  manin::ManinConfig m;
  m.cap = cfg.cap;
  m.with_euler = !cfg.no_euler;
  m.quad.abs_tol = cfg.quad_tol;
  m.quad.seed = cfg.seed;
  m.euler.tolerance = cfg.euler_tol;
  m.euler.prime_cutoff = cfg.prime_cutoff;
  m.euler.precision_bits = cfg.precision;
  return m;
}

manin::Analysis run_analysis(const Problem& p, const manin::ManinConfig& m) {
  return p.hypersurface_route ? manin::analyze_hypersurface(*p.file.hypersurface, m) : manin::analyze(p.file.problem(), m);
}

manin::CountTarget count_target(const Problem& p) {
  return p.hypersurface_route ? manin::CountTarget::of_hypersurface(*p.file.hypersurface)
                              : manin::CountTarget::of(p.file.problem());
}

manin::HeightSpec height_spec(const RunConfig& cfg, const Problem& p) {
  return cfg.sup_norm ? manin::HeightSpec::sup_norm() : manin::HeightSpec::from_polynomial(p.polynomial);
}

void emit(const RunConfig& cfg, const json& body) {
  std::string text = manin::versioned(body).dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + cfg.out);
  f << text;
}

void write_csv(const RunConfig& cfg, const manin::AsymptoticTable& table) {
  if (cfg.csv.empty()) return;
  std::ofstream f(cfg.csv);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + cfg.csv);
  f << manin::to_csv(table);
}

int flag_exit(const RunConfig& cfg, const manin::Analysis& a) {
  if (a.flags().empty() || cfg.allow_flags) return 0;
  for (const auto& f : a.flags()) std::cerr << "hypothesis flag: " << f << "\n";
  return 3;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.quad_tol > 0) || !(cfg.euler_tol > 0) || !(cfg.ratio_tol > 0) || !(cfg.certified_tol > 0))
    throw Error(ErrorCode::InvalidInput, "tolerances must be positive");
  if (!(cfg.budget >= 1e6)) throw Error(ErrorCode::InvalidInput, "operation budget must be at least 1e6");
  if (cfg.prime_cutoff < 2) throw Error(ErrorCode::InvalidInput, "prime cutoff must be at least 2");
  if (cfg.threads) manin::set_thread_count(cfg.threads);
}

int cmd_generators(const RunConfig& cfg) {
  Problem p = load_problem(cfg, false);
  manin::ManinConfig m = manin_config(cfg);
  auto spec = p.hypersurface_route ? manin::hypersurface_weight(*p.file.hypersurface)
                                   : manin::toric_weight(p.file.problem());
  std::int64_t scale = p.hypersurface_route ? std::accumulate(p.file.hypersurface->begin(), p.file.hypersurface->end(),
                                                              std::int64_t{0})
                                            : p.file.problem().max_entry();
  std::int64_t cap = m.cap > 0 ? m.cap : manin::default_cap(p.file.problem().coordinates(), scale);
  manin::LatticePointSet set = manin::minimal_generators(spec, cap);
  manin::LatticePointSet bigger = manin::stabilization_check(spec, set);
  set.stabilized = bigger.stabilized;
  emit(cfg, {{"weight", spec.description()}, {"generators", manin::to_json(set)}});
  if (!set.stabilized && !cfg.allow_flags) {
    std::cerr << "hypothesis flag: generators not stabilized\n";
    return 3;
  }
  return 0;
}

int cmd_analyze(const RunConfig& cfg) {
  Problem p = load_problem(cfg, false);
  manin::Analysis a = run_analysis(p, manin_config(cfg));
  emit(cfg, manin::to_json(a));
  return flag_exit(cfg, a);
}

int cmd_constants(const RunConfig& cfg) {
  Problem p = load_problem(cfg, true);
  manin::ManinConfig m = manin_config(cfg);
  manin::Analysis a = run_analysis(p, m);
  if (int code = flag_exit(cfg, a)) {
    emit(cfg, manin::to_json(a));
    return code;
  }
  manin::ManinReport r = manin::manin_constant(a, p.polynomial, m);
  emit(cfg, manin::to_json(r));
  return 0;
}

int cmd_count(const RunConfig& cfg) {
  if (cfg.t_values.empty()) throw Error(ErrorCode::InvalidInput, "count needs --t");
  Problem p = load_problem(cfg, !cfg.sup_norm);
  manin::CountConfig cc{cfg.budget};
  std::vector<manin::CountResult> counts;
  json rows = json::array();
  for (double t : cfg.t_values) {
    counts.push_back(manin::count_points(count_target(p), height_spec(cfg, p), t, cc));
    rows.push_back(manin::to_json(counts.back()));
  }
  json body = {{"counts", rows}, {"height", cfg.sup_norm ? "sup-norm" : p.polynomial.to_string()}};
  if (!cfg.csv.empty()) {
    if (p.polynomial.variables() == 0) p = load_problem(cfg, true);
    manin::ManinReport r = manin::manin_constant(run_analysis(p, manin_config(cfg)), p.polynomial, manin_config(cfg));
    double C = cfg.sup_norm ? r.sup_norm_C.value_or(0) : r.C;
    if (!(C > 0)) throw Error(ErrorCode::PreconditionViolation, "no prediction available for this height");
    manin::AsymptoticTable table;
    for (const auto& c : counts) {
      manin::AsymptoticRow row{c.t, c.N, 0, 0};
      row.predicted = C * std::pow(c.t, manin::to_double(r.iota())) *
                      std::pow(std::log(c.t), static_cast<double>(r.rho() - 1));
      row.ratio = static_cast<double>(c.N) / row.predicted;
      table.rows.push_back(row);
    }
    write_csv(cfg, table);
  }
  emit(cfg, body);
  return 0;
}

int cmd_zeta(const RunConfig& cfg) {
  Problem p = load_problem(cfg, true);
  manin::ManinConfig m = manin_config(cfg);
  manin::Analysis a = run_analysis(p, m);
  if (int code = flag_exit(cfg, a)) return code;
  manin::ZetaProbe z = manin::zeta_partial(count_target(p), height_spec(cfg, p), cfg.s_values, cfg.cutoff,
                                           a.face.iota, a.face.rho, manin::CountConfig{cfg.budget});
  json body = manin::to_json(z);
  if (!cfg.no_euler) {
    manin::ManinReport r = manin::manin_constant(a, p.polynomial, m);
    double C = cfg.sup_norm ? r.sup_norm_C.value_or(0) : r.C;
    if (C > 0) body["C0"] = C * manin::to_double(r.iota()) * std::tgamma(static_cast<double>(r.rho()));
  }
  emit(cfg, body);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.t_values.empty()) throw Error(ErrorCode::InvalidInput, "verify needs --t");
  Problem p = load_problem(cfg, true);
  manin::ManinConfig m = manin_config(cfg);
  manin::Analysis a = run_analysis(p, m);
  if (int code = flag_exit(cfg, a)) {
    emit(cfg, manin::to_json(a));
    return code;
  }
  manin::ManinReport r = manin::manin_constant(a, p.polynomial, m);
  std::vector<double> ts = cfg.t_values;
  if (ts.size() == 1) ts = {ts[0] / 10, 3 * ts[0] / 10, ts[0]};
  std::vector<manin::CountResult> counts;
  manin::CountConfig cc{cfg.budget};
  for (double t : ts) counts.push_back(manin::count_points(count_target(p), height_spec(cfg, p), t, cc));
  manin::AsymptoticTable table =
      manin::asymptotic_report(counts, r, cfg.sup_norm ? manin::HeightMode::SupNorm : manin::HeightMode::Polynomial);
  const double C = cfg.sup_norm ? *r.sup_norm_C : r.C;
  const double C_err = cfg.sup_norm ? *r.sup_norm_C_error : r.C_error;
  json checks = json::array();
  bool ok = true;
  auto check = [&](const std::string& name, bool pass, double value, double limit) {
    checks.push_back({{"name", name}, {"pass", pass}, {"value", value}, {"limit", limit}});
    ok = ok && pass;
  };
  check("constant certified relative error", C_err <= cfg.certified_tol * C, C_err / C, cfg.certified_tol);
  check("last ratio deviation", table.last_deviation <= cfg.ratio_tol, table.last_deviation, cfg.ratio_tol);
  json body = {{"report", manin::to_json(r)},
               {"height", cfg.sup_norm ? "sup-norm" : p.polynomial.to_string()},
               {"asymptotics", manin::to_json(table)},
               {"checks", checks},
               {"pass", ok}};
  json count_rows = json::array();
  for (const auto& c : counts) count_rows.push_back(manin::to_json(c));
  body["counts"] = count_rows;
  write_csv(cfg, table);
  emit(cfg, body);
  return ok ? 0 : 1;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonCompactFace: return 3;
    case ErrorCode::InvalidInput:
    case ErrorCode::PreconditionViolation:
    case ErrorCode::ParseError:
    case ErrorCode::NonZeroRowSum:
    case ErrorCode::DependentRows:
    case ErrorCode::NotElliptic:
    case ErrorCode::MissingVariable: return 2;
    default: return 1;
  }
}

void add_problem_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--problem", cfg.problem_file, "problem JSON file");
  sub->add_option("--hypersurface", cfg.hypersurface, "vector a, e.g. 1,1");
  sub->add_option("--matrix", cfg.matrix, "relation rows, e.g. \"1,1,-2\" or \"1,-1,0;0,1,-1\"");
  sub->add_option("--projective-torus", cfg.projective_torus, "torus of P^n")->check(CLI::PositiveNumber);
  sub->add_option("--polynomial", cfg.polynomial, "height polynomial, e.g. \"X1^2+X2^2+X3^2\"");
  sub->add_flag("--toric-route", cfg.toric_route, "treat a hypersurface as a general toric problem");
  sub->add_option("--quad-tol", cfg.quad_tol, "quadrature absolute tolerance");
  sub->add_option("--euler-tol", cfg.euler_tol, "Euler product truncation tolerance");
  sub->add_option("--prime-cutoff", cfg.prime_cutoff, "explicit primes up to this bound");
  sub->add_option("--precision", cfg.precision, "Euler product precision in bits (113, 160, 256)");
  sub->add_option("--cap", cfg.cap, "generator enumeration cap");
  sub->add_option("--budget", cfg.budget, "counting operation budget");
  sub->add_option("--seed", cfg.seed, "seed for randomized quadrature");
  sub->add_option("--threads", cfg.threads, "worker threads (default: MANIN_TORIC_THREADS or all cores)");
  sub->add_option("--out", cfg.out, "write the JSON report here instead of stdout");
  sub->add_flag("--allow-flags", cfg.allow_flags, "exit 0 even when hypothesis flags are raised");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational points of bounded height on toric varieties: constants, counts and zeta probes"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("generators", "minimal generators of the weight support");
  auto* ana = app.add_subcommand("analyze", "Newton polyhedron invariants iota, rho, c");
  auto* con = app.add_subcommand("constants", "volume constant, Euler product and the leading constant C");
  auto* cnt = app.add_subcommand("count", "exact point counts N(t)");
  auto* zet = app.add_subcommand("zeta", "height zeta partial sums");
  auto* ver = app.add_subcommand("verify", "constants, counts and the asymptotic comparison");
  for (auto* sub : {gen, ana, con, cnt, zet, ver}) add_problem_options(sub, cfg);
  for (auto* sub : {con, zet}) sub->add_flag("--no-euler", cfg.no_euler, "skip the Euler product");
  for (auto* sub : {cnt, zet, ver}) sub->add_flag("--sup-norm", cfg.sup_norm, "use max |m_i| as the height");
  for (auto* sub : {cnt, ver}) {
    sub->add_option("--t", cfg.t_values, "height bounds")->delimiter(',');
    sub->add_option("--csv", cfg.csv, "write t,N,predicted,ratio here");
  }
  zet->add_option("--s", cfg.s_values, "exponents s > iota")->delimiter(',');
  zet->add_option("--cutoff", cfg.cutoff, "height cutoff T");
  ver->add_option("--ratio-tol", cfg.ratio_tol, "allowed |N/(C t^iota) - 1| at the largest t");
  ver->add_option("--certified-tol", cfg.certified_tol, "allowed relative certified error of C");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    validate(cfg);
    if (*gen) return cmd_generators(cfg);
    if (*ana) return cmd_analyze(cfg);
    if (*con) return cmd_constants(cfg);
    if (*cnt) return cmd_count(cfg);
    if (*zet) return cmd_zeta(cfg);
    if (*ver) return cmd_verify(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed problem JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
