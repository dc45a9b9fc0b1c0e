#include "cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "emden/config.hpp"
#include "emden/csv.hpp"
#include "emden/errors.hpp"
#include "emden/fixed_point.hpp"
#include "emden/ode_family.hpp"
#include "emden/report_io.hpp"
#include "emden/version.hpp"
#include "emden/weighted_norms.hpp"

namespace emden::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ProblemFlags {
  int n = 0;
  double p = 0.0;
  double tol = ProfileOptions{}.tol;
  double t_min = ProfileOptions{}.t_min;
  double t_max = ProfileOptions{}.t_max;
  std::optional<double> normalize_alpha;
  std::string out;
};

void add_problem_flags(CLI::App* sub, ProblemFlags& f) {
  sub->add_option("--N", f.n, "space dimension (>= 3)")->required();
  sub->add_option("--p", f.p, "exponent, strictly between N/(N-2) and (N+2)/(N-2)")->required();
  sub->add_option("--tol", f.tol, "profile integrator tolerance")->capture_default_str();
  sub->add_option("--t-min", f.t_min, "earliest tabulated t = -log r")->capture_default_str();
  sub->add_option("--t-max", f.t_max, "give up on the profile after this t")->capture_default_str();
  sub->add_option("--normalize-alpha", f.normalize_alpha, "translate so that sup_{t<=0} v_1 <= alpha");
  sub->add_option("--out", f.out, "output directory (default $EMDEN_GLUE_OUT or .)");
}

fs::path output_dir(const std::string& flag, const fs::path& fallback) {
  fs::path dir = flag.empty() ? fallback : fs::path(flag);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    fail(ErrorCode::IoError, "cannot create output directory " + dir.string() + ": " + ec.message());
  }
  return dir;
}

ProfileOptions profile_options(const ProblemFlags& f) {
  ProfileOptions o;
  o.tol = f.tol;
  o.t_min = f.t_min;
  o.t_max = f.t_max;
  return o;
}

json problem_echo(const ProblemFlags& f) {
  return {{"problem", {{"N", f.n}, {"p", f.p}}},
          {"profile",
           {{"tol", f.tol},
            {"t_min", f.t_min},
            {"t_max", f.t_max},
            {"normalize_alpha", f.normalize_alpha ? json(*f.normalize_alpha) : json(nullptr)}}}};
}

RadialProfile build_profile(const DerivedConstants& c, const ProfileOptions& o, std::optional<double> alpha) {
  RadialProfile prof = compute_profile(c, o);
  if (alpha) {
    prof = normalize_profile(prof, *alpha);
  }
  return prof;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigError, flag + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) {
    fail(ErrorCode::ConfigError, flag + ": empty list");
  }
  return out;
}

std::vector<double> parse_range(const std::string& text, const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    parts.push_back(item);
  }
  if (parts.size() != 3) {
    fail(ErrorCode::ConfigError, flag + ": expected lo:hi:count");
  }
  const double lo = parse_list(parts[0], flag)[0];
  const double hi = parse_list(parts[1], flag)[0];
  const double n = parse_list(parts[2], flag)[0];
  if (n < 1 || n != std::floor(n)) {
    fail(ErrorCode::ConfigError, flag + ": count must be a positive integer");
  }
  if (n == 1) {
    return {lo};
  }
  return linear_space(lo, hi, static_cast<std::size_t>(n));
}

// ---------------------------------------------------------------- radial

int cmd_radial(const ProblemFlags& f, std::ostream& out) {
  const DerivedConstants c = derive_constants({f.n, f.p});
  const fs::path dir = output_dir(f.out, default_output_directory());
  const RadialProfile prof = build_profile(c, profile_options(f), f.normalize_alpha);
  const ProfileDiagnostics d = diagnose(prof);

  {
    CsvWriter w(dir / "profile.csv", {"t", "v", "v_prime"});
    for (std::size_t i = 0; i < prof.size(); ++i) {
      w.row({prof.t_at(i), prof.v()[i], prof.v_prime()[i]});
    }
    w.close();
  }
  {
    // u_1 on r = e^{-t} over the tabulated range, increasing r.
    CsvWriter w(dir / "u1.csv", {"r", "u1", "u1_prime"});
    for (std::size_t k = prof.size(); k-- > 0;) {
      const double r = std::exp(-prof.t_at(k));
      w.row({r, u_of_r(prof, 1.0, r), du_dr(prof, 1.0, r)});
    }
    w.close();
  }

  const bool pass = d.end_deviation <= 1e-6 && d.max_ode_residual <= 1e-7 && d.sup_margin > 0.01 &&
                    std::abs(d.tail_slope - c.mu_plus) <= 0.01 * std::abs(c.mu_plus);
  json rep = report_envelope("radial", problem_echo(f),
                             {{"profile_tol", f.tol},
                              {"end_deviation_tol", 1e-6},
                              {"ode_residual_tol", 1e-7},
                              {"sup_margin_min", 0.01},
                              {"tail_slope_rel_tol", 0.01}},
                             pass ? "ok" : "failed");
  rep["a"] = c.a;
  rep["v_inf"] = c.v_inf;
  rep["A_p"] = c.a_p;
  rep["mu_plus"] = c.mu_plus;
  rep["drift"] = c.drift;
  rep["sup_bound"] = sup_bound(c);
  rep["sup_bound_margin"] = d.sup_margin;
  rep["tail_slope"] = d.tail_slope;
  rep["predicted_tail_slope"] = c.mu_plus;
  rep["far_coefficient"] = prof.far_coefficient();
  rep["shift"] = prof.shift();
  rep["t_start"] = prof.t_start();
  rep["t_end"] = prof.t_end();
  rep["diagnostics"] = to_json(d);
  write_json(dir / "profile_report.json", rep);
  out << "v_inf = " << c.v_inf << ", tail slope " << d.tail_slope << " (predicted " << c.mu_plus
      << "), sup margin " << d.sup_margin << "\n";
  return pass ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- indicial

int cmd_indicial(const ProblemFlags& f, int max_degree, std::ostream& out) {
  const DerivedConstants c = derive_constants({f.n, f.p});
  const fs::path dir = output_dir(f.out, default_output_directory());
  CsvWriter w(dir / "indicial.csv",
              {"degree", "lambda", "gamma_minus_re", "gamma_minus_im", "gamma_plus_re", "gamma_plus_im",
               "tilde_gamma_minus", "tilde_gamma_plus", "discriminant"});
  for (int j = 0; j <= max_degree; ++j) {
    const IndicialRoots r = indicial_roots_for_degree(c, j);
    w.row({static_cast<double>(j), r.lambda, r.gamma_minus.real(), r.gamma_minus.imag(), r.gamma_plus.real(),
           r.gamma_plus.imag(), r.tilde_gamma_minus, r.tilde_gamma_plus, r.discriminant});
  }
  w.close();

  const Interval nu = nu_interval(c);
  json rep = report_envelope("indicial", json{{"problem", {{"N", f.n}, {"p", f.p}}}, {"max_degree", max_degree}},
                             json::object(), "ok");
  rep["a"] = c.a;
  rep["A_p"] = c.a_p;
  rep["p_star"] = critical_exponent(f.n);
  rep["complex_roots"] = c.critical_flag;
  rep["nu_interval"] = {nu.lo, nu.hi};
  try {
    const WeightSelection ws = select_weights(c);
    const Interval di = delta_interval(c, ws.nu);
    rep["weights"] = {{"nu", ws.nu}, {"mu", ws.mu}, {"delta_nu", ws.delta_nu}};
    rep["delta_interval"] = {di.lo, di.hi};
  } catch (const Error& e) {
    rep["weights"] = nullptr;
    rep["weights_error"] = e.what();
  }
  write_json(dir / "indicial_report.json", rep);
  out << "p* = " << rep["p_star"].get<double>() << ", nu interval (" << nu.lo << ", " << nu.hi << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- a0map

std::vector<double> default_p_grid(int n) {
  const double lo = lower_exponent(n);
  const double w = upper_exponent(n) - lo;
  return linear_space(lo + 0.1 * w, lo + 0.8 * w, 5);
}

int cmd_a0map(int n, std::optional<double> lambda_flag, const std::string& p_grid_text, const std::string& e_grid_text,
              const std::string& out_flag, std::ostream& out) {
  if (n < 3) {
    fail(ErrorCode::DimensionTooSmall, "N must be at least 3");
  }
  const std::vector<double> p_grid = p_grid_text.empty() ? default_p_grid(n) : parse_range(p_grid_text, "--p-grid");
  const std::vector<double> e_grid = parse_list(e_grid_text, "--E-grid");
  for (double p : p_grid) {
    validate(ProblemParams{n, p});
  }
  for (double e : e_grid) {
    if (e < 0.0) {
      fail(ErrorCode::ConfigError, "--E-grid: energies must be non-negative");
    }
  }
  const double lambda = lambda_flag ? *lambda_flag : static_cast<double>(n - 1);
  const fs::path dir = output_dir(out_flag, default_output_directory());
  const A0Map map = a0_map(n, lambda, p_grid, e_grid);

  bool all_positive = true;
  std::size_t flagged = 0;
  std::size_t invalid = 0;
  CsvWriter w(dir / "a0map.csv", {"p", "E", "a0", "fit_residual", "status"});
  for (const A0Cell& cell : map.cells) {
    w.row_text({format_double(cell.p), format_double(cell.energy), format_double(cell.a0),
                format_double(cell.fit_residual), to_string(cell.status)});
    if (cell.status == CellStatus::Invalid) {
      ++invalid;
      continue;
    }
    if (cell.status == CellStatus::Resonant) {
      ++flagged;
    }
    if (!(cell.a0 > 0.0)) {
      all_positive = false;
    }
  }
  w.close();

  json cells = json::array();
  for (const A0Cell& cell : map.cells) {
    if (!cell.message.empty()) {
      cells.push_back({{"p", cell.p}, {"E", cell.energy}, {"status", to_string(cell.status)}, {"message", cell.message}});
    }
  }
  const bool pass = all_positive && invalid == 0;
  json rep = report_envelope("a0map",
                             {{"N", n}, {"lambda", lambda}, {"p_grid", p_grid}, {"E_grid", e_grid}},
                             {{"frobenius_threshold", FrobeniusOptions{}.threshold},
                              {"shooting_tol", ShootingOptions{}.tol}},
                             pass ? "ok" : "failed");
  rep["all_positive"] = all_positive;
  rep["cells"] = map.cells.size();
  rep["resonant_cells"] = flagged;
  rep["invalid_cells"] = invalid;
  rep["notes"] = cells;
  write_json(dir / "a0map_report.json", rep);
  out << map.cells.size() << " cells, " << (all_positive ? "all a0 > 0" : "non-positive a0 found") << ", "
      << invalid << " invalid\n";
  return pass ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- approx

int cmd_approx(const RunConfig& cfg, const std::string& out_flag, std::ostream& out) {
  const fs::path dir = output_dir(out_flag, cfg.output.directory);
  const DerivedConstants c = derive_constants(cfg.problem);
  const RadialProfile prof = build_profile(c, cfg.profile, cfg.normalize_alpha);
  const WeightSelection ws = select_weights(c, cfg.nu);
  const ApproximateSolution approx(cfg.spec, prof);
  const int n = cfg.problem.dimension;

  if (cfg.wants("csv")) {
    std::vector<std::string> header;
    for (int k = 0; k < n; ++k) {
      header.push_back("x" + std::to_string(k));
    }
    header.push_back("ubar");
    header.push_back("f");
    CsvWriter w(dir / "ubar.csv", header);
    const Domain& dom = cfg.spec.domain;
    const double lo = dom.kind == DomainKind::Ball ? dom.center[0] - dom.radius : dom.lo[0];
    const double hi = dom.kind == DomainKind::Ball ? dom.center[0] + dom.radius : dom.hi[0];
    std::vector<double> x = cfg.spec.points[0];
    std::vector<double> row(n + 2);
    for (double s : linear_space(lo, hi, 2001)) {
      x[0] = s;
      if (approx.nearest(x).second == 0.0) {
        continue;
      }
      for (int k = 0; k < n; ++k) {
        row[k] = x[k];
      }
      row[n] = approx.value(x);
      row[n + 1] = approx.residual(x);
      w.row(row);
    }
    w.close();
  }

  const double eps = cfg.spec.max_epsilon();
  const std::vector<double> eps_list{eps, eps / 2.0, eps / 4.0};
  const ScalingStudy st = scaling_study(cfg.spec, prof, eps_list, ws.nu);
  if (cfg.wants("csv")) {
    CsvWriter w(dir / "scaling.csv", {"eps", "weighted_sup_f"});
    for (std::size_t i = 0; i < st.epsilons.size(); ++i) {
      w.row({st.epsilons[i], st.norms[i]});
    }
    w.close();
  }

  // Hoelder part of f around the first point, sampled on a radial grid.
  const WeightFunction rho = WeightFunction::radial(2.0 * cfg.spec.R);
  std::vector<double> r = geometric_space(cfg.spec.R * 0.5, cfg.spec.R * 2.5, 2001);
  std::vector<double> rr(r.size()), fv(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    rr[i] = rho.of_distance(r[i]);
    fv[i] = approx.radial_residual(0, r[i]);
  }
  HolderOptions ho;
  ho.seed = cfg.seed;
  const WeightedNormReport wn =
      weighted_norm(make_radial_field(r, rr, fv, ws.nu - 2.0), ws.nu - 2.0, 0.5, ho);

  const bool pass = std::abs(st.slope - st.predicted) <= 0.1 * std::abs(st.predicted);
  json rep = report_envelope("approx", to_json(cfg), tolerances(cfg), pass ? "ok" : "failed");
  rep["weights"] = {{"nu", ws.nu}, {"mu", ws.mu}, {"delta_nu", ws.delta_nu}};
  rep["scaling"] = {{"epsilons", st.epsilons}, {"norms", st.norms},     {"slope", st.slope},
                    {"slope_stderr", st.slope_stderr}, {"ci95", {st.ci_low, st.ci_high}},
                    {"predicted", st.predicted},       {"slope_rel_tol", 0.1}};
  rep["residual_norm"] = {{"sup_part", wn.sup_part}, {"holder_part", wn.holder_part}, {"alpha", wn.alpha},
                          {"gamma", wn.gamma}, {"seed", cfg.seed}};
  const Sandwich sw = sandwich_constants(prof, -std::log(cfg.spec.R));
  rep["sandwich"] = {{"c1", sw.c1}, {"c2", sw.c2}};
  if (cfg.wants("json")) {
    write_json(dir / "approx_report.json", rep);
  }
  out << "residual slope " << st.slope << " (predicted " << st.predicted << ")\n";
  return pass ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- solve / verify

void write_solution_csv(const fs::path& path, const Discretization& disc, const SolutionReport& rep) {
  std::vector<std::string> header{"unknown"};
  for (int k = 0; k < disc.dimension; ++k) {
    header.push_back("x" + std::to_string(k));
  }
  for (const char* h : {"rho", "u_bar", "v", "u"}) {
    header.push_back(h);
  }
  CsvWriter w(path, header);
  std::vector<double> row(header.size());
  for (std::size_t k = 0; k < disc.unknown_count(); ++k) {
    const std::size_t node = disc.node_of_unknown[k];
    const std::vector<double> x = disc.coordinates(node);
    row[0] = static_cast<double>(k);
    for (int j = 0; j < disc.dimension; ++j) {
      row[1 + j] = x[j];
    }
    row[1 + disc.dimension] = disc.rho[node];
    row[2 + disc.dimension] = rep.ubar[k];
    row[3 + disc.dimension] = rep.v[k];
    row[4 + disc.dimension] = rep.u[k];
    w.row(row);
  }
  w.close();
}

int cmd_solve(const RunConfig& cfg_in, const std::string& out_flag, std::ostream& out, std::ostream& err) {
  RunConfig cfg = cfg_in;
  const fs::path dir = output_dir(out_flag, cfg.output.directory);
  const DerivedConstants c = derive_constants(cfg.problem);
  const RadialProfile prof = build_profile(c, cfg.profile, cfg.normalize_alpha);
  const WeightSelection ws = select_weights(c, cfg.nu);
  const Discretization disc = make_discretization(cfg.spec, cfg.disc);  // snaps box3d points
  const ApproximateSolution approx(cfg.spec, prof);

  json rep = report_envelope("solve", to_json(cfg), tolerances(cfg), "ok");
  rep["weights"] = {{"nu", ws.nu}, {"mu", ws.mu}, {"delta_nu", ws.delta_nu}};

  PicardResult result;
  std::optional<std::string> error;
  try {
    result = picard_solve(approx, ws, disc, cfg.picard);
  } catch (const PicardFailure& e) {
    result = e.partial();
    error = std::string(to_string(e.code())) + ": " + e.what();
  }

  VerifyOptions vo;
  vo.ball_radius = result.trace.ball_radius;
  const Ledger ledger = verify_solution(result.report, approx, disc, vo);
  const bool pass = !error && result.trace.converged && ledger.passed();

  if (cfg.wants("csv")) {
    write_solution_csv(dir / "solution.csv", disc, result.report);
    write_trace_csv(dir / "trace.csv", result.trace);
  }
  rep["status"] = pass ? "ok" : "failed";
  rep["converged"] = !error && result.trace.converged;
  if (error) {
    rep["error"] = *error;
  }
  rep["solution"] = to_json(result.report);
  rep["trace"] = to_json(result.trace);
  rep["ledger"] = to_json(ledger);
  rep["unknowns"] = disc.unknown_count();
  write_json(dir / "report.json", rep);

  out << (pass ? "converged" : "failed") << " after " << result.trace.records.size() << " iterations, residual "
      << result.report.residual_norm << "\n";
  if (error) {
    err << *error << "\n";
  }
  for (const auto& name : ledger.failed()) {
    err << "failed check: " << name << "\n";
  }
  return pass ? kExitOk : kExitNumerical;
}

int cmd_verify(const std::string& report_path, const std::string& solution_flag, std::ostream& out,
               std::ostream& err) {
  const json saved = read_json(report_path);
  if (!saved.contains("config") || !saved.contains("trace")) {
    fail(ErrorCode::ConfigError, report_path + ": not a solve report");
  }
  RunConfig cfg = parse_config(saved.at("config"));
  const fs::path solution =
      solution_flag.empty() ? fs::path(report_path).parent_path() / "solution.csv" : fs::path(solution_flag);
  const CsvTable table = read_csv(solution);

  const DerivedConstants c = derive_constants(cfg.problem);
  const RadialProfile prof = build_profile(c, cfg.profile, cfg.normalize_alpha);
  const WeightSelection ws = select_weights(c, cfg.nu);
  const Discretization disc = make_discretization(cfg.spec, cfg.disc);
  const ApproximateSolution approx(cfg.spec, prof);

  Ledger ledger;
  const std::size_t n = disc.unknown_count();
  bool layout_ok = table.rows.size() == n;
  std::string layout_detail = layout_ok ? "" : "row count differs from the discretization";
  std::vector<double> u(n, 0.0);
  if (layout_ok) {
    const std::size_t cu = table.column("u");
    for (std::size_t k = 0; k < n && layout_ok; ++k) {
      const std::vector<double> x = disc.coordinates(disc.node_of_unknown[k]);
      for (int j = 0; j < disc.dimension; ++j) {
        const double saved_x = table.rows[k][table.column("x" + std::to_string(j))];
        if (std::abs(saved_x - x[j]) > 1e-12 * std::max(1.0, std::abs(x[j]))) {
          layout_ok = false;
          layout_detail = "coordinates of unknown " + std::to_string(k) + " do not match";
        }
      }
      u[k] = table.rows[k][cu];
    }
  }
  LedgerEntry layout;
  layout.name = "layout";
  layout.passed = layout_ok;
  layout.value = layout_ok ? 1.0 : 0.0;
  layout.threshold = 1.0;
  layout.detail = layout_detail;
  ledger.entries.push_back(layout);

  json rep = report_envelope("verify", {{"report", report_path}, {"solution", solution.string()}}, tolerances(cfg),
                             "ok");
  if (layout_ok) {
    const SolutionReport sr = analyze_solution(approx, ws, disc, u);
    VerifyOptions vo;
    vo.ball_radius = saved.at("trace").value("ball_radius", 0.0);
    const Ledger checks = verify_solution(sr, approx, disc, vo);
    ledger.entries.insert(ledger.entries.end(), checks.entries.begin(), checks.entries.end());
    rep["solution"] = to_json(sr);
  }
  const bool pass = ledger.passed();
  rep["status"] = pass ? "ok" : "failed";
  rep["ledger"] = to_json(ledger);
  write_json(fs::path(report_path).parent_path() / "verify.json", rep);
  for (const auto& name : ledger.failed()) {
    err << "failed check: " << name << "\n";
  }
  out << (pass ? "all checks passed" : "verification failed") << "\n";
  return pass ? kExitOk : kExitNumerical;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular solutions of Delta u + u^p = 0 by gluing radial profiles"};
  app.set_version_flag("--version", std::string(kVersionString));
  app.require_subcommand(1);

  ProblemFlags radial_f;
  auto* radial = app.add_subcommand("radial", "heteroclinic profile v_1 and the radial solution u_1");
  add_problem_flags(radial, radial_f);

  ProblemFlags ind_f;
  int max_degree = 4;
  auto* indicial = app.add_subcommand("indicial", "indicial roots per spherical degree and weight intervals");
  add_problem_flags(indicial, ind_f);
  indicial->add_option("--max-degree", max_degree, "largest spherical degree")->capture_default_str();

  int a0_n = 0;
  std::optional<double> a0_lambda;
  std::string p_grid, e_grid = "0,0.5,1,2,5,10,100", a0_out;
  auto* a0map = app.add_subcommand("a0map", "leading Frobenius coefficient a0 over a (p, E) grid");
  a0map->add_option("--N", a0_n, "space dimension")->required();
  a0map->add_option("--lambda", a0_lambda, "spherical eigenvalue (default N-1)");
  a0map->add_option("--p-grid", p_grid, "lo:hi:count (default: 5 values inside the exponent range)");
  a0map->add_option("--E-grid", e_grid, "comma-separated energies")->capture_default_str();
  a0map->add_option("--out", a0_out, "output directory");

  std::string approx_cfg, approx_out;
  auto* approx = app.add_subcommand("approx", "glued approximate solution, its residual and scaling in eps");
  approx->add_option("--config", approx_cfg, "run configuration (JSON)")->required();
  approx->add_option("--out", approx_out, "output directory (overrides output.directory)");

  std::string solve_cfg, solve_out;
  auto* solve = app.add_subcommand("solve", "Picard iteration for the exact solution");
  solve->add_option("--config", solve_cfg, "run configuration (JSON)")->required();
  solve->add_option("--out", solve_out, "output directory (overrides output.directory)");

  std::string verify_report, verify_solution_path;
  auto* verify = app.add_subcommand("verify", "re-check a saved solution against its report");
  verify->add_option("--report", verify_report, "report.json written by solve")->required();
  verify->add_option("--solution", verify_solution_path, "solution.csv (default: next to the report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << e.what() << "\n\n";
    CLI::App* failing = &app;
    for (CLI::App* sub : app.get_subcommands()) {
      failing = sub;
    }
    err << failing->help();
    return kExitConfig;
  }

  try {
    if (*radial) {
      return cmd_radial(radial_f, out);
    }
    if (*indicial) {
      return cmd_indicial(ind_f, max_degree, out);
    }
    if (*a0map) {
      return cmd_a0map(a0_n, a0_lambda, p_grid, e_grid, a0_out, out);
    }
    if (*approx) {
      return cmd_approx(load_config(approx_cfg), approx_out, out);
    }
    if (*solve) {
      return cmd_solve(load_config(solve_cfg), solve_out, out, err);
    }
    if (*verify) {
      return cmd_verify(verify_report, verify_solution_path, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace emden::cli
