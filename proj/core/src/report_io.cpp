#include "emden/report_io.hpp"

#include <cmath>
#include <fstream>

#include "emden/csv.hpp"
#include "emden/errors.hpp"
#include "emden/version.hpp"

namespace emden {

using nlohmann::json;

json report_envelope(const std::string& command, const json& config, const json& tolerances,
                     const std::string& status) {
  return {{"command", command},       {"version", std::string(kVersion)},
          {"git_describe", std::string(kGitDescribe)},
          {"config", config},         {"tolerances", tolerances},
          {"status", status}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
  if (!out) {
    fail(ErrorCode::IoError, "failed writing " + path.string());
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::IoError, "cannot open " + path.string());
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::parse_error& e) {
    fail(ErrorCode::IoError, path.string() + ": " + e.what());
  }
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const ProfileDiagnostics& d) {
  return {{"end_deviation", d.end_deviation},
          {"max_ode_residual", d.max_ode_residual},
          {"sup_v", d.sup_v},
          {"sup_bound_margin", d.sup_margin},
          {"tail_slope", d.tail_slope},
          {"tail_slope_stderr", d.tail_slope_stderr},
          {"max_energy_increase", d.max_energy_increase},
          {"min_v", d.min_v}};
}

json to_json(const SolutionReport& r) {
  json table = json::array();
  for (const auto& row : r.ratio_table) {
    table.push_back({{"rho", row.rho}, {"u_over_ubar", row.ratio}});
  }
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"nu", r.nu},
          {"residual_norm", number_or_null(r.residual_norm)},
          {"f_norm", number_or_null(r.f_norm)},
          {"v_norm", number_or_null(r.v_norm)},
          {"min_u", number_or_null(r.min_u)},
          {"positivity_margin", number_or_null(r.positivity_margin)},
          {"ratio_min", number_or_null(r.ratio_min)},
          {"ratio_max", number_or_null(r.ratio_max)},
          {"asymptote_deviation", number_or_null(r.asymptote_deviation)},
          {"g_norm", r.g_norm >= 0.0 ? json(r.g_norm) : json(nullptr)},
          {"ratio_table", table}};
}

json to_json(const IterationTrace& t) {
  double max_ratio = 0.0;
  for (const auto& rec : t.records) {
    if (rec.iteration >= 3 && std::isfinite(rec.ratio)) {
      max_ratio = std::max(max_ratio, rec.ratio);
    }
  }
  double max_v = 0.0;
  for (const auto& rec : t.records) {
    max_v = std::max(max_v, rec.v_norm);
  }
  return {{"converged", t.converged},
          {"iterations", t.records.size()},
          {"beta", t.beta},
          {"q", t.q},
          {"ball_radius", t.ball_radius},
          {"max_v_norm", max_v},
          {"max_ratio_from_3", max_ratio},
          {"final_residual", t.records.empty() ? json(nullptr) : number_or_null(t.records.back().residual)}};
}

json to_json(const Ledger& l) {
  json checks = json::array();
  for (const auto& e : l.entries) {
    checks.push_back({{"name", e.name},
                      {"result", e.skipped ? "skipped" : (e.passed ? "pass" : "fail")},
                      {"value", number_or_null(e.value)},
                      {"threshold", number_or_null(e.threshold)},
                      {"detail", e.detail}});
  }
  return {{"passed", l.passed()}, {"failed", l.failed()}, {"checks", checks}};
}

void write_trace_csv(const std::filesystem::path& path, const IterationTrace& trace) {
  CsvWriter w(path, {"iteration", "v_norm", "step_norm", "ratio", "residual", "solver_iterations"});
  for (const auto& r : trace.records) {
    w.row({static_cast<double>(r.iteration), r.v_norm, r.step_norm, r.ratio, r.residual,
           static_cast<double>(r.solver_iterations)});
  }
  w.close();
}

}  // namespace emden
