#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "emden/fixed_point.hpp"
#include "emden/radial_profile.hpp"

namespace emden {

/// {"command", "version", "git_describe", "config", "tolerances", "status"};
/// callers add their payload next to these keys.
nlohmann::json report_envelope(const std::string& command, const nlohmann::json& config,
                               const nlohmann::json& tolerances, const std::string& status);

/// Pretty-printed with a trailing newline. IoError on failure.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// JSON null for NaN and infinities, the number otherwise.
nlohmann::json number_or_null(double x);

nlohmann::json to_json(const ProfileDiagnostics& d);
nlohmann::json to_json(const SolutionReport& r);
nlohmann::json to_json(const IterationTrace& t);
nlohmann::json to_json(const Ledger& l);

/// iteration,v_norm,step_norm,ratio,residual,solver_iterations
void write_trace_csv(const std::filesystem::path& path, const IterationTrace& trace);

}  // namespace emden
