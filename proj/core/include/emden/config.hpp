#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emden/discretization.hpp"
#include "emden/fixed_point.hpp"
#include "emden/glue.hpp"
#include "emden/params.hpp"
#include "emden/radial_profile.hpp"

namespace emden {

struct OutputConfig {
  std::filesystem::path directory;
  std::vector<std::string> formats{"csv", "json"};
};

/// Full run description; every section has defaults except problem and spec.
struct RunConfig {
  ProblemParams problem;
  ProfileOptions profile;
  std::optional<double> normalize_alpha;
  SingularSpec spec;
  std::optional<double> nu;
  DiscretizationOptions disc;
  PicardOptions picard;
  std::uint64_t seed = 20240611;
  OutputConfig output;

  bool wants(const std::string& format) const;
};

/// Output directory when the config does not name one: $EMDEN_GLUE_OUT, else ".".
std::filesystem::path default_output_directory();

/// Parses and checks everything that can be checked without numerics:
/// exponent range, spec geometry, discretization compatibility.
/// ConfigError (with the JSON path) for schema problems; the module error
/// (SubthresholdExponent, SpecInvalid, ...) for semantic ones.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

/// Tolerances the run uses, echoed into every report.
nlohmann::json tolerances(const RunConfig& config);

}  // namespace emden
