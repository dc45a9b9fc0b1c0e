#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emden {

enum class ErrorCode {
  // params
  DimensionTooSmall,
  SubthresholdExponent,
  SupercriticalExponent,
  WeightOutOfRange,
  // radial_profile
  NoConvergence,
  ToleranceUnreachable,
  // ode_family
  GridTooCoarse,
  NormalizationFailure,
  RootsTooClose,
  FitUnreliable,
  TailNotDecayed,
  // weighted_norms
  NodeOnSingularSet,
  ExponentOrdering,
  // glue
  SpecInvalid,
  // linear_solve
  IncompatibleDomain,
  SolverStagnation,
  SingularSystem,
  BarrierFailure,
  // fixed_point
  Diverged,
  LeftBall,
  PositivityLost,
  MaxIterations,
  // generic
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Configuration-class errors map to CLI exit code 2, everything else to 3.
bool is_config_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace emden
