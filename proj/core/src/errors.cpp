#include "emden/errors.hpp"

namespace emden {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::SubthresholdExponent: return "SubthresholdExponent";
    case ErrorCode::SupercriticalExponent: return "SupercriticalExponent";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NormalizationFailure: return "NormalizationFailure";
    case ErrorCode::RootsTooClose: return "RootsTooClose";
    case ErrorCode::FitUnreliable: return "FitUnreliable";
    case ErrorCode::TailNotDecayed: return "TailNotDecayed";
    case ErrorCode::NodeOnSingularSet: return "NodeOnSingularSet";
    case ErrorCode::ExponentOrdering: return "ExponentOrdering";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    case ErrorCode::IncompatibleDomain: return "IncompatibleDomain";
    case ErrorCode::SolverStagnation: return "SolverStagnation";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::BarrierFailure: return "BarrierFailure";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::LeftBall: return "LeftBall";
    case ErrorCode::PositivityLost: return "PositivityLost";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionTooSmall:
    case ErrorCode::SubthresholdExponent:
    case ErrorCode::SupercriticalExponent:
    case ErrorCode::WeightOutOfRange:
    case ErrorCode::SpecInvalid:
    case ErrorCode::IncompatibleDomain:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConfigError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace emden
