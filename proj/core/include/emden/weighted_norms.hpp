#pragma once

#include <cstdint>

#include "emden/grid_field.hpp"

namespace emden {

struct WeightedNormReport {
  double sup_part = 0.0;
  double holder_part = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double total() const { return sup_part + holder_part; }
};

/// max over active nodes of rho^{-gamma} |w|. NodeOnSingularSet if rho <= 0 at a node.
double weighted_sup(const GridField& field, double gamma);

struct HolderOptions {
  std::size_t pair_budget = 10000;
  int dyadic_levels = 6;       ///< separations rho_i 2^{-k}, k = 1..levels
  std::uint64_t seed = 20240611;
};

/// Sampled scaled Hoelder seminorm of rho^{-gamma} w:
/// max over pairs of (rho_i + rho_j)^alpha |wbar_i - wbar_j| / |x_i - x_j|^alpha.
double weighted_holder(const GridField& field, double gamma, double alpha,
                       const HolderOptions& options = {});

WeightedNormReport weighted_norm(const GridField& field, double gamma, double alpha,
                                 const HolderOptions& options = {});

struct PowerNormReport {
  double lhs = 0.0;        ///< weighted_sup(|w|^p, gamma - 2)
  double sup_w = 0.0;      ///< weighted_sup(w, gamma)
  double threshold = 0.0;  ///< below this value of sup_w the bound is claimed
  bool applicable = false;
  bool ok = true;
  double margin = 0.0;     ///< eta * sup_w - lhs
};

/// Checks weighted_sup(|w|^p, gamma-2) <= eta weighted_sup(w, gamma) whenever
/// weighted_sup(w, gamma) is below (eta / rho_max^{(p-1) gamma + 2})^{1/(p-1)}.
/// ExponentOrdering unless gamma > -2/(p-1).
PowerNormReport power_norm_check(const GridField& field, double gamma, double p, double eta);

}  // namespace emden
