#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emden/params.hpp"
#include "emden/radial_profile.hpp"

namespace emden {

enum class PotentialMode { Full, Frozen };

/// One eigencomponent of the linearization about u_1, with Fourier parameter
/// E = |eta|^2 along a flat singular set:
///
///     w'' + (N-1)/r w' + ((V(r) - lambda) / r^2 - E) w = 0,
///
/// V = V_p(r) = p v_1(-log r)^{p-1} (full) or the constant A_p (frozen).
struct OdeChannel {
  double lambda = 0.0;
  double energy = 0.0;
  PotentialMode mode = PotentialMode::Full;
};

/// Samples of a function of r on a grid in s = log r.
struct ChannelSamples {
  std::vector<double> s;
  std::vector<double> w;
  std::vector<double> w_s;  ///< dw/ds where available (empty otherwise)

  double r(std::size_t i) const;
  std::vector<double> radii() const;
};

/// Potential V(r) of the channel.
double channel_potential(const OdeChannel& channel, const RadialProfile& profile, double r);

struct ChannelResidual {
  std::vector<double> residual;  ///< pointwise operator image
  std::vector<double> scale;     ///< sum of term magnitudes, with |V| + lambda in the zeroth-order one
  double max_relative = 0.0;     ///< max_i |residual_i| / scale_i
  double max_abs = 0.0;
};

/// Applies the channel operator by fourth-order finite differences in s.
/// Throws GridTooCoarse below five samples.
ChannelResidual apply_channel(const OdeChannel& channel, const RadialProfile& profile,
                              const ChannelSamples& w);

struct ShootingOptions {
  double r_min = 0.0;  ///< 0 picks a default (deep inside the profile table for full mode)
  double r_max = 0.0;  ///< 0 picks max(50, 30/sqrt(E)) for E > 0 and 1e4 for E = 0
  double ds = 0.01;    ///< output spacing in s = log r
  double tol = 1e-12;
};

/// Solution decaying as r -> infinity, integrated inward from an asymptotic
/// seed and normalized so that w(1) = 1. The grid always contains s = 0.
ChannelSamples decaying_solution(const OdeChannel& channel, const RadialProfile& profile,
                                 const ShootingOptions& options = {});

/// Solution behaving like r^{gamma^+} at 0, integrated outward from r_min.
/// Normalized to w(1) = 1.
ChannelSamples regular_solution(const OdeChannel& channel, const RadialProfile& profile,
                                const ShootingOptions& options = {});

/// Dirichlet problem w(1) = 1, w(R) = 0 on [1, R], second-order differences in s.
ChannelSamples boundary_value_solution(const OdeChannel& channel, const RadialProfile& profile,
                                       double R, double ds = 0.005);

struct FrobeniusFit {
  double a0 = 0.0;
  double b0 = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double fit_residual = 0.0;  ///< max |w - fit| / max |w| over the window
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;
  bool resonant = false;      ///< gamma^+ - gamma^- within 1e-6 of an integer
};

struct FrobeniusOptions {
  double r_hi = 0.1;               ///< initial upper end of the window
  double window_decades = 2.0;     ///< width of the window
  double threshold = 1e-6;         ///< accepted fit residual
  double min_gap = 0.1;            ///< smallest accepted gamma^+ - gamma^-
};

/// Least-squares fit w ~ a0 r^{gamma^-} + b0 r^{gamma^+} on a window that is
/// moved down a decade at a time until the fit residual drops below the
/// threshold. RootsTooClose for complex or nearly equal roots; FitUnreliable if
/// the samples run out first.
FrobeniusFit frobenius_coefficients(const ChannelSamples& w, const IndicialRoots& roots,
                                    const FrobeniusOptions& options = {});

enum class CellStatus { Ok, Resonant, Invalid };
std::string to_string(CellStatus status);

struct A0Cell {
  double p = 0.0;
  double energy = 0.0;
  double a0 = 0.0;
  double fit_residual = 0.0;
  CellStatus status = CellStatus::Ok;
  std::string message;
};

struct A0Map {
  int dimension = 0;
  double lambda = 0.0;
  std::vector<double> p_grid;
  std::vector<double> e_grid;
  std::vector<A0Cell> cells;  ///< row-major in (p, E)
};

/// Channel errors are recorded per cell (status Invalid) instead of aborting.
A0Map a0_map(int dimension, double lambda, const std::vector<double>& p_grid,
             const std::vector<double>& e_grid, const ProfileOptions& profile_options = {},
             const ShootingOptions& shooting = {}, const FrobeniusOptions& frobenius = {});

/// a0 for E = 0, lambda = N - 1 implied by the kernel mode u_1':
/// a v_inf / (a v_1(0) + v_1'(0)).
double a0_from_kernel_mode(const RadialProfile& profile);

struct HardyResult {
  double lhs = 0.0;  ///< int r^{N-3} w^2 dr
  double rhs = 0.0;  ///< 4/(N-2)^2 int r^{N-1} (w')^2 dr
  bool ok = false;
};

/// Trapezoid quadrature on the log grid; w_s is computed by finite differences
/// when the samples do not carry it. TailNotDecayed if either integrand is not
/// negligible at the ends of the grid.
HardyResult hardy_check(const ChannelSamples& w, int dimension, double tail_tol = 1e-8);

}  // namespace emden
