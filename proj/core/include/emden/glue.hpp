#pragma once

#include <span>
#include <vector>

#include "emden/interpolation.hpp"
#include "emden/radial_profile.hpp"

namespace emden {

enum class DomainKind { Box, Ball };

/// Box [lo_k, hi_k] per axis, or the ball |x - center| < radius.
struct Domain {
  DomainKind kind = DomainKind::Ball;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> center;
  double radius = 1.0;

  static Domain ball(int dimension, double radius);
  static Domain cube(int dimension, double half_width);
  int dimension() const;
};

struct SingularSpec {
  int dimension = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> epsilons;
  double R = 0.0;
  double cone_a = 0.5;
  Domain domain;

  std::size_t count() const { return points.size(); }
  double max_epsilon() const;
};

/// Throws SpecInvalid naming the violated condition: K >= 1, 4R below the
/// minimal pairwise distance, B_{2R}(x_i) inside the domain,
/// a max(eps) <= eps_i <= max(eps) with a in (0, 1], and eps_i < R.
void validate(const SingularSpec& spec);

/// Quintic smoothstep cutoff: 1 on [0, 1], 0 on [2, inf).
struct Cutoff {
  static double value(double s);
  static double first(double s);
  static double second(double s);
};

/// u_bar(x) = sum_i chi_R(x - x_i) u_{eps_i}(x - x_i) and its residual
/// f = Delta u_bar + u_bar^p, which vanishes off the annuli R <= |x - x_i| <= 2R.
class ApproximateSolution {
 public:
  ApproximateSolution(SingularSpec spec, RadialProfile profile);

  const SingularSpec& spec() const { return spec_; }
  const RadialProfile& profile() const { return profile_; }

  double value(std::span<const double> x) const;
  double residual(std::span<const double> x) const;

  /// Contribution of point i as a function of the distance to it.
  double radial_value(std::size_t i, double r) const;
  double radial_residual(std::size_t i, double r) const;

  /// Index and distance of the nearest singular point.
  std::pair<std::size_t, double> nearest(std::span<const double> x) const;

 private:
  SingularSpec spec_;
  RadialProfile profile_;
};

/// Second-order central-difference Laplacian of u_bar at x plus u_bar^p.
double fd_residual(const ApproximateSolution& approx, std::span<const double> x, double h);

struct ScalingStudy {
  std::vector<double> epsilons;
  std::vector<double> norms;  ///< weighted sup of f at exponent gamma - 2
  double slope = 0.0;
  double slope_stderr = 0.0;
  double ci_low = 0.0;   ///< 95% interval for the slope
  double ci_high = 0.0;
  double predicted = 0.0;  ///< N - 2p/(p-1)
};

/// Weighted sup norm (exponent gamma - 2) of the residual over the annuli,
/// sampled on `samples` radii per point.
double residual_weighted_sup(const ApproximateSolution& approx, double gamma, std::size_t samples = 2001);

/// Every point of `spec_template` gets eps_i scaled so that max eps = eps.
ScalingStudy scaling_study(const SingularSpec& spec_template, const RadialProfile& profile,
                           const std::vector<double>& eps_list, double gamma);

/// min / max of v_1 over t >= t_lo; u_bar is squeezed between these multiples
/// of rho^{-2/(p-1)} where rho <= eps e^{-t_lo}.
struct Sandwich {
  double c1 = 0.0;
  double c2 = 0.0;
};
Sandwich sandwich_constants(const RadialProfile& profile, double t_lo);

}  // namespace emden
