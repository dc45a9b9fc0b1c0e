#pragma once

#include <complex>
#include <optional>

namespace emden {

/// Dimension N and exponent p of  Δu + u^p = 0  in R^N.
struct ProblemParams {
  int dimension = 0;
  double exponent = 0.0;
};

/// Open interval (N/(N-2), (N+2)/(N-2)) of admissible exponents.
double lower_exponent(int dimension);
double upper_exponent(int dimension);

/// Throws DimensionTooSmall, SubthresholdExponent or SupercriticalExponent.
void validate(const ProblemParams& params);

/// Closed-form constants of the singular radial problem.
///
/// With a = 2/(p-1) and t = -log r, the substitution u = r^{-a} v(t) turns the
/// radial equation into the autonomous ODE
///
///     v'' - drift * v' - linear * v + v^p = 0,
///
/// where drift = N - 2 - 2a (negative for subcritical p) and
/// linear = a (N - 2 - a) = v_inf^{p-1}.
struct DerivedConstants {
  ProblemParams params;
  double a = 0.0;            ///< 2/(p-1)
  double v_inf = 0.0;        ///< stable equilibrium of the phase-plane ODE
  double a_p = 0.0;          ///< p v_inf^{p-1}, the limit of r^2 p u^{p-1} at 0
  double mu_plus = 0.0;      ///< N - 2p/(p-1), unstable eigenvalue of the saddle (0,0)
  double drift = 0.0;        ///< N - 2 - 4/(p-1)
  double linear = 0.0;       ///< v_inf^{p-1}
  bool critical_flag = false;  ///< gamma_0^{+-} complex, i.e. p > p*

  int dimension() const { return params.dimension; }
  double exponent() const { return params.exponent; }
};

DerivedConstants derive_constants(const ProblemParams& params);

/// Eigenvalue l (l + N - 2) of the Laplacian on S^{N-1}.
double sphere_eigenvalue(int degree, int dimension);

struct IndicialRoots {
  int mode = -1;  ///< spherical degree when known, -1 otherwise
  double lambda = 0.0;
  std::complex<double> gamma_minus;  ///< roots at r = 0 (with potential A_p)
  std::complex<double> gamma_plus;
  double tilde_gamma_minus = 0.0;    ///< roots at r = infinity (pure Laplacian)
  double tilde_gamma_plus = 0.0;
  double discriminant = 0.0;         ///< ((N-2)/2)^2 + lambda - A_p

  bool real() const { return discriminant >= 0.0; }
  /// gamma_plus - gamma_minus for real roots.
  double gap() const;
};

IndicialRoots indicial_roots(const DerivedConstants& constants, double lambda);
IndicialRoots indicial_roots_for_degree(const DerivedConstants& constants, int degree);

/// Exponent p* at which ((N-2)/2)^2 = A_p, located by bisection.
double critical_exponent(int dimension, double tolerance = 1e-12);

struct WeightSelection {
  double nu = 0.0;
  double mu = 0.0;
  double delta_nu = 0.0;
};

/// Open interval (-2/(p-1), Re gamma_0^-) for nu.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains_open(double x) const { return x > lo && x < hi; }
};

Interval nu_interval(const DerivedConstants& constants);
/// Admissible interval for delta_nu given nu.
Interval delta_interval(const DerivedConstants& constants, double nu);

/// Default strategy when `explicit_nu` is empty: midpoints of both intervals.
WeightSelection select_weights(const DerivedConstants& constants,
                               std::optional<double> explicit_nu = std::nullopt);

/// Exponent q in the ball radius beta * eps^q: isolated singularities.
double ball_exponent_isolated(const DerivedConstants& constants);
/// q = (p-3)/(p-1) - nu for positive-dimensional singular sets.
double ball_exponent_general(const DerivedConstants& constants, double nu);

}  // namespace emden
