#include "emden/params.hpp"

#include <cmath>
#include <sstream>

#include "emden/errors.hpp"

namespace emden {

double lower_exponent(int dimension) {
  return static_cast<double>(dimension) / static_cast<double>(dimension - 2);
}

double upper_exponent(int dimension) {
  return static_cast<double>(dimension + 2) / static_cast<double>(dimension - 2);
}

void validate(const ProblemParams& params) {
  if (params.dimension < 3) {
    std::ostringstream msg;
    msg << "dimension N = " << params.dimension << " must satisfy N >= 3";
    fail(ErrorCode::DimensionTooSmall, msg.str());
  }
  const double p = params.exponent;
  const double lo = lower_exponent(params.dimension);
  const double hi = upper_exponent(params.dimension);
  if (!std::isfinite(p)) {
    fail(ErrorCode::InvalidArgument, "exponent p is not finite");
  }
  if (p <= lo) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "p = " << p << " must exceed N/(N-2) = " << lo;
    fail(ErrorCode::SubthresholdExponent, msg.str());
  }
  if (p >= hi) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "p = " << p << " must be below (N+2)/(N-2) = " << hi;
    fail(ErrorCode::SupercriticalExponent, msg.str());
  }
}

namespace {

double a_p_of(int n, double p) {
  const double x = 2.0 * p / (p - 1.0);
  return x * (n - x);
}

}  // namespace

DerivedConstants derive_constants(const ProblemParams& params) {
  validate(params);
  const int n = params.dimension;
  const double p = params.exponent;

  DerivedConstants c;
  c.params = params;
  c.a = 2.0 / (p - 1.0);
  c.mu_plus = n - 2.0 * p / (p - 1.0);
  c.linear = c.a * c.mu_plus;  // (2/(p-1)) (N - 2p/(p-1))
  c.v_inf = std::pow(c.linear, 1.0 / (p - 1.0));
  c.a_p = p * c.linear;
  c.drift = n - 2.0 - 2.0 * c.a;
  const double half = 0.5 * (n - 2.0);
  c.critical_flag = half * half - c.a_p < 0.0;
  return c;
}

double sphere_eigenvalue(int degree, int dimension) {
  if (degree < 0) {
    fail(ErrorCode::InvalidArgument, "spherical degree must be >= 0");
  }
  return static_cast<double>(degree) * static_cast<double>(degree + dimension - 2);
}

double IndicialRoots::gap() const { return (gamma_plus - gamma_minus).real(); }

IndicialRoots indicial_roots(const DerivedConstants& constants, double lambda) {
  const double n = constants.dimension();
  const double half = 0.5 * (n - 2.0);
  IndicialRoots roots;
  roots.lambda = lambda;
  roots.discriminant = half * half + lambda - constants.a_p;
  const std::complex<double> root = std::sqrt(std::complex<double>(roots.discriminant, 0.0));
  roots.gamma_minus = -half - root;
  roots.gamma_plus = -half + root;
  const double tilde = std::sqrt(half * half + lambda);
  roots.tilde_gamma_minus = -half - tilde;
  roots.tilde_gamma_plus = -half + tilde;
  return roots;
}

IndicialRoots indicial_roots_for_degree(const DerivedConstants& constants, int degree) {
  IndicialRoots roots = indicial_roots(constants, sphere_eigenvalue(degree, constants.dimension()));
  roots.mode = degree;
  return roots;
}

double critical_exponent(int dimension, double tolerance) {
  if (dimension < 3) {
    fail(ErrorCode::DimensionTooSmall, "dimension must be >= 3");
  }
  // A_p increases from 0 to (N^2-4)/4 across the admissible interval, so
  // g(p) = ((N-2)/2)^2 - A_p changes sign exactly once.
  const double target = 0.25 * (dimension - 2.0) * (dimension - 2.0);
  double lo = lower_exponent(dimension);
  double hi = upper_exponent(dimension);
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (target - a_p_of(dimension, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Interval nu_interval(const DerivedConstants& constants) {
  const IndicialRoots r0 = indicial_roots(constants, 0.0);
  return {-constants.a, r0.gamma_minus.real()};
}

Interval delta_interval(const DerivedConstants& constants, double nu) {
  // -2/(p-1) + (N-2)/2 < -delta < nu + (N-2)/2
  const double half = 0.5 * (constants.dimension() - 2.0);
  return {-(nu + half), -(-constants.a + half)};
}

WeightSelection select_weights(const DerivedConstants& constants, std::optional<double> explicit_nu) {
  const Interval nu_range = nu_interval(constants);
  WeightSelection w;
  if (explicit_nu) {
    if (!nu_range.contains_open(*explicit_nu)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "nu = " << *explicit_nu << " outside (" << nu_range.lo << ", " << nu_range.hi << ")";
      fail(ErrorCode::WeightOutOfRange, msg.str());
    }
    w.nu = *explicit_nu;
  } else {
    w.nu = nu_range.midpoint();
  }
  w.mu = 2.0 - constants.dimension() - w.nu;
  w.delta_nu = delta_interval(constants, w.nu).midpoint();
  return w;
}

double ball_exponent_isolated(const DerivedConstants& constants) { return constants.mu_plus; }

double ball_exponent_general(const DerivedConstants& constants, double nu) {
  const double p = constants.exponent();
  return (p - 3.0) / (p - 1.0) - nu;
}

}  // namespace emden
