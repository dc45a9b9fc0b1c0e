#pragma once

#include <cstddef>
#include <vector>

#include "emden/params.hpp"

namespace emden {

struct ProfileOptions {
  double tol = 1e-10;      ///< integrator tolerance and convergence radius at (v_inf, 0)
  double t_min = -25.0;    ///< earliest tabulated time (the launch point may be earlier)
  double t_max = 400.0;    ///< give up if (v, v') has not converged by then
  double delta = 1e-8;     ///< launch offset along the unstable eigenvector (1, mu_plus)
  double dt = 0.01;        ///< spacing of the output table
};

/// Tabulated heteroclinic orbit v_1(t), t = -log r, from the saddle (0, 0) to
/// (v_inf, 0). The time origin is fixed by v_1(0) = v_inf / 2 before any shift.
///
/// Between nodes the orbit is a quintic Hermite interpolant built from v, v'
/// and v'' (the latter taken from the ODE). Outside the table the asymptotes
/// are used: far_coefficient * e^{mu_plus t} on the left, v_inf on the right.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(DerivedConstants constants, double t0, double dt, std::vector<double> v,
                std::vector<double> v_prime, double far_coefficient, double tol);

  const DerivedConstants& constants() const { return constants_; }
  double t_start() const { return t0_; }
  double t_end() const { return t0_ + dt_ * static_cast<double>(v_.size() - 1); }
  double dt() const { return dt_; }
  std::size_t size() const { return v_.size(); }
  double t_at(std::size_t i) const { return t0_ + dt_ * static_cast<double>(i); }
  std::vector<double> t_grid() const;
  const std::vector<double>& v() const { return v_; }
  const std::vector<double>& v_prime() const { return vp_; }
  /// Limit of e^{-mu_plus t} v(t) as t -> -infinity, after any translation.
  double far_coefficient() const;
  double shift() const { return shift_; }
  double tolerance() const { return tol_; }

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// Right-hand side of v'' = drift v' + linear v - v^p.
  double acceleration(double v, double vp) const;

  /// Returns a copy translated in t by +s (v_new(t) = v_1(t - s)).
  RadialProfile translated(double s) const;

 private:
  double third(double v, double vp, double vpp) const;

  DerivedConstants constants_{};
  double t0_ = 0.0;
  double dt_ = 0.0;
  std::vector<double> v_;
  std::vector<double> vp_;
  std::vector<double> vpp_;
  std::vector<double> vppp_;
  double far_ = 0.0;
  double shift_ = 0.0;
  double tol_ = 0.0;
};

/// Integrates the corrected phase-plane ODE along the unstable manifold of
/// (0, 0). Throws NoConvergence if the orbit leaves 0 < v < 2 * sup_bound and
/// ToleranceUnreachable if it has not settled by t_max.
RadialProfile compute_profile(const DerivedConstants& constants, const ProfileOptions& options = {});

/// Smallest s >= 0 with sup_{t <= 0} v_1(t - s) <= alpha; the result records s.
RadialProfile normalize_profile(const RadialProfile& profile, double alpha);

/// sup over t <= 0 of the profile (0 if the table starts after 0).
double sup_left_of_origin(const RadialProfile& profile);

/// u_eps(r) = r^{-2/(p-1)} v_1(-log(r / eps)).
double u_of_r(const RadialProfile& profile, double epsilon, double r);
/// du_eps/dr = -r^{-2/(p-1)-1} (a v_1 + v_1').
double du_dr(const RadialProfile& profile, double epsilon, double r);
/// d^2 u_eps / dr^2.
double d2u_dr2(const RadialProfile& profile, double epsilon, double r);
/// V_p(r) = r^2 p u_1(r)^{p-1} = p v_1(-log r)^{p-1}.
double potential_vp(const RadialProfile& profile, double r);

/// Bound v^{p-1} < ((p+1)/2) v_inf^{p-1}, expressed on v.
double sup_bound(const DerivedConstants& constants);

/// H = v'^2/2 - v_inf^{p-1} v^2 / 2 + v^{p+1}/(p+1).
double hamiltonian(const DerivedConstants& constants, double v, double vp);

struct ProfileDiagnostics {
  double end_deviation = 0.0;     ///< |v(t_end) - v_inf|
  double max_ode_residual = 0.0;  ///< finite-difference residual at interior nodes
  double sup_v = 0.0;
  double sup_margin = 0.0;        ///< 1 - sup v^{p-1} / (((p+1)/2) v_inf^{p-1})
  double tail_slope = 0.0;        ///< fitted d log v / dt on the far tail
  double tail_slope_stderr = 0.0;
  double max_energy_increase = 0.0;  ///< largest positive jump of H between nodes
  double min_v = 0.0;
  double min_monotone_factor = 0.0;  ///< min over nodes of a v + v'
};

/// ODE residual v'' - drift v' - linear v + v^p, v'' from a sixth-order central
/// difference of the tabulated v'. Interior nodes only.
std::vector<double> ode_residual(const RadialProfile& profile);

ProfileDiagnostics diagnose(const RadialProfile& profile);

}  // namespace emden
