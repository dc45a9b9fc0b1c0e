#include "emden/radial_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "emden/errors.hpp"
#include "emden/interpolation.hpp"

namespace emden {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;

struct PhasePlane {
  double drift;
  double linear;
  double p;
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    const double v = x[0];
    dxdt[0] = x[1];
    dxdt[1] = drift * x[1] + linear * v - std::copysign(std::pow(std::abs(v), p), v);
  }
};

// Steps the state across [t, t + h] exactly, so table nodes are true step ends.
template <class Stepper>
void advance(Stepper& stepper, const PhasePlane& sys, State& x, double t, double h) {
  odeint::integrate_adaptive(stepper, sys, x, t, t + h, h);
}

double hermite_cubic(double y0, double d0, double y1, double d1, double h, double x) {
  const double u = x / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return y0 * (2 * u3 - 3 * u2 + 1) + h * d0 * (u3 - 2 * u2 + u) + y1 * (-2 * u3 + 3 * u2) +
         h * d1 * (u3 - u2);
}

}  // namespace

RadialProfile::RadialProfile(DerivedConstants constants, double t0, double dt, std::vector<double> v,
                             std::vector<double> v_prime, double far_coefficient, double tol)
    : constants_(constants),
      t0_(t0),
      dt_(dt),
      v_(std::move(v)),
      vp_(std::move(v_prime)),
      far_(far_coefficient),
      tol_(tol) {
  if (v_.size() < 2 || v_.size() != vp_.size() || !(dt_ > 0.0)) {
    fail(ErrorCode::InvalidArgument, "profile table needs two or more nodes and dt > 0");
  }
  vpp_.resize(v_.size());
  vppp_.resize(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) {
    vpp_[i] = acceleration(v_[i], vp_[i]);
    vppp_[i] = third(v_[i], vp_[i], vpp_[i]);
  }
}

std::vector<double> RadialProfile::t_grid() const {
  std::vector<double> t(v_.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = t_at(i);
  }
  return t;
}

double RadialProfile::acceleration(double v, double vp) const {
  const double p = constants_.exponent();
  return constants_.drift * vp + constants_.linear * v - std::copysign(std::pow(std::abs(v), p), v);
}

double RadialProfile::third(double v, double vp, double vpp) const {
  const double p = constants_.exponent();
  return constants_.drift * vpp + constants_.linear * vp - p * std::pow(std::abs(v), p - 1.0) * vp;
}

double RadialProfile::value(double t) const {
  if (t <= t0_) {
    return far_ * std::exp(constants_.mu_plus * (t - shift_));
  }
  if (t >= t_end()) {
    return constants_.v_inf;
  }
  const double x = (t - t0_) / dt_;
  std::size_t k = static_cast<std::size_t>(x);
  if (k + 1 >= v_.size()) {
    k = v_.size() - 2;
  }
  const double off = t - t_at(k);
  return quintic_hermite(v_[k], vp_[k], vpp_[k], v_[k + 1], vp_[k + 1], vpp_[k + 1], dt_, off);
}

double RadialProfile::derivative(double t) const {
  if (t <= t0_) {
    return constants_.mu_plus * far_ * std::exp(constants_.mu_plus * (t - shift_));
  }
  if (t >= t_end()) {
    return 0.0;
  }
  const double x = (t - t0_) / dt_;
  std::size_t k = static_cast<std::size_t>(x);
  if (k + 1 >= v_.size()) {
    k = v_.size() - 2;
  }
  const double off = t - t_at(k);
  return quintic_hermite(vp_[k], vpp_[k], vppp_[k], vp_[k + 1], vpp_[k + 1], vppp_[k + 1], dt_, off);
}

double RadialProfile::second_derivative(double t) const {
  return acceleration(value(t), derivative(t));
}

double RadialProfile::far_coefficient() const {
  return far_ * std::exp(-constants_.mu_plus * shift_);
}

RadialProfile RadialProfile::translated(double s) const {
  RadialProfile out = *this;
  out.t0_ += s;
  out.shift_ += s;
  return out;
}

double sup_bound(const DerivedConstants& constants) {
  const double p = constants.exponent();
  return std::pow(0.5 * (p + 1.0) * constants.linear, 1.0 / (p - 1.0));
}

double hamiltonian(const DerivedConstants& constants, double v, double vp) {
  const double p = constants.exponent();
  return 0.5 * vp * vp - 0.5 * constants.linear * v * v + std::pow(std::abs(v), p + 1.0) / (p + 1.0);
}

RadialProfile compute_profile(const DerivedConstants& constants, const ProfileOptions& options) {
  if (!(options.tol > 1e-13 && options.tol < 1e-4)) {
    fail(ErrorCode::InvalidArgument, "profile tolerance must lie in (1e-13, 1e-4)");
  }
  if (!(options.t_min < 0.0 && options.t_max > 0.0)) {
    fail(ErrorCode::InvalidArgument, "profile t-span must satisfy t_min < 0 < t_max");
  }
  if (!(options.delta > 0.0 && options.delta < 1e-2) || !(options.dt > 0.0 && options.dt <= 0.1)) {
    fail(ErrorCode::InvalidArgument, "profile needs 0 < delta < 1e-2 and 0 < dt <= 0.1");
  }

  const PhasePlane sys{constants.drift, constants.linear, constants.exponent()};
  const double mu = constants.mu_plus;
  const double v_inf = constants.v_inf;
  const double upper = 2.0 * sup_bound(constants);
  const double h = options.dt;
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(options.tol, options.tol);

  // Pass 1: time from the launch point to the first crossing of v_inf / 2.
  double tau_cross = 0.0;
  {
    State x{options.delta, options.delta * mu};
    double tau = 0.0;
    const double horizon = options.t_max - options.t_min + 100.0 / mu;
    while (true) {
      const State prev = x;
      advance(stepper, sys, x, tau, h);
      if (!(x[0] > 0.0) || !(x[0] < upper)) {
        fail(ErrorCode::NoConvergence, "orbit left 0 < v < 2 sup-bound before reaching v_inf/2");
      }
      if (x[0] >= 0.5 * v_inf) {
        double lo = 0.0, hi = h;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double val = hermite_cubic(prev[0], prev[1], x[0], x[1], h, mid);
          (val < 0.5 * v_inf ? lo : hi) = mid;
        }
        tau_cross = tau + 0.5 * (lo + hi);
        break;
      }
      tau += h;
      if (tau > horizon) {
        fail(ErrorCode::NoConvergence, "orbit never reached v_inf/2");
      }
    }
  }

  // Pass 2: relaunch so that the crossing sits at t = 0 and tabulate.
  const double lead = std::max(-options.t_min, tau_cross);
  const double t_launch = -h * std::ceil(lead / h - 1e-9);
  const double amplitude = options.delta * std::exp(mu * (t_launch + tau_cross));
  const double far = amplitude * std::exp(-mu * t_launch);

  std::vector<double> v{amplitude};
  std::vector<double> vp{amplitude * mu};
  State x{amplitude, amplitude * mu};
  std::size_t k = 0;
  bool converged = false;
  while (true) {
    const double t = t_launch + h * static_cast<double>(k);
    if (t > options.t_max) {
      break;
    }
    advance(stepper, sys, x, t, h);
    ++k;
    if (!(x[0] > 0.0) || !(x[0] < upper)) {
      std::ostringstream msg;
      msg << "orbit left 0 < v < 2 sup-bound at t = " << t + h << " (v = " << x[0] << ")";
      fail(ErrorCode::NoConvergence, msg.str());
    }
    v.push_back(x[0]);
    vp.push_back(x[1]);
    if (std::hypot(x[0] - v_inf, x[1]) < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "|(v, v') - (v_inf, 0)| did not drop below " << options.tol << " by t = " << options.t_max;
    fail(ErrorCode::ToleranceUnreachable, msg.str());
  }
  return RadialProfile(constants, t_launch, h, std::move(v), std::move(vp), far, options.tol);
}

double sup_left_of_origin(const RadialProfile& profile) {
  double best = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double t = profile.t_at(i);
    if (t > 0.0) {
      break;
    }
    best = std::max(best, profile.v()[i]);
  }
  if (profile.t_end() > 0.0) {
    best = std::max(best, profile.value(0.0));
  } else {
    best = std::max(best, profile.constants().v_inf);
  }
  return best;
}

RadialProfile normalize_profile(const RadialProfile& profile, double alpha) {
  if (!(alpha > 0.0)) {
    fail(ErrorCode::InvalidArgument, "normalization target alpha must be positive");
  }
  if (sup_left_of_origin(profile) <= alpha) {
    return profile.translated(0.0);
  }
  // M(tau) = sup_{t <= tau} v_1(t) is nondecreasing; find the largest tau with
  // M(tau) <= alpha, then s = -tau.
  const auto& v = profile.v();
  double tau = profile.t_start();
  double running = 0.0;
  bool found = false;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    running = std::max(running, v[i]);
    if (v[i + 1] > alpha && running <= alpha) {
      double lo = profile.t_at(i), hi = profile.t_at(i + 1);
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (profile.value(mid) <= alpha ? lo : hi) = mid;
      }
      tau = lo;
      found = true;
      break;
    }
  }
  if (!found) {
    // alpha lies below the tabulated start: continue on the exponential asymptote.
    tau = std::log(alpha / profile.far_coefficient()) / profile.constants().mu_plus;
  }
  return profile.translated(std::max(0.0, -tau));
}

double u_of_r(const RadialProfile& profile, double epsilon, double r) {
  const double a = profile.constants().a;
  return std::pow(r, -a) * profile.value(-std::log(r / epsilon));
}

double du_dr(const RadialProfile& profile, double epsilon, double r) {
  const double a = profile.constants().a;
  const double t = -std::log(r / epsilon);
  return -std::pow(r, -a - 1.0) * (a * profile.value(t) + profile.derivative(t));
}

double d2u_dr2(const RadialProfile& profile, double epsilon, double r) {
  const double a = profile.constants().a;
  const double t = -std::log(r / epsilon);
  const double v = profile.value(t);
  const double vp = profile.derivative(t);
  const double vpp = profile.acceleration(v, vp);
  return std::pow(r, -a - 2.0) * ((a + 1.0) * (a * v + vp) + a * vp + vpp);
}

double potential_vp(const RadialProfile& profile, double r) {
  const double p = profile.constants().exponent();
  const double v = profile.value(-std::log(r));
  return p * std::pow(std::max(v, 0.0), p - 1.0);
}

std::vector<double> ode_residual(const RadialProfile& profile) {
  const auto& v = profile.v();
  const auto& vp = profile.v_prime();
  const std::vector<double> vpp = central_derivative6(vp, profile.dt());
  std::vector<double> res(v.size(), 0.0);
  for (std::size_t i = 3; i + 3 < v.size(); ++i) {
    res[i] = vpp[i] - profile.acceleration(v[i], vp[i]);
  }
  return res;
}

ProfileDiagnostics diagnose(const RadialProfile& profile) {
  const DerivedConstants& c = profile.constants();
  const double p = c.exponent();
  ProfileDiagnostics d;
  const auto& v = profile.v();
  const auto& vp = profile.v_prime();
  d.end_deviation = std::abs(v.back() - c.v_inf);
  for (double r : ode_residual(profile)) {
    d.max_ode_residual = std::max(d.max_ode_residual, std::abs(r));
  }
  d.sup_v = *std::max_element(v.begin(), v.end());
  d.min_v = *std::min_element(v.begin(), v.end());
  d.sup_margin = 1.0 - std::pow(d.sup_v, p - 1.0) / (0.5 * (p + 1.0) * c.linear);
  d.min_monotone_factor = c.a * v[0] + vp[0];
  double prev_h = hamiltonian(c, v[0], vp[0]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    d.min_monotone_factor = std::min(d.min_monotone_factor, c.a * v[i] + vp[i]);
    const double h = hamiltonian(c, v[i], vp[i]);
    d.max_energy_increase = std::max(d.max_energy_increase, h - prev_h);
    prev_h = h;
  }
  // Far tail: nodes where the nonlinearity is negligible against the linear part.
  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < v.size() && v[i] <= 1e-3 * c.v_inf; ++i) {
    ts.push_back(profile.t_at(i));
    logs.push_back(std::log(v[i]));
  }
  if (ts.size() >= 2) {
    const LineFit fit = fit_line(ts, logs);
    d.tail_slope = fit.slope;
    d.tail_slope_stderr = fit.slope_stderr;
  }
  return d;
}

}  // namespace emden
