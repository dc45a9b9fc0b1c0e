#include "emden/glue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "emden/errors.hpp"
#include "emden/weighted_norms.hpp"

namespace emden {

Domain Domain::ball(int dimension, double radius) {
  Domain d;
  d.kind = DomainKind::Ball;
  d.center.assign(static_cast<std::size_t>(dimension), 0.0);
  d.radius = radius;
  return d;
}

Domain Domain::cube(int dimension, double half_width) {
  Domain d;
  d.kind = DomainKind::Box;
  d.lo.assign(static_cast<std::size_t>(dimension), -half_width);
  d.hi.assign(static_cast<std::size_t>(dimension), half_width);
  return d;
}

int Domain::dimension() const {
  return static_cast<int>(kind == DomainKind::Ball ? center.size() : lo.size());
}

double SingularSpec::max_epsilon() const {
  return epsilons.empty() ? 0.0 : *std::max_element(epsilons.begin(), epsilons.end());
}

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d2 += (a[k] - b[k]) * (a[k] - b[k]);
  }
  return std::sqrt(d2);
}

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::SpecInvalid, what); }

}  // namespace

void validate(const SingularSpec& spec) {
  const std::size_t k = spec.points.size();
  if (k == 0) {
    invalid("at least one singular point is required");
  }
  if (spec.epsilons.size() != k) {
    invalid("one epsilon per singular point is required");
  }
  if (spec.domain.dimension() != spec.dimension) {
    invalid("domain dimension differs from the problem dimension");
  }
  if (!(spec.R > 0.0)) {
    invalid("cutoff radius R must be positive");
  }
  for (const auto& x : spec.points) {
    if (static_cast<int>(x.size()) != spec.dimension) {
      invalid("singular point has the wrong number of coordinates");
    }
  }
  double min_pair = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      min_pair = std::min(min_pair, distance(spec.points[i], spec.points[j]));
    }
  }
  if (!(4.0 * spec.R < min_pair)) {
    std::ostringstream msg;
    msg << "cutoff supports overlap: 4R = " << 4.0 * spec.R << " >= min distance " << min_pair;
    invalid(msg.str());
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto& x = spec.points[i];
    bool inside = true;
    if (spec.domain.kind == DomainKind::Ball) {
      inside = distance(x, spec.domain.center) + 2.0 * spec.R < spec.domain.radius;
    } else {
      for (int d = 0; d < spec.dimension; ++d) {
        inside = inside && x[d] - 2.0 * spec.R > spec.domain.lo[d] && x[d] + 2.0 * spec.R < spec.domain.hi[d];
      }
    }
    if (!inside) {
      std::ostringstream msg;
      msg << "B_{2R}(x_" << i << ") is not contained in the domain";
      invalid(msg.str());
    }
  }
  if (!(spec.cone_a > 0.0 && spec.cone_a <= 1.0)) {
    invalid("cone constant a must lie in (0, 1]");
  }
  const double emax = spec.max_epsilon();
  for (std::size_t i = 0; i < k; ++i) {
    const double e = spec.epsilons[i];
    if (!(e > 0.0)) {
      invalid("epsilons must be positive");
    }
    if (e < spec.cone_a * emax) {
      std::ostringstream msg;
      msg << "eps_" << i << " = " << e << " violates the cone condition a max(eps) <= eps_i";
      invalid(msg.str());
    }
    if (!(e < spec.R)) {
      std::ostringstream msg;
      msg << "eps_" << i << " = " << e << " is not below R = " << spec.R;
      invalid(msg.str());
    }
  }
}

double Cutoff::value(double s) {
  if (s <= 1.0) {
    return 1.0;
  }
  if (s >= 2.0) {
    return 0.0;
  }
  const double t = s - 1.0;
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double Cutoff::first(double s) {
  if (s <= 1.0 || s >= 2.0) {
    return 0.0;
  }
  const double t = s - 1.0;
  return -30.0 * t * t * (1.0 - t) * (1.0 - t);
}

double Cutoff::second(double s) {
  if (s <= 1.0 || s >= 2.0) {
    return 0.0;
  }
  const double t = s - 1.0;
  return -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

ApproximateSolution::ApproximateSolution(SingularSpec spec, RadialProfile profile)
    : spec_(std::move(spec)), profile_(std::move(profile)) {
  validate(spec_);
  if (spec_.dimension != profile_.constants().dimension()) {
    invalid("spec dimension differs from the profile dimension");
  }
}

std::pair<std::size_t, double> ApproximateSolution::nearest(std::span<const double> x) const {
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec_.points.size(); ++i) {
    const double d = distance(x, spec_.points[i]);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return {best_i, best};
}

double ApproximateSolution::radial_value(std::size_t i, double r) const {
  const double s = r / spec_.R;
  if (s >= 2.0) {
    return 0.0;
  }
  return Cutoff::value(s) * u_of_r(profile_, spec_.epsilons[i], r);
}

double ApproximateSolution::radial_residual(std::size_t i, double r) const {
  const double s = r / spec_.R;
  if (s <= 1.0 || s >= 2.0) {
    return 0.0;
  }
  const double eps = spec_.epsilons[i];
  const double n = spec_.dimension;
  const double p = profile_.constants().exponent();
  const double chi = Cutoff::value(s);
  const double chi_r = Cutoff::first(s) / spec_.R;
  const double chi_rr = Cutoff::second(s) / (spec_.R * spec_.R);
  const double lap_chi = chi_rr + (n - 1.0) / r * chi_r;
  const double u = u_of_r(profile_, eps, r);
  const double ur = du_dr(profile_, eps, r);
  return u * lap_chi + 2.0 * ur * chi_r + (std::pow(chi, p) - chi) * std::pow(u, p);
}

double ApproximateSolution::value(std::span<const double> x) const {
  // Supports are disjoint, so only the nearest point can contribute.
  const auto [i, r] = nearest(x);
  return radial_value(i, r);
}

double ApproximateSolution::residual(std::span<const double> x) const {
  const auto [i, r] = nearest(x);
  return radial_residual(i, r);
}

double fd_residual(const ApproximateSolution& approx, std::span<const double> x, double h) {
  std::vector<double> y(x.begin(), x.end());
  const double u0 = approx.value(x);
  double lap = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    y[k] = x[k] + h;
    const double up = approx.value(y);
    y[k] = x[k] - h;
    const double um = approx.value(y);
    y[k] = x[k];
    lap += (up - 2.0 * u0 + um) / (h * h);
  }
  const double p = approx.profile().constants().exponent();
  return lap + std::pow(std::max(u0, 0.0), p);
}

double residual_weighted_sup(const ApproximateSolution& approx, double gamma, std::size_t samples) {
  const double R = approx.spec().R;
  const WeightFunction rho = WeightFunction::radial(2.0 * R);
  double best = 0.0;
  for (std::size_t i = 0; i < approx.spec().count(); ++i) {
    const std::vector<double> radii = linear_space(R, 2.0 * R, samples);
    for (double r : radii) {
      const double f = approx.radial_residual(i, r);
      best = std::max(best, std::pow(rho.of_distance(r), 2.0 - gamma) * std::abs(f));
    }
  }
  return best;
}

ScalingStudy scaling_study(const SingularSpec& spec_template, const RadialProfile& profile,
                           const std::vector<double>& eps_list, double gamma) {
  if (eps_list.size() < 3) {
    fail(ErrorCode::InvalidArgument, "scaling study needs three or more epsilons");
  }
  const double ratio = eps_list[1] / eps_list[0];
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (std::abs(eps_list[i] / eps_list[i - 1] - ratio) > 1e-9 * std::abs(ratio)) {
      fail(ErrorCode::InvalidArgument, "scaling study epsilons must form a geometric sequence");
    }
  }
  ScalingStudy out;
  out.epsilons = eps_list;
  out.predicted = profile.constants().mu_plus;
  std::vector<double> le, ln;
  const double emax = spec_template.max_epsilon();
  for (double eps : eps_list) {
    SingularSpec spec = spec_template;
    for (double& e : spec.epsilons) {
      e = e / emax * eps;
    }
    const ApproximateSolution approx(spec, profile);
    const double norm = residual_weighted_sup(approx, gamma);
    out.norms.push_back(norm);
    le.push_back(std::log(eps));
    ln.push_back(std::log(norm));
  }
  const LineFit fit = fit_line(le, ln);
  out.slope = fit.slope;
  out.slope_stderr = fit.slope_stderr;
  const double dof = static_cast<double>(le.size()) - 2.0;
  const double tq = dof >= 1.0
                        ? boost::math::quantile(boost::math::complement(boost::math::students_t(dof), 0.025))
                        : 0.0;
  out.ci_low = fit.slope - tq * fit.slope_stderr;
  out.ci_high = fit.slope + tq * fit.slope_stderr;
  return out;
}

Sandwich sandwich_constants(const RadialProfile& profile, double t_lo) {
  Sandwich s;
  s.c1 = std::numeric_limits<double>::infinity();
  s.c2 = 0.0;
  const double v_lo = profile.value(t_lo);
  s.c1 = std::min(s.c1, v_lo);
  s.c2 = std::max(s.c2, v_lo);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile.t_at(i) >= t_lo) {
      s.c1 = std::min(s.c1, profile.v()[i]);
      s.c2 = std::max(s.c2, profile.v()[i]);
    }
  }
  s.c1 = std::min(s.c1, profile.constants().v_inf);
  s.c2 = std::max(s.c2, profile.constants().v_inf);
  return s;
}

}  // namespace emden
