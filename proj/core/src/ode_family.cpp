#include "emden/ode_family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <lapacke.h>

#include "emden/errors.hpp"
#include "emden/interpolation.hpp"

namespace emden {

namespace odeint = boost::numeric::odeint;

double ChannelSamples::r(std::size_t i) const { return std::exp(s[i]); }

std::vector<double> ChannelSamples::radii() const {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = std::exp(s[i]);
  }
  return out;
}

double channel_potential(const OdeChannel& channel, const RadialProfile& profile, double r) {
  if (channel.mode == PotentialMode::Frozen) {
    return profile.constants().a_p;
  }
  return potential_vp(profile, r);
}

ChannelResidual apply_channel(const OdeChannel& channel, const RadialProfile& profile,
                              const ChannelSamples& w) {
  if (w.s.size() < 5 || w.w.size() != w.s.size()) {
    fail(ErrorCode::GridTooCoarse, "channel operator needs five or more samples");
  }
  for (std::size_t i = 1; i < w.s.size(); ++i) {
    if (!(w.s[i] > w.s[i - 1])) {
      fail(ErrorCode::InvalidArgument, "log-r grid must be strictly increasing");
    }
  }
  const double n = profile.constants().dimension();
  const Derivatives d = differentiate(w.s, w.w);
  ChannelResidual out;
  out.residual.resize(w.s.size());
  out.scale.resize(w.s.size());
  for (std::size_t i = 0; i < w.s.size(); ++i) {
    const double r = std::exp(w.s[i]);
    const double inv_r2 = 1.0 / (r * r);
    const double v = channel_potential(channel, profile, r);
    const double t1 = inv_r2 * d.second[i];
    const double t2 = inv_r2 * (n - 2.0) * d.first[i];
    const double t3 = inv_r2 * (v - channel.lambda) * w.w[i];
    const double t4 = -channel.energy * w.w[i];
    out.residual[i] = t1 + t2 + t3 + t4;
    // V and lambda enter the scale separately so that V = lambda does not
    // cancel the size of the zeroth-order term
    out.scale[i] = std::abs(t1) + std::abs(t2) + inv_r2 * (std::abs(v) + channel.lambda) * std::abs(w.w[i]) +
                   std::abs(t4);
    out.max_abs = std::max(out.max_abs, std::abs(out.residual[i]));
  }
  // Nodes where every term is at round-off level relative to the largest
  // scale carry no information (e.g. w constant with V = lambda).
  const double floor = 1e-12 * *std::max_element(out.scale.begin(), out.scale.end());
  for (std::size_t i = 0; i < w.s.size(); ++i) {
    if (out.scale[i] > floor) {
      out.max_relative = std::max(out.max_relative, std::abs(out.residual[i]) / out.scale[i]);
    }
  }
  return out;
}

namespace {

using State = std::array<double, 2>;

struct ChannelSystem {
  const OdeChannel* channel;
  const RadialProfile* profile;
  double n;
  void operator()(const State& y, State& dy, double s) const {
    const double r = std::exp(s);
    const double v = channel_potential(*channel, *profile, r);
    dy[0] = y[1];
    dy[1] = -(n - 2.0) * y[1] - (v - channel->lambda - channel->energy * r * r) * y[0];
  }
};

struct GridSpec {
  long k_lo;
  long k_hi;
};

GridSpec log_grid(double r_min, double r_max, double ds) {
  return {static_cast<long>(std::floor(std::log(r_min) / ds + 1e-9)),
          static_cast<long>(std::ceil(std::log(r_max) / ds - 1e-9))};
}

double default_r_min(const OdeChannel& channel, const RadialProfile& profile) {
  if (channel.mode == PotentialMode::Frozen) {
    return 1e-3;
  }
  // Below the end of the table V_p equals A_p exactly, so the leading Frobenius
  // terms become exact there.
  return std::min(1e-8, std::exp(-(profile.t_end() + 3.0)));
}

double default_r_max(const OdeChannel& channel) {
  if (channel.energy > 0.0) {
    return std::max(50.0, 30.0 / std::sqrt(channel.energy));
  }
  return 1e4;
}

// Integrates node to node in s, keeping a running log-scale so that solutions
// growing like e^{r sqrt(E)} or r^{gamma} stay representable.
ChannelSamples shoot(const OdeChannel& channel, const RadialProfile& profile, GridSpec grid,
                     double ds, double tol, State seed, bool inward) {
  const ChannelSystem sys{&channel, &profile, static_cast<double>(profile.constants().dimension())};
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol);
  const std::size_t count = static_cast<std::size_t>(grid.k_hi - grid.k_lo + 1);
  std::vector<double> raw(count), raw_s(count), log_scale(count);
  State y = seed;
  double scale = 0.0;
  auto store = [&](long k) {
    const std::size_t i = static_cast<std::size_t>(k - grid.k_lo);
    raw[i] = y[0];
    raw_s[i] = y[1];
    log_scale[i] = scale;
  };
  auto rescale = [&]() {
    const double m = std::max(std::abs(y[0]), std::abs(y[1]));
    if (m > 1e100 || (m < 1e-100 && m > 0.0)) {
      y[0] /= m;
      y[1] /= m;
      scale += std::log(m);
    }
  };
  if (inward) {
    store(grid.k_hi);
    for (long k = grid.k_hi; k > grid.k_lo; --k) {
      const double s = ds * static_cast<double>(k);
      odeint::integrate_adaptive(stepper, sys, y, s, ds * static_cast<double>(k - 1), -ds);
      rescale();
      store(k - 1);
    }
  } else {
    store(grid.k_lo);
    for (long k = grid.k_lo; k < grid.k_hi; ++k) {
      const double s = ds * static_cast<double>(k);
      odeint::integrate_adaptive(stepper, sys, y, s, ds * static_cast<double>(k + 1), ds);
      rescale();
      store(k + 1);
    }
  }
  const std::size_t i1 = static_cast<std::size_t>(-grid.k_lo);
  const double w1 = raw[i1];
  if (!(std::abs(w1) > 0.0) || !std::isfinite(w1)) {
    fail(ErrorCode::NormalizationFailure, "channel solution vanishes at r = 1");
  }
  ChannelSamples out;
  out.s.resize(count);
  out.w.resize(count);
  out.w_s.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = std::exp(log_scale[i] - log_scale[i1]) / w1;
    out.s[i] = ds * static_cast<double>(grid.k_lo + static_cast<long>(i));
    out.w[i] = raw[i] * f;
    out.w_s[i] = raw_s[i] * f;
  }
  return out;
}

void check_channel(const OdeChannel& channel) {
  if (!(channel.energy >= 0.0) || !std::isfinite(channel.energy)) {
    fail(ErrorCode::InvalidArgument, "channel energy E must be finite and >= 0");
  }
  if (!(channel.lambda >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "channel eigenvalue lambda must be >= 0");
  }
}

}  // namespace

ChannelSamples decaying_solution(const OdeChannel& channel, const RadialProfile& profile,
                                 const ShootingOptions& options) {
  check_channel(channel);
  const DerivedConstants& c = profile.constants();
  const double n = c.dimension();
  const double r_min = options.r_min > 0.0 ? options.r_min : default_r_min(channel, profile);
  const double r_max = options.r_max > 0.0 ? options.r_max : default_r_max(channel);
  if (r_min > 0.01) {
    fail(ErrorCode::InvalidArgument, "decaying_solution needs r_min <= 0.01");
  }
  if (channel.energy > 0.0 && r_max < default_r_max(channel) * (1.0 - 1e-12)) {
    fail(ErrorCode::InvalidArgument, "decaying_solution needs r_max >= max(50, 30/sqrt(E))");
  }
  const GridSpec grid = log_grid(r_min, r_max, options.ds);
  const double r_start = std::exp(options.ds * static_cast<double>(grid.k_hi));
  State seed{1.0, 0.0};
  if (channel.energy > 0.0) {
    seed[1] = -r_start * std::sqrt(channel.energy) - 0.5 * (n - 1.0);
  } else if (channel.mode == PotentialMode::Full) {
    seed[1] = indicial_roots(c, channel.lambda).tilde_gamma_minus;
  } else {
    const IndicialRoots roots = indicial_roots(c, channel.lambda);
    if (!roots.real()) {
      fail(ErrorCode::InvalidArgument,
           "frozen channel with E = 0 and complex roots has no distinguished decaying solution");
    }
    seed[1] = roots.gamma_minus.real();
  }
  return shoot(channel, profile, grid, options.ds, options.tol, seed, true);
}

ChannelSamples regular_solution(const OdeChannel& channel, const RadialProfile& profile,
                                const ShootingOptions& options) {
  check_channel(channel);
  const IndicialRoots roots = indicial_roots(profile.constants(), channel.lambda);
  if (!roots.real()) {
    fail(ErrorCode::RootsTooClose, "regular solution needs real indicial roots at r = 0");
  }
  const double r_min = options.r_min > 0.0 ? options.r_min : default_r_min(channel, profile);
  const double r_max = options.r_max > 0.0 ? options.r_max : default_r_max(channel);
  const GridSpec grid = log_grid(r_min, r_max, options.ds);
  const State seed{1.0, roots.gamma_plus.real()};
  return shoot(channel, profile, grid, options.ds, options.tol, seed, false);
}

ChannelSamples boundary_value_solution(const OdeChannel& channel, const RadialProfile& profile,
                                       double R, double ds) {
  check_channel(channel);
  if (!(R > 1.0) || !(ds > 0.0)) {
    fail(ErrorCode::InvalidArgument, "boundary value problem needs R > 1 and ds > 0");
  }
  const double n = profile.constants().dimension();
  const std::size_t m = static_cast<std::size_t>(std::ceil(std::log(R) / ds));
  const double h = std::log(R) / static_cast<double>(m);
  // Unknowns w_1 .. w_{m-1}; w_0 = 1, w_m = 0.
  const std::size_t k = m - 1;
  std::vector<double> lower(k > 0 ? k - 1 : 0), diag(k), upper(k > 0 ? k - 1 : 0), rhs(k, 0.0);
  const double cm = 1.0 / (h * h) - 0.5 * (n - 2.0) / h;
  const double cp = 1.0 / (h * h) + 0.5 * (n - 2.0) / h;
  for (std::size_t i = 0; i < k; ++i) {
    const double s = h * static_cast<double>(i + 1);
    const double r = std::exp(s);
    diag[i] = -2.0 / (h * h) + channel_potential(channel, profile, r) - channel.lambda -
              channel.energy * r * r;
    if (i > 0) {
      lower[i - 1] = cm;
    }
    if (i + 1 < k) {
      upper[i] = cp;
    }
  }
  rhs[0] -= cm * 1.0;
  const lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(k), 1, lower.data(),
                                        diag.data(), upper.data(), rhs.data(), static_cast<lapack_int>(k));
  if (info != 0) {
    fail(ErrorCode::SingularSystem, "tridiagonal boundary value system is singular");
  }
  ChannelSamples out;
  out.s.resize(m + 1);
  out.w.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    out.s[i] = h * static_cast<double>(i);
  }
  out.w[0] = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    out.w[i + 1] = rhs[i];
  }
  out.w[m] = 0.0;
  return out;
}

FrobeniusFit frobenius_coefficients(const ChannelSamples& w, const IndicialRoots& roots,
                                    const FrobeniusOptions& options) {
  if (!roots.real()) {
    fail(ErrorCode::RootsTooClose, "indicial roots are complex");
  }
  const double gm = roots.gamma_minus.real();
  const double gp = roots.gamma_plus.real();
  const double gap = gp - gm;
  if (gap < options.min_gap) {
    std::ostringstream msg;
    msg << "indicial roots differ by " << gap << " < " << options.min_gap;
    fail(ErrorCode::RootsTooClose, msg.str());
  }
  FrobeniusFit fit;
  fit.gamma_minus = gm;
  fit.gamma_plus = gp;
  fit.resonant = gap >= 0.5 && std::abs(gap - std::round(gap)) < 1e-6;

  const double s_min = w.s.front();
  const double width = options.window_decades * std::log(10.0);
  double best = std::numeric_limits<double>::infinity();
  for (double s_hi = std::log(options.r_hi); s_hi - width >= s_min - 1e-12; s_hi -= std::log(10.0)) {
    const double s_lo = s_hi - width;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < w.s.size(); ++i) {
      if (w.s[i] >= s_lo - 1e-12 && w.s[i] <= s_hi + 1e-12) {
        idx.push_back(i);
      }
    }
    if (idx.size() < 8) {
      continue;
    }
    // Columns scaled to unit max on the window before the QR solve.
    const std::size_t m = idx.size();
    std::vector<double> a(2 * m), b(m);
    double c0 = 0.0, c1 = 0.0, wmax = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double s = w.s[idx[j]];
      a[j] = std::exp(gm * s);
      a[m + j] = std::exp(gp * s);
      b[j] = w.w[idx[j]];
      c0 = std::max(c0, std::abs(a[j]));
      c1 = std::max(c1, std::abs(a[m + j]));
      wmax = std::max(wmax, std::abs(b[j]));
    }
    if (!(wmax > 0.0)) {
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) {
      a[j] /= c0;
      a[m + j] /= c1;
      b[j] /= wmax;
    }
    const std::vector<double> a_copy = a;
    const std::vector<double> b_copy = b;
    const lapack_int info = LAPACKE_dgels(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(m), 2, 1,
                                          a.data(), static_cast<lapack_int>(m), b.data(),
                                          static_cast<lapack_int>(m));
    if (info != 0) {
      continue;
    }
    const double x0 = b[0];
    const double x1 = b[1];
    double resid = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      resid = std::max(resid, std::abs(b_copy[j] - x0 * a_copy[j] - x1 * a_copy[m + j]));
    }
    if (resid < best) {
      best = resid;
      fit.a0 = x0 * wmax / c0;
      fit.b0 = x1 * wmax / c1;
      fit.r_lo = std::exp(s_lo);
      fit.r_hi = std::exp(s_hi);
      fit.fit_residual = resid;
    }
    if (resid < options.threshold) {
      return fit;
    }
  }
  std::ostringstream msg;
  msg << "no Frobenius window reached fit residual " << options.threshold << " (best " << best << ")";
  fail(ErrorCode::FitUnreliable, msg.str());
}

std::string to_string(CellStatus status) {
  switch (status) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Resonant: return "resonant";
    case CellStatus::Invalid: return "invalid";
  }
  return "invalid";
}

A0Map a0_map(int dimension, double lambda, const std::vector<double>& p_grid,
             const std::vector<double>& e_grid, const ProfileOptions& profile_options,
             const ShootingOptions& shooting, const FrobeniusOptions& frobenius) {
  A0Map map;
  map.dimension = dimension;
  map.lambda = lambda;
  map.p_grid = p_grid;
  map.e_grid = e_grid;
  for (double p : p_grid) {
    std::optional<RadialProfile> profile;
    std::string profile_error;
    try {
      profile = compute_profile(derive_constants({dimension, p}), profile_options);
    } catch (const Error& e) {
      profile_error = e.what();
    }
    for (double e_val : e_grid) {
      A0Cell cell;
      cell.p = p;
      cell.energy = e_val;
      if (!profile) {
        cell.status = CellStatus::Invalid;
        cell.message = profile_error;
        map.cells.push_back(cell);
        continue;
      }
      try {
        const OdeChannel channel{lambda, e_val, PotentialMode::Full};
        const ChannelSamples w = decaying_solution(channel, *profile, shooting);
        const FrobeniusFit fit =
            frobenius_coefficients(w, indicial_roots(profile->constants(), lambda), frobenius);
        cell.a0 = fit.a0;
        cell.fit_residual = fit.fit_residual;
        // An even-integer root gap with E > 0 lets the E r^2 term produce a
        // logarithmic Frobenius term; the value is still reported.
        const double gap = fit.gamma_plus - fit.gamma_minus;
        const bool even = fit.resonant && static_cast<long>(std::lround(gap)) % 2 == 0;
        cell.status = (even && e_val > 0.0) ? CellStatus::Resonant : CellStatus::Ok;
      } catch (const Error& e) {
        cell.status = CellStatus::Invalid;
        cell.message = e.what();
      }
      map.cells.push_back(cell);
    }
  }
  return map;
}

double a0_from_kernel_mode(const RadialProfile& profile) {
  const DerivedConstants& c = profile.constants();
  return c.a * c.v_inf / (c.a * profile.value(0.0) + profile.derivative(0.0));
}

HardyResult hardy_check(const ChannelSamples& w, int dimension, double tail_tol) {
  const std::size_t n = w.s.size();
  if (n < 5 || w.w.size() != n) {
    fail(ErrorCode::GridTooCoarse, "Hardy check needs five or more samples");
  }
  std::vector<double> ws;
  if (w.w_s.size() == n) {
    ws = w.w_s;
  } else {
    ws = differentiate(w.s, w.w).first;
  }
  std::vector<double> f1(n), f2(n);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = std::exp((dimension - 2.0) * w.s[i]);
    f1[i] = weight * w.w[i] * w.w[i];
    f2[i] = weight * ws[i] * ws[i];
    m1 = std::max(m1, f1[i]);
    m2 = std::max(m2, f2[i]);
  }
  auto tail_ok = [&](const std::vector<double>& f, double m) {
    return m == 0.0 || (f.front() <= tail_tol * m && f.back() <= tail_tol * m);
  };
  if (!tail_ok(f1, m1) || !tail_ok(f2, m2)) {
    fail(ErrorCode::TailNotDecayed, "Hardy integrands are not negligible at the ends of the grid");
  }
  HardyResult out;
  for (std::size_t i = 1; i < n; ++i) {
    const double h = w.s[i] - w.s[i - 1];
    out.lhs += 0.5 * h * (f1[i] + f1[i - 1]);
    out.rhs += 0.5 * h * (f2[i] + f2[i - 1]);
  }
  out.rhs *= 4.0 / ((dimension - 2.0) * (dimension - 2.0));
  out.ok = out.lhs <= out.rhs * (1.0 + 1e-6);
  return out;
}

}  // namespace emden
