#include "emden/weighted_norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "emden/errors.hpp"

namespace emden {

namespace {

void require_off_singular_set(const GridField& field) {
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field.is_active(i) && !(field.rho[i] > 0.0)) {
      std::ostringstream msg;
      msg << "node " << i << " has rho = " << field.rho[i];
      fail(ErrorCode::NodeOnSingularSet, msg.str());
    }
  }
}

// Node closest to coordinate target on a sorted radial grid.
std::size_t nearest_radial(const std::vector<double>& r, double target) {
  const auto it = std::lower_bound(r.begin(), r.end(), target);
  if (it == r.begin()) {
    return 0;
  }
  if (it == r.end()) {
    return r.size() - 1;
  }
  const std::size_t hi = static_cast<std::size_t>(it - r.begin());
  return (target - r[hi - 1] < r[hi] - target) ? hi - 1 : hi;
}

}  // namespace

double weighted_sup(const GridField& field, double gamma) {
  require_off_singular_set(field);
  double best = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field.is_active(i)) {
      best = std::max(best, std::pow(field.rho[i], -gamma) * std::abs(field.values[i]));
    }
  }
  return best;
}

double weighted_holder(const GridField& field, double gamma, double alpha, const HolderOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorCode::InvalidArgument, "Hoelder exponent must lie in (0, 1)");
  }
  require_off_singular_set(field);
  const std::size_t n = field.size();
  if (n < 2) {
    return 0.0;
  }
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    if (field.is_active(i)) {
      nodes.push_back(i);
    }
  }
  if (nodes.size() < 2) {
    return 0.0;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  std::uniform_int_distribution<int> level(1, std::max(1, options.dyadic_levels));
  std::uniform_int_distribution<int> axis(0, 2);
  std::bernoulli_distribution sign(0.5);

  auto wbar = [&](std::size_t i) { return std::pow(field.rho[i], -gamma) * field.values[i]; };
  double best = 0.0;
  for (std::size_t s = 0; s < options.pair_budget; ++s) {
    const std::size_t i = nodes[pick(rng)];
    const double sep = field.rho[i] * std::ldexp(1.0, -level(rng));
    const bool up = sign(rng);
    std::size_t j = i;
    if (field.layout == FieldLayout::Radial) {
      j = nearest_radial(field.coords, field.coords[i] + (up ? sep : -sep));
    } else {
      const auto [nx, ny, nz] = field.shape;
      const long m = std::max(1L, std::lround(sep / field.spacing));
      long idx[3] = {static_cast<long>(i % nx), static_cast<long>((i / nx) % ny),
                     static_cast<long>(i / (nx * ny))};
      const long lim[3] = {static_cast<long>(nx), static_cast<long>(ny), static_cast<long>(nz)};
      const int ax = axis(rng);
      idx[ax] += up ? m : -m;
      if (idx[ax] < 0 || idx[ax] >= lim[ax]) {
        continue;
      }
      j = static_cast<std::size_t>(idx[0] + lim[0] * (idx[1] + lim[1] * idx[2]));
    }
    if (j == i || !field.is_active(j)) {
      continue;
    }
    const double d = field.distance(i, j);
    if (!(d > 0.0)) {
      continue;
    }
    const double q = std::pow(field.rho[i] + field.rho[j], alpha) * std::abs(wbar(i) - wbar(j)) /
                     std::pow(d, alpha);
    best = std::max(best, q);
  }
  return best;
}

WeightedNormReport weighted_norm(const GridField& field, double gamma, double alpha,
                                 const HolderOptions& options) {
  WeightedNormReport out;
  out.gamma = gamma;
  out.alpha = alpha;
  out.sup_part = weighted_sup(field, gamma);
  out.holder_part = weighted_holder(field, gamma, alpha, options);
  return out;
}

PowerNormReport power_norm_check(const GridField& field, double gamma, double p, double eta) {
  if (!(gamma > -2.0 / (p - 1.0))) {
    std::ostringstream msg;
    msg << "gamma = " << gamma << " must exceed -2/(p-1) = " << -2.0 / (p - 1.0);
    fail(ErrorCode::ExponentOrdering, msg.str());
  }
  require_off_singular_set(field);
  std::vector<double> powered(field.size());
  double rho_max = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    powered[i] = std::pow(std::abs(field.values[i]), p);
    if (field.is_active(i)) {
      rho_max = std::max(rho_max, field.rho[i]);
    }
  }
  PowerNormReport out;
  out.sup_w = weighted_sup(field, gamma);
  out.lhs = weighted_sup(field.with_values(std::move(powered), gamma - 2.0), gamma - 2.0);
  const double e = (p - 1.0) * gamma + 2.0;
  out.threshold = std::pow(eta / std::pow(rho_max, e), 1.0 / (p - 1.0));
  out.applicable = out.sup_w <= out.threshold;
  out.margin = eta * out.sup_w - out.lhs;
  out.ok = !out.applicable || out.lhs <= eta * out.sup_w * (1.0 + 1e-12);
  return out;
}

}  // namespace emden
