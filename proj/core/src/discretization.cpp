#include "emden/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "emden/errors.hpp"
#include "emden/interpolation.hpp"

namespace emden {

std::array<double, 3> Discretization::point(std::size_t node) const {
  if (mode == DiscMode::Radial1d) {
    return {r[node], 0.0, 0.0};
  }
  const std::size_t nx = shape[0];
  const std::size_t ny = shape[1];
  return {origin[0] + h * static_cast<double>(node % nx),
          origin[1] + h * static_cast<double>((node / nx) % ny),
          origin[2] + h * static_cast<double>(node / (nx * ny))};
}

std::vector<double> Discretization::coordinates(std::size_t node) const {
  std::vector<double> x(static_cast<std::size_t>(dimension), 0.0);
  const auto p = point(node);
  for (int k = 0; k < dimension && k < 3; ++k) {
    x[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)];
  }
  return x;
}

std::vector<double> Discretization::to_nodes(const std::vector<double>& unknowns) const {
  std::vector<double> out(node_count(), 0.0);
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    out[node_of_unknown[k]] = unknowns[k];
  }
  return out;
}

std::vector<double> Discretization::to_unknowns(const std::vector<double>& nodes) const {
  std::vector<double> out(unknown_count());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = nodes[node_of_unknown[k]];
  }
  return out;
}

GridField Discretization::field(std::vector<double> node_values, double exponent) const {
  GridField f;
  f.layout = mode == DiscMode::Radial1d ? FieldLayout::Radial : FieldLayout::Box;
  if (mode == DiscMode::Radial1d) {
    f.coords = r;
  } else {
    f.coords.resize(3 * node_count());
    for (std::size_t i = 0; i < node_count(); ++i) {
      const auto p = point(i);
      f.coords[3 * i] = p[0];
      f.coords[3 * i + 1] = p[1];
      f.coords[3 * i + 2] = p[2];
    }
    f.shape = shape;
    f.spacing = h;
  }
  f.rho = rho;
  f.values = std::move(node_values);
  f.active.resize(node_count());
  for (std::size_t i = 0; i < node_count(); ++i) {
    f.active[i] = unknown_of_node[i] >= 0 ? 1 : 0;
  }
  f.weight_exponent = exponent;
  return f;
}

WeightFunction spec_weight(const SingularSpec& spec) {
  std::vector<std::array<double, 3>> pts;
  for (const auto& x : spec.points) {
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < x.size() && k < 3; ++k) {
      p[k] = x[k];
    }
    pts.push_back(p);
  }
  return WeightFunction(std::move(pts), std::min(spec.dimension, 3), 2.0 * spec.R);
}

namespace {

[[noreturn]] void incompatible(const std::string& what) { fail(ErrorCode::IncompatibleDomain, what); }

Discretization radial(const SingularSpec& spec, const DiscretizationOptions& options) {
  if (spec.count() != 1) {
    incompatible("radial1d handles exactly one singular point");
  }
  if (spec.domain.kind != DomainKind::Ball) {
    incompatible("radial1d needs a ball domain");
  }
  for (int k = 0; k < spec.dimension; ++k) {
    if (std::abs(spec.points[0][k] - spec.domain.center[k]) > 1e-14) {
      incompatible("radial1d needs the singular point at the centre of the ball");
    }
  }
  if (!(options.r_out > 2.0 * spec.R) || options.r_out > spec.domain.radius * (1.0 + 1e-14)) {
    incompatible("radial1d needs 2R < r_out <= domain radius");
  }
  if (!(options.r_min_factor > 0.0 && options.r_min_factor <= 1e-3)) {
    incompatible("radial1d needs 0 < r_min_factor <= 1e-3");
  }
  if (options.grid_n < 5) {
    fail(ErrorCode::GridTooCoarse, "radial1d needs five or more nodes");
  }
  Discretization d;
  d.mode = DiscMode::Radial1d;
  d.dimension = spec.dimension;
  const double r_min = options.r_min_factor * spec.epsilons[0];
  d.r = geometric_space(r_min, options.r_out, options.grid_n);
  d.ds = (std::log(options.r_out) - std::log(r_min)) / static_cast<double>(options.grid_n - 1);
  d.s.resize(d.r.size());
  for (std::size_t i = 0; i < d.r.size(); ++i) {
    d.s[i] = std::log(d.r[i]);
  }
  const WeightFunction w = spec_weight(spec);
  d.rho.resize(d.r.size());
  d.unknown_of_node.assign(d.r.size(), -1);
  for (std::size_t i = 0; i < d.r.size(); ++i) {
    d.rho[i] = w.of_distance(d.r[i]);
    if (i > 0 && i + 1 < d.r.size()) {
      d.unknown_of_node[i] = static_cast<long>(d.node_of_unknown.size());
      d.node_of_unknown.push_back(i);
      d.quadrature.push_back(std::pow(d.r[i], d.dimension) * d.ds);
    }
  }
  return d;
}

Discretization box(SingularSpec& spec, const DiscretizationOptions& options) {
  if (spec.dimension != 3) {
    incompatible("box3d is implemented for N = 3 only");
  }
  if (spec.domain.kind != DomainKind::Box) {
    incompatible("box3d needs a box domain");
  }
  const double width = spec.domain.hi[0] - spec.domain.lo[0];
  for (int k = 1; k < 3; ++k) {
    if (std::abs(spec.domain.hi[k] - spec.domain.lo[k] - width) > 1e-12 * width) {
      incompatible("box3d needs a cube");
    }
  }
  const std::size_t n = options.grid_n;
  if (n < 5) {
    fail(ErrorCode::GridTooCoarse, "box3d needs five or more nodes per axis");
  }
  Discretization d;
  d.mode = DiscMode::Box3d;
  d.dimension = 3;
  d.shape = {n, n, n};
  d.h = width / static_cast<double>(n - 1);
  d.origin = {spec.domain.lo[0], spec.domain.lo[1], spec.domain.lo[2]};

  std::vector<std::size_t> singular_nodes;
  for (auto& x : spec.points) {
    std::array<long, 3> idx{};
    for (int k = 0; k < 3; ++k) {
      idx[k] = std::lround((x[k] - d.origin[k]) / d.h);
      x[k] = d.origin[k] + d.h * static_cast<double>(idx[k]);
    }
    singular_nodes.push_back(static_cast<std::size_t>(idx[0]) +
                             n * (static_cast<std::size_t>(idx[1]) + n * static_cast<std::size_t>(idx[2])));
  }
  validate(spec);

  const WeightFunction w = spec_weight(spec);
  const std::size_t total = n * n * n;
  d.rho.resize(total);
  d.unknown_of_node.assign(total, -1);
  const double cell = d.h * d.h * d.h;
  for (std::size_t node = 0; node < total; ++node) {
    const std::size_t i = node % n;
    const std::size_t j = (node / n) % n;
    const std::size_t k = node / (n * n);
    d.rho[node] = w(d.point(node));
    const bool boundary = i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1;
    bool singular = false;
    for (std::size_t sn : singular_nodes) {
      singular = singular || sn == node;
    }
    if (singular) {
      d.rho[node] = 0.0;
    }
    if (!boundary && !singular) {
      d.unknown_of_node[node] = static_cast<long>(d.node_of_unknown.size());
      d.node_of_unknown.push_back(node);
      d.quadrature.push_back(cell);
    }
  }
  return d;
}

}  // namespace

Discretization make_discretization(SingularSpec& spec, const DiscretizationOptions& options) {
  validate(spec);
  return options.mode == DiscMode::Radial1d ? radial(spec, options) : box(spec, options);
}

}  // namespace emden
