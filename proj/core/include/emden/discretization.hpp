#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "emden/glue.hpp"
#include "emden/grid_field.hpp"

namespace emden {

enum class DiscMode { Radial1d, Box3d };

struct DiscretizationOptions {
  DiscMode mode = DiscMode::Radial1d;
  double r_min_factor = 1e-3;  ///< radial: r_min = r_min_factor * eps
  double r_out = 1.0;          ///< radial: outer Dirichlet radius
  std::size_t grid_n = 2001;   ///< radial: nodes; box: nodes per axis
};

/// Node set, Dirichlet mask and quadrature for the two supported layouts.
///
/// radial1d: nodes geometric in r on [r_min, r_out] (uniform in s = log r),
/// both ends Dirichlet, quadrature r^N ds.
/// box3d: uniform grid on a cube, boundary nodes and the nodes carrying a
/// singular point are Dirichlet, quadrature h^3.
struct Discretization {
  DiscMode mode = DiscMode::Radial1d;
  int dimension = 0;

  // radial1d
  std::vector<double> s;
  std::vector<double> r;
  double ds = 0.0;

  // box3d, x fastest
  std::array<std::size_t, 3> shape{0, 0, 0};
  double h = 0.0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  std::vector<long> unknown_of_node;          ///< -1 on Dirichlet nodes
  std::vector<std::size_t> node_of_unknown;
  std::vector<double> quadrature;             ///< per unknown
  std::vector<double> rho;                    ///< per node (0 on singular nodes)

  std::size_t node_count() const { return unknown_of_node.size(); }
  std::size_t unknown_count() const { return node_of_unknown.size(); }
  std::array<double, 3> point(std::size_t node) const;
  /// Coordinates of a node as an N-vector (radial nodes lie on the first axis).
  std::vector<double> coordinates(std::size_t node) const;

  /// Nodal vector from an unknown vector, zero on Dirichlet nodes.
  std::vector<double> to_nodes(const std::vector<double>& unknowns) const;
  std::vector<double> to_unknowns(const std::vector<double>& nodes) const;

  /// Field over all nodes (Dirichlet nodes inactive) tagged with `exponent`.
  GridField field(std::vector<double> node_values, double exponent) const;
};

/// Smoothing radius used for rho: 2R, so rho is the plain distance on every
/// cutoff support.
WeightFunction spec_weight(const SingularSpec& spec);

/// radial1d needs one singular point at the centre of a ball and
/// r_min_factor <= 1e-3; box3d needs N = 3 and a cube. IncompatibleDomain otherwise.
/// For box3d the singular points of `spec` are moved onto the nearest nodes.
Discretization make_discretization(SingularSpec& spec, const DiscretizationOptions& options);

}  // namespace emden
