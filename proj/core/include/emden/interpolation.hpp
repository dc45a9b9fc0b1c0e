#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emden {

/// Quintic Hermite interpolant on [0, h] matching value, first and second
/// derivative at both ends. `x` is the offset from the left node.
double quintic_hermite(double y0, double d0, double s0, double y1, double d1, double s1, double h,
                       double x);

/// Least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t count = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Central difference of order 6 for the first derivative on a uniform grid.
/// Interior nodes only: the first and last three entries are left at zero.
std::vector<double> central_derivative6(std::span<const double> y, double h);

/// n points geometrically spaced from lo to hi inclusive.
std::vector<double> geometric_space(double lo, double hi, std::size_t n);
std::vector<double> linear_space(double lo, double hi, std::size_t n);

}  // namespace emden

namespace emden {

/// Finite-difference weights (Fornberg's recursion) at x0 for derivatives
/// 0..max_order on the stencil `nodes`. Result is indexed [order][node].
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> nodes, int max_order);

/// First and second derivative of samples y on a strictly increasing grid x,
/// five-point stencils inside, six-point one-sided stencils at the ends
/// (five-point when only five samples exist).
struct Derivatives {
  std::vector<double> first;
  std::vector<double> second;
};
Derivatives differentiate(std::span<const double> x, std::span<const double> y);

}  // namespace emden
