#include "emden/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emden/errors.hpp"

namespace emden {

WeightFunction::WeightFunction(std::vector<std::array<double, 3>> points, int dimension, double sigma)
    : points_(std::move(points)), dimension_(dimension), sigma_(sigma) {
  if (points_.empty()) {
    fail(ErrorCode::InvalidArgument, "weight function needs at least one singular point");
  }
  if (!(sigma_ > 0.0)) {
    fail(ErrorCode::InvalidArgument, "weight function smoothing radius must be positive");
  }
}

WeightFunction WeightFunction::radial(double sigma) {
  return WeightFunction({{0.0, 0.0, 0.0}}, 1, sigma);
}

double WeightFunction::distance(const std::array<double, 3>& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points_) {
    double d2 = 0.0;
    for (int k = 0; k < dimension_; ++k) {
      d2 += (x[k] - p[k]) * (x[k] - p[k]);
    }
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

double WeightFunction::of_distance(double d) const {
  if (d <= sigma_) {
    return d;
  }
  if (d >= 2.0 * sigma_) {
    return 1.5 * sigma_;
  }
  const double tau = (d - sigma_) / sigma_;
  return sigma_ + sigma_ * (tau - tau * tau * tau + 0.5 * tau * tau * tau * tau);
}

double WeightFunction::operator()(const std::array<double, 3>& x) const {
  return of_distance(distance(x));
}

std::array<double, 3> GridField::point(std::size_t i) const {
  if (layout == FieldLayout::Radial) {
    return {coords[i], 0.0, 0.0};
  }
  return {coords[3 * i], coords[3 * i + 1], coords[3 * i + 2]};
}

double GridField::distance(std::size_t i, std::size_t j) const {
  if (layout == FieldLayout::Radial) {
    return std::abs(coords[i] - coords[j]);
  }
  const auto a = point(i);
  const auto b = point(j);
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

GridField GridField::with_values(std::vector<double> v, double exponent) const {
  if (v.size() != values.size()) {
    fail(ErrorCode::InvalidArgument, "replacement values do not match the grid");
  }
  GridField out = *this;
  out.values = std::move(v);
  out.weight_exponent = exponent;
  return out;
}

GridField make_radial_field(std::vector<double> r, std::vector<double> rho, std::vector<double> values,
                            double weight_exponent) {
  if (r.size() != rho.size() || r.size() != values.size()) {
    fail(ErrorCode::InvalidArgument, "radial field arrays differ in length");
  }
  GridField f;
  f.layout = FieldLayout::Radial;
  f.coords = std::move(r);
  f.rho = std::move(rho);
  f.values = std::move(values);
  f.weight_exponent = weight_exponent;
  return f;
}

}  // namespace emden
