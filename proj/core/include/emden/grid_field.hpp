#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace emden {

enum class FieldLayout { Radial, Box };

/// Regularized distance to a finite singular set. Equal to min_i |x - x_i| up
/// to sigma, a C^2 polynomial blend on [sigma, 2 sigma], and 1.5 sigma beyond.
class WeightFunction {
 public:
  WeightFunction(std::vector<std::array<double, 3>> points, int dimension, double sigma);
  /// Single singular point at the origin (radial use).
  static WeightFunction radial(double sigma);

  double operator()(const std::array<double, 3>& x) const;
  /// rho as a function of the distance to the nearest singular point.
  double of_distance(double d) const;
  double sigma() const { return sigma_; }
  double distance(const std::array<double, 3>& x) const;

 private:
  std::vector<std::array<double, 3>> points_;
  int dimension_ = 3;
  double sigma_ = 1.0;
};

/// Scalar field on a radial grid (coordinate r) or a uniform Cartesian box,
/// carrying the weight rho at each node and the exponent it is measured with.
struct GridField {
  FieldLayout layout = FieldLayout::Radial;
  std::vector<double> coords;  ///< r per node (radial) or x, y, z per node (box)
  std::vector<double> rho;
  std::vector<double> values;
  std::vector<unsigned char> active;  ///< empty means every node is active
  std::array<std::size_t, 3> shape{0, 0, 0};  ///< box only, x fastest
  double spacing = 0.0;                       ///< box only
  double weight_exponent = 0.0;

  std::size_t size() const { return values.size(); }
  bool is_active(std::size_t i) const { return active.empty() || active[i] != 0; }
  std::array<double, 3> point(std::size_t i) const;
  double distance(std::size_t i, std::size_t j) const;

  /// Same nodes and weights, new values.
  GridField with_values(std::vector<double> v, double exponent) const;
};

GridField make_radial_field(std::vector<double> r, std::vector<double> rho, std::vector<double> values,
                            double weight_exponent);

}  // namespace emden
