#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "emden/errors.hpp"
#include "emden/interpolation.hpp"

using namespace emden;

TEST_CASE("quintic Hermite reproduces quintics") {
  auto f = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x - 0.25 * std::pow(x, 5); };
  auto d = [](double x) { return -2.0 + 1.5 * x * x - 1.25 * std::pow(x, 4); };
  auto s = [](double x) { return 3.0 * x - 5.0 * std::pow(x, 3); };
  const double x0 = 0.3;
  const double h = 0.7;
  for (double t : {0.0, 0.1, 0.35, 0.6, 0.7}) {
    const double got = quintic_hermite(f(x0), d(x0), s(x0), f(x0 + h), d(x0 + h), s(x0 + h), h, t);
    CHECK(got == doctest::Approx(f(x0 + t)).epsilon(1e-13));
  }
}

TEST_CASE("line fit on exact and noisy data") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_stderr == doctest::Approx(0.0).epsilon(1e-12));
  const std::vector<double> yn{1.0, 3.1, 4.9, 7.0};
  CHECK(fit_line(x, yn).slope_stderr > 0.0);
}

TEST_CASE("spacing helpers") {
  const auto g = geometric_space(1e-3, 1.0, 4);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g[1] == doctest::Approx(1e-2));
  CHECK(g.back() == doctest::Approx(1.0));
  const auto l = linear_space(1.0, 2.0, 5);
  CHECK(l[2] == doctest::Approx(1.5));
}

TEST_CASE("Fornberg weights match the textbook stencils") {
  const std::vector<double> nodes{-1.0, 0.0, 1.0};
  const auto w = fd_weights(0.0, nodes, 2);
  CHECK(w[1][0] == doctest::Approx(-0.5));
  CHECK(w[1][2] == doctest::Approx(0.5));
  CHECK(w[2][0] == doctest::Approx(1.0));
  CHECK(w[2][1] == doctest::Approx(-2.0));
}

TEST_CASE("differentiate is fourth order and rejects short grids") {
  auto err = [](std::size_t n) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(i) / (n - 1);
      y[i] = std::sin(3.0 * x[i]);
    }
    const Derivatives d = differentiate(x, y);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      e = std::max(e, std::abs(d.first[i] - 3.0 * std::cos(3.0 * x[i])));
    }
    return e;
  };
  const double order = std::log2(err(41) / err(81));
  CHECK(order > 3.5);
  CHECK_NOTHROW(differentiate(std::vector<double>{0, 1, 2, 3, 4}, std::vector<double>{0, 1, 4, 9, 16}));
  CHECK_THROWS_AS(differentiate(std::vector<double>{0, 1, 2, 3}, std::vector<double>{0, 1, 4, 9}), Error);

  const std::vector<double> six = central_derivative6(std::vector<double>{0, 1, 4, 9, 16, 25, 36, 49}, 1.0);
  CHECK(six[3] == doctest::Approx(6.0));
}
