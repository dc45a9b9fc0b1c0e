#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "emden/errors.hpp"
#include "emden/params.hpp"
#include "support/oracles.hpp"

using namespace emden;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("validate accepts the open subcritical interval only") {
  CHECK_NOTHROW(validate({5, 2.0}));
  CHECK(lower_exponent(5) == doctest::Approx(5.0 / 3.0));
  CHECK(upper_exponent(5) == doctest::Approx(7.0 / 3.0));
  CHECK(code_of([] { validate({5, 7.0 / 3.0}); }) == ErrorCode::SupercriticalExponent);
  CHECK(code_of([] { validate({3, 3.0}); }) == ErrorCode::SubthresholdExponent);
  CHECK(code_of([] { validate({2, 3.0}); }) == ErrorCode::DimensionTooSmall);
}

TEST_CASE("derived constants for the three reference cases") {
  struct Case {
    int n;
    double p, v_inf, a_p, a, mu;
  };
  for (const Case& c : {Case{5, 2.0, 2.0, 4.0, 2.0, 1.0},
                        Case{3, 4.0, std::cbrt(2.0 / 9.0), 8.0 / 9.0, 2.0 / 3.0, 1.0 / 3.0},
                        Case{4, 2.5, std::pow(8.0 / 9.0, 2.0 / 3.0), 20.0 / 9.0, 4.0 / 3.0, 2.0 / 3.0}}) {
    const DerivedConstants d = derive_constants({c.n, c.p});
    CHECK(d.v_inf == doctest::Approx(c.v_inf).epsilon(1e-14));
    CHECK(d.v_inf == doctest::Approx(oracle::v_inf(c.n, c.p)).epsilon(1e-14));
    CHECK(d.a_p == doctest::Approx(c.a_p).epsilon(1e-14));
    CHECK(d.a == doctest::Approx(c.a).epsilon(1e-14));
    CHECK(d.mu_plus == doctest::Approx(c.mu).epsilon(1e-14));
    CHECK(d.a_p == doctest::Approx(c.p * std::pow(d.v_inf, c.p - 1.0)).epsilon(1e-14));
    CHECK(d.a_p > 0.0);
    CHECK(d.a_p < (c.n * c.n - 4.0) / 4.0);
  }
  CHECK(derive_constants({3, 4.0}).v_inf == doctest::Approx(0.605707).epsilon(1e-6));
}

TEST_CASE("sphere eigenvalues") {
  CHECK(sphere_eigenvalue(0, 5) == 0.0);
  CHECK(sphere_eigenvalue(1, 5) == 4.0);
  CHECK(sphere_eigenvalue(2, 5) == 10.0);
}

TEST_CASE("indicial roots at the origin and at infinity") {
  const DerivedConstants c = derive_constants({5, 2.0});
  const IndicialRoots one = indicial_roots(c, 4.0);
  CHECK(one.real());
  CHECK(one.gamma_minus.real() == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(std::abs(one.gamma_plus.real()) < 1e-14);

  const IndicialRoots zero = indicial_roots(c, 0.0);
  CHECK_FALSE(zero.real());
  CHECK(zero.gamma_minus.real() == doctest::Approx(-1.5));
  CHECK(std::abs(zero.gamma_minus.imag()) == doctest::Approx(std::sqrt(7.0) / 2.0));
  CHECK(zero.gamma_plus.real() == doctest::Approx(-1.5));
  CHECK(zero.tilde_gamma_plus == doctest::Approx(0.0));
  CHECK(zero.tilde_gamma_minus == doctest::Approx(-3.0));
  CHECK(c.critical_flag);

  // gamma solves gamma^2 + (N-2) gamma + A_p - lambda = 0 on both branches.
  for (double lambda : {0.0, 4.0, 10.0}) {
    const IndicialRoots r = indicial_roots(c, lambda);
    for (auto g : {r.gamma_minus, r.gamma_plus}) {
      CHECK(std::abs(g * g + 3.0 * g + c.a_p - lambda) < 1e-12);
    }
  }
}

TEST_CASE("numerology over random admissible (N, p)") {
  const auto u = oracle::uniform(11, 400, 0.0, 1.0);
  for (std::size_t k = 0; k < 200; ++k) {
    const int n = 3 + static_cast<int>(u[2 * k] * 6.0);
    const double lo = lower_exponent(n);
    const double hi = upper_exponent(n);
    const double p = lo + (0.001 + 0.998 * u[2 * k + 1]) * (hi - lo);
    const DerivedConstants c = derive_constants({n, p});
    const IndicialRoots r = indicial_roots_for_degree(c, 1);
    CHECK(r.gamma_minus.real() == doctest::Approx(-2.0 / (p - 1.0) - 1.0).epsilon(1e-10));
    CHECK(2.0 - n < -2.0 / (p - 1.0));
    CHECK(-2.0 / (p - 1.0) < (2.0 - n) / 2.0);
    CHECK(c.a_p > 0.0);
    CHECK(c.a_p < (n * n - 4.0) / 4.0);
  }
}

TEST_CASE("monotonicity in p and the transition exponent") {
  for (int n = 3; n <= 8; ++n) {
    const double lo = lower_exponent(n);
    const double hi = upper_exponent(n);
    double prev_a = -1e300;
    double prev_ap = -1e300;
    for (int i = 1; i < 50; ++i) {
      const double p = lo + (hi - lo) * i / 50.0;
      const DerivedConstants c = derive_constants({n, p});
      CHECK(-2.0 / (p - 1.0) > prev_a);
      CHECK(c.a_p > prev_ap);
      prev_a = -2.0 / (p - 1.0);
      prev_ap = c.a_p;
    }
    const double ps = critical_exponent(n);
    CHECK(ps == doctest::Approx(oracle::critical_exponent(n)).epsilon(1e-10));
    const DerivedConstants at = derive_constants({n, ps});
    CHECK(std::abs(0.25 * (n - 2.0) * (n - 2.0) - at.a_p) <= 1e-10);

    // real roots just above N/(N-2), complex just below (N+2)/(N-2)
    const DerivedConstants low = derive_constants({n, lo + 1e-3 * (hi - lo)});
    const IndicialRoots rl = indicial_roots(low, 0.0);
    CHECK(rl.real());
    CHECK(rl.gamma_minus.real() > -2.0 / (low.exponent() - 1.0));
    CHECK(rl.gamma_minus.real() < (2.0 - n) / 2.0);
    const DerivedConstants high = derive_constants({n, hi - 1e-3 * (hi - lo)});
    const IndicialRoots rh = indicial_roots(high, 0.0);
    CHECK_FALSE(rh.real());
    CHECK(rh.gamma_minus.real() == doctest::Approx((2.0 - n) / 2.0));
  }
}

TEST_CASE("weight selection") {
  const DerivedConstants c = derive_constants({5, 2.0});
  const WeightSelection w = select_weights(c);
  CHECK(w.nu == doctest::Approx(-1.75));
  CHECK(w.mu == doctest::Approx(-1.25));
  CHECK(w.delta_nu == doctest::Approx(0.375));
  CHECK(w.nu + w.mu == doctest::Approx(-3.0));
  const Interval d = delta_interval(c, w.nu);
  CHECK(d.lo == doctest::Approx(0.25));
  CHECK(d.hi == doctest::Approx(0.5));

  const WeightSelection e = select_weights(c, -1.9);
  CHECK(e.mu == doctest::Approx(-1.1));
  CHECK(code_of([&] { select_weights(c, -1.4); }) == ErrorCode::WeightOutOfRange);
  CHECK(code_of([&] { select_weights(c, -2.0); }) == ErrorCode::WeightOutOfRange);

  // full chain of inequalities for a few cases
  for (auto [n, p] : {std::pair{3, 4.0}, std::pair{4, 2.5}, std::pair{6, 1.8}, std::pair{8, 1.5}}) {
    const DerivedConstants k = derive_constants({n, p});
    const WeightSelection s = select_weights(k);
    const IndicialRoots r = indicial_roots(k, 0.0);
    CHECK(-2.0 / (p - 1.0) < s.nu);
    CHECK(s.nu < r.gamma_minus.real());
    CHECK(r.gamma_minus.real() <= (2.0 - n) / 2.0 + 1e-14);
    CHECK((2.0 - n) / 2.0 <= r.gamma_plus.real() + 1e-14);
    CHECK(r.gamma_plus.real() < s.mu);
    CHECK(-2.0 / (p - 1.0) + (n - 2.0) / 2.0 < -s.delta_nu);
    CHECK(-s.delta_nu < s.nu + (n - 2.0) / 2.0);
    CHECK(s.nu + (n - 2.0) / 2.0 < 0.0);
  }
}

TEST_CASE("ball exponents") {
  const DerivedConstants c = derive_constants({3, 4.0});
  CHECK(ball_exponent_isolated(c) == doctest::Approx(1.0 / 3.0));
  CHECK(ball_exponent_general(c, -0.5) == doctest::Approx(1.0 / 3.0 + 0.5));
}
