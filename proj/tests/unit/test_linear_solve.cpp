#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "emden/errors.hpp"
#include "emden/linear_solve.hpp"
#include "support/oracles.hpp"

using namespace emden;

namespace {

const RadialProfile& profile(int n, double p) {
  static std::map<std::pair<int, double>, RadialProfile> cache;
  auto key = std::make_pair(n, p);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, compute_profile(derive_constants({n, p}))).first;
  }
  return it->second;
}

SingularSpec single(int n, double eps, double R) {
  SingularSpec s;
  s.dimension = n;
  s.points = {std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  s.epsilons = {eps};
  s.R = R;
  s.domain = Domain::ball(n, 1.0);
  return s;
}

SingularSpec pair3(double eps, double R) {
  SingularSpec s;
  s.dimension = 3;
  s.points = {{-0.5, 0.0, 0.0}, {0.5, 0.0, 0.0}};
  s.epsilons = {eps, eps};
  s.R = R;
  s.domain = Domain::cube(3, 1.0);
  return s;
}

Discretization radial_disc(SingularSpec& spec, std::size_t n) {
  DiscretizationOptions o;
  o.grid_n = n;
  return make_discretization(spec, o);
}

Discretization box_disc(SingularSpec& spec, std::size_t n) {
  DiscretizationOptions o;
  o.mode = DiscMode::Box3d;
  o.grid_n = n;
  return make_discretization(spec, o);
}

std::vector<double> nodal(const Discretization& disc, auto&& f) {
  std::vector<double> out(disc.node_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f(disc.coordinates(i));
  }
  return out;
}

double radius(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) {
    s += v * v;
  }
  return std::sqrt(s);
}

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) {
    s += v * v;
  }
  return std::sqrt(s);
}

// random right-hand side of unit size in the weighted sup norm at exponent nu - 2
std::vector<double> weighted_random(const Discretization& disc, double nu, std::uint64_t seed) {
  std::vector<double> f = oracle::uniform(seed, disc.unknown_count(), -1.0, 1.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] *= std::pow(disc.rho[disc.node_of_unknown[k]], nu - 2.0);
  }
  return f;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("radial Laplacian: harmonic function and second-order consistency") {
  for (int n : {3, 5}) {
    double prev = 0.0;
    for (std::size_t grid : {501u, 1001u, 2001u}) {
      SingularSpec spec = single(n, 0.05, 0.2);
      const Discretization disc = radial_disc(spec, grid);
      const LinearOperator op = assemble_with_potential(disc, std::vector<double>(disc.node_count(), 0.0), 0.0);
      const auto harm = op.apply_full(nodal(disc, [&](auto x) { return std::pow(radius(x), 2.0 - n); }));
      double worst = 0.0;
      for (std::size_t k = 0; k < harm.size(); ++k) {
        const double r = disc.r[disc.node_of_unknown[k]];
        worst = std::max(worst, std::abs(harm[k]) * std::pow(r, n));
      }
      CHECK(worst <= 1e-9);
      // manufactured: w = exp(-r^2), Delta w = (4 r^2 - 2N) exp(-r^2)
      const auto img = op.apply_full(nodal(disc, [](auto x) { return std::exp(-radius(x) * radius(x)); }));
      double err = 0.0;
      for (std::size_t k = 0; k < img.size(); ++k) {
        const double r = disc.r[disc.node_of_unknown[k]];
        const double exact = (4.0 * r * r - 2.0 * n) * std::exp(-r * r);
        err = std::max(err, std::abs(img[k] - exact) * r * r);
      }
      if (prev > 0.0) {
        const double order = std::log(prev / err) / std::log(2.0);
        CAPTURE(n);
        CAPTURE(grid);
        CHECK(order >= 1.8);
        CHECK(order <= 2.2);
      }
      prev = err;
    }
  }
}

TEST_CASE("box Laplacian: exact on quadratics, second order on smooth data") {
  double prev = 0.0;
  for (std::size_t grid : {17u, 33u, 65u}) {
    SingularSpec spec = pair3(0.05, 0.2);
    const Discretization disc = box_disc(spec, grid);
    const LinearOperator op = assemble_with_potential(disc, std::vector<double>(disc.node_count(), 0.0), 0.0);
    const auto quad = op.apply_full(nodal(disc, [](auto x) { return x[0] * x[0] + 2.0 * x[1] * x[1] - x[2]; }));
    for (double v : quad) {
      CHECK(v == doctest::Approx(6.0).epsilon(1e-9));
    }
    const double k = 1.3;
    const auto img = op.apply_full(
        nodal(disc, [&](auto x) { return std::sin(k * x[0]) * std::cos(k * x[1]) * std::exp(0.5 * x[2]); }));
    double err = 0.0;
    for (std::size_t u = 0; u < img.size(); ++u) {
      const auto x = disc.coordinates(disc.node_of_unknown[u]);
      const double exact = (0.25 - 2.0 * k * k) * std::sin(k * x[0]) * std::cos(k * x[1]) * std::exp(0.5 * x[2]);
      err = std::max(err, std::abs(img[u] - exact));
    }
    if (prev > 0.0) {
      const double order = std::log2(prev / err);
      CHECK(order >= 1.8);
      CHECK(order <= 2.2);
    }
    prev = err;
  }
}

TEST_CASE("matrix-free box stencil equals the assembled matrix") {
  SingularSpec spec = pair3(0.05, 0.2);
  const Discretization disc = box_disc(spec, 17);
  const ApproximateSolution approx(spec, profile(3, 4.0));
  const LinearOperator op = assemble(disc, approx, 0.375);
  const std::vector<double> x = oracle::uniform(4, disc.unknown_count(), -1.0, 1.0);
  const std::vector<double> y = op.apply(x);
  std::vector<double> yn;
  op.apply_nodes(disc.to_nodes(x), yn);
  const std::vector<double> y2 = disc.to_unknowns(yn);
  for (std::size_t k = 0; k < y.size(); ++k) {
    CHECK(y2[k] == doctest::Approx(y[k]).epsilon(1e-13));
  }
  std::ostringstream coo;
  op.write_coo(coo);
  std::size_t lines = 0;
  for (char c : coo.str()) {
    lines += c == '\n' ? 1 : 0;
  }
  CHECK(lines == op.matrix().val.size());
}

TEST_CASE("discrete self-adjointness under the quadrature pairing") {
  SingularSpec rs = single(5, 0.05, 0.2);
  const Discretization rd = radial_disc(rs, 2001);
  SingularSpec bs = pair3(0.05, 0.2);
  const Discretization bd = box_disc(bs, 17);
  const ApproximateSolution ra(rs, profile(5, 2.0));
  const ApproximateSolution ba(bs, profile(3, 4.0));
  for (const auto& [disc, approx] : {std::pair{&rd, &ra}, std::pair{&bd, &ba}}) {
    const LinearOperator op = assemble(*disc, *approx, 0.25);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto w = oracle::uniform(seed, disc->unknown_count(), -1.0, 1.0);
      const auto v = oracle::uniform(seed + 100, disc->unknown_count(), -1.0, 1.0);
      const auto lw = op.apply(w);
      const auto lv = op.apply(v);
      double a = 0.0, b = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        const double q = disc->quadrature[k];
        a += q * lw[k] * v[k];
        b += q * w[k] * lv[k];
        scale += q * (std::abs(lw[k] * v[k]) + std::abs(w[k] * lv[k]));
      }
      CHECK(std::abs(a - b) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("dilation mode is an approximate kernel element where chi = 1") {
  const double eps = 0.05;
  const double R = 0.3;
  SingularSpec spec = single(5, eps, R);
  const Discretization disc = radial_disc(spec, 4001);
  const RadialProfile& prof = profile(5, 2.0);
  const ApproximateSolution approx(spec, prof);
  const LinearOperator op = assemble(disc, approx, 0.25);
  const double a = prof.constants().a;
  const auto mode = nodal(disc, [&](auto x) {
    const double r = radius(x);
    return a * u_of_r(prof, eps, r) + r * du_dr(prof, eps, r);
  });
  const auto img = op.apply_full(mode);
  const double nu = select_weights(prof.constants()).nu;
  double lhs = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < img.size(); ++k) {
    const std::size_t node = disc.node_of_unknown[k];
    if (disc.r[node] > 0.9 * R) {
      continue;
    }
    const double w = std::pow(disc.rho[node], 2.0 - nu);
    lhs = std::max(lhs, w * std::abs(img[k]));
    ref = std::max(ref, w * std::abs(op.potential()[k] * mode[node]));
  }
  CHECK(lhs <= 1e-3 * ref);
}

TEST_CASE("radial right inverse") {
  for (auto [n, p] : {std::pair{5, 2.0}, std::pair{3, 4.0}}) {
    SingularSpec spec = single(n, 0.05, 0.25);
    const Discretization disc = radial_disc(spec, 2001);
    const ApproximateSolution approx(spec, profile(n, p));
    const WeightSelection ws = select_weights(profile(n, p).constants());
    const LinearOperator op = assemble(disc, approx, ws.delta_nu);
    RightInverse g(op);
    const auto zero = g.solve(std::vector<double>(disc.unknown_count(), 0.0));
    CHECK(norm2(zero) == 0.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto f = weighted_random(disc, ws.nu, seed);
      const auto w = g.solve(f);
      auto r = op.apply(w);
      for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] -= f[k];
      }
      CAPTURE(n);
      CHECK(norm2(r) / norm2(f) <= 1e-10);
      CHECK(g.last_stats().relative_residual == doctest::Approx(norm2(r) / norm2(f)).epsilon(1e-6).scale(1e-14));
    }
    // transpose solve against the transposed operator
    const auto b = oracle::uniform(77, disc.unknown_count(), -1.0, 1.0);
    const auto x = g.solve_lt(b);
    const auto back = op.apply_transpose(x);
    // rows of L^T are scaled up to 1/(r^2 ds^2); compare against |L^T| |x|
    CsrMatrix abs_t = op.matrix_transpose();
    for (double& v : abs_t.val) {
      v = std::abs(v);
    }
    std::vector<double> ax(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      ax[k] = std::abs(x[k]);
    }
    std::vector<double> scale;
    abs_t.multiply(ax, scale);
    double worst = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      worst = std::max(worst, std::abs(back[k] - b[k]) / scale[k]);
    }
    CHECK(worst <= 1e-12);
    std::vector<double> bad(disc.unknown_count(), 0.0);
    bad[3] = std::nan("");
    CHECK(code_of([&] { g.solve(bad); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("box right inverse and its adjoint-range form") {
  SingularSpec spec = pair3(0.05, 0.2);
  const Discretization disc = box_disc(spec, 33);
  const ApproximateSolution approx(spec, profile(3, 4.0));
  const WeightSelection ws = select_weights(profile(3, 4.0).constants());
  const LinearOperator op = assemble(disc, approx, ws.delta_nu);
  SolveOptions so;
  so.cg_tol = 1e-8;
  RightInverse g(op, so);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto f = oracle::uniform(seed, disc.unknown_count(), -1.0, 1.0);
    const auto w = g.solve(f);
    auto r = op.apply(w);
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] -= f[k];
    }
    CHECK(norm2(r) / norm2(f) <= 1e-6);
    CHECK(g.last_stats().iterations > 0);
  }
  const GridField f = disc.field(nodal(disc, [](auto x) { return std::exp(-x[0] * x[0]) * (1.0 - x[1] * x[1]); }), 0.0);
  const GridField w = right_inverse_adjoint_range(disc, op, f, so);
  for (std::size_t node = 0; node < disc.node_count(); ++node) {
    if (disc.unknown_of_node[node] < 0) {
      CHECK(w.values[node] == 0.0);
    }
  }
  SolveOptions starved;
  starved.max_iter = 3;
  starved.warm_start = false;
  RightInverse g3(op, starved);
  CHECK(code_of([&] { g3.solve(oracle::uniform(9, disc.unknown_count(), -1.0, 1.0)); }) ==
        ErrorCode::SolverStagnation);
}

TEST_CASE("maximum principle margin") {
  CHECK(max_principle_margin(0.3, 3, {5, 2.0}) == doctest::Approx(1.8));
  CHECK(max_principle_margin(1e-12, 3, {5, 2.0}) == doctest::Approx(9.0));
  CHECK(max_principle_margin(0.375, 3, {5, 2.0}) == doctest::Approx(0.0).scale(1.0));
  CHECK(max_principle_margin(0.2, 1, {3, 4.0}) == doctest::Approx(1.0 - 16.0 * 0.008));
}

TEST_CASE("barrier certificate") {
  SingularSpec spec = single(5, 0.05, 0.2);
  const Discretization disc = radial_disc(spec, 2001);
  const double gamma = -1.75;
  const LinearOperator lap = assemble_with_potential(disc, std::vector<double>(disc.node_count(), 0.0), 0.0);
  const BarrierCertificate free = barrier_check(disc, lap, spec, gamma);
  CHECK(free.c >= std::abs(gamma * (3.0 + gamma)) * (1.0 - 1e-4));
  CHECK(free.nodes_checked > 0);

  const RadialProfile normalized = normalize_profile(profile(5, 2.0), 0.3);
  const LinearOperator op = assemble(disc, ApproximateSolution(spec, normalized), 0.25);
  CHECK(barrier_check(disc, op, spec, gamma).c > 0.0);

  // without normalization V reaches p v_1(0)^{p-1} = 2 at d = eps, above |gamma (N - 2 + gamma)| = 0.81
  const LinearOperator raw = assemble(disc, ApproximateSolution(spec, profile(5, 2.0)), 0.25);
  CHECK(code_of([&] { barrier_check(disc, raw, spec, -0.3); }) == ErrorCode::BarrierFailure);
  CHECK(barrier_check(disc, op, spec, -0.3).c > 0.0);
  CHECK(code_of([&] { barrier_check(disc, lap, spec, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { barrier_check(disc, lap, spec, -3.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("near kernel follows the dilation mode") {
  const double eps = 0.05;
  SingularSpec spec = single(5, eps, 0.25);
  const Discretization disc = radial_disc(spec, 2001);
  const RadialProfile& prof = profile(5, 2.0);
  const WeightSelection ws = select_weights(prof.constants());
  const LinearOperator op = assemble(disc, ApproximateSolution(spec, prof), ws.delta_nu);
  RightInverse g(op);
  const double a = prof.constants().a;
  const auto mode = nodal(disc, [&](auto x) {
    const double r = radius(x);
    return a * u_of_r(prof, eps, r) + r * du_dr(prof, eps, r);
  });
  const NearKernel nk = near_kernel(disc, g, ws.nu, mode);
  CHECK(nk.sigma_min > 0.0);
  CHECK(nk.correlation > 0.99);
  CHECK(right_inverse_norm(disc, g, ws.nu) > 1.0);
}

TEST_CASE("incompatible discretizations") {
  SingularSpec two = pair3(0.05, 0.2);
  two.domain = Domain::ball(3, 2.0);
  DiscretizationOptions radial;
  CHECK(code_of([&] { make_discretization(two, radial); }) == ErrorCode::IncompatibleDomain);
  SingularSpec five = single(5, 0.05, 0.2);
  DiscretizationOptions box;
  box.mode = DiscMode::Box3d;
  CHECK(code_of([&] { make_discretization(five, box); }) == ErrorCode::IncompatibleDomain);
  SingularSpec ok = single(5, 0.05, 0.2);
  DiscretizationOptions wide;
  wide.r_min_factor = 1e-2;
  CHECK(code_of([&] { make_discretization(ok, wide); }) == ErrorCode::IncompatibleDomain);
}
