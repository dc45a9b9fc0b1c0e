#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "emden/errors.hpp"
#include "emden/fixed_point.hpp"
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

struct RadialRun {
  SingularSpec spec;
  Discretization disc;
  ApproximateSolution approx;
  WeightSelection weights;
};

RadialRun radial_setup(int n, double p, double eps, double R, std::size_t grid) {
  SingularSpec spec = single(n, eps, R);
  DiscretizationOptions o;
  o.grid_n = grid;
  Discretization disc = make_discretization(spec, o);
  ApproximateSolution approx(spec, profile(n, p));
  return {spec, std::move(disc), std::move(approx), select_weights(profile(n, p).constants())};
}

const LedgerEntry& find(const Ledger& ledger, const std::string& name) {
  for (const LedgerEntry& e : ledger.entries) {
    if (e.name == name) {
      return e;
    }
  }
  FAIL("ledger has no entry " << name);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("quadratic remainder") {
  const std::vector<double> ub = oracle::uniform(1, 200, 0.1, 5.0);
  const std::vector<double> zero(ub.size(), 0.0);
  for (double p : {2.0, 2.5, 4.0, 1.7}) {
    for (double q : q_nonlinearity(ub, zero, p)) {
      CHECK(q == doctest::Approx(0.0).scale(1e-12));
    }
    const std::vector<double> v = oracle::uniform(2, ub.size(), -3.0, 3.0);
    const std::vector<double> q0 = q_nonlinearity(zero, v, p);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(q0[i] == doctest::Approx(std::pow(std::abs(v[i]), p)));
    }
    // Taylor bound for |v| <= ubar/4 with c = p(p-1)/2 max over [3/4, 5/4] of xi^{p-2}
    const double c = 0.5 * p * (p - 1.0) * std::max(std::pow(0.75, p - 2.0), std::pow(1.25, p - 2.0));
    const std::vector<double> t = oracle::uniform(3, ub.size(), -0.25, 0.25);
    std::vector<double> small(ub.size());
    for (std::size_t i = 0; i < ub.size(); ++i) {
      small[i] = t[i] * ub[i];
    }
    const std::vector<double> qs = q_nonlinearity(ub, small, p);
    for (std::size_t i = 0; i < ub.size(); ++i) {
      // Q is formed by cancellation, allow round-off on the scale of ubar^p
      CHECK(std::abs(qs[i]) <= c * std::pow(ub[i], p - 2.0) * small[i] * small[i] + 1e-14 * std::pow(ub[i], p));
    }
  }
  // p = 2: Q(v) = v^2 exactly when ubar + v >= 0
  const std::vector<double> q2 = q_nonlinearity(std::vector<double>{1.0, 2.0}, std::vector<double>{0.5, -1.5}, 2.0);
  CHECK(q2[0] == doctest::Approx(0.25));
  CHECK(q2[1] == doctest::Approx(2.25));
  CHECK_THROWS_AS(q_nonlinearity(ub, std::vector<double>(3, 0.0), 2.0), Error);
}

TEST_CASE("zero residual: the fixed point v = 0 is found at once") {
  RadialRun run = radial_setup(3, 4.0, 0.05, 0.25, 1001);
  PicardOptions o;
  o.zero_residual = true;
  const PicardResult r = picard_solve(run.approx, run.weights, run.disc, o);
  CHECK(r.trace.converged);
  REQUIRE(r.trace.records.size() == 1);
  CHECK(r.trace.records[0].v_norm == 0.0);
  CHECK(r.trace.records[0].step_norm == 0.0);
  CHECK(std::isnan(r.trace.records[0].ratio));
}

TEST_CASE("radial solve for N = 3, p = 4") {
  RadialRun run = radial_setup(3, 4.0, 0.05, 0.25, 2001);
  const PicardResult res = picard_solve(run.approx, run.weights, run.disc);
  const SolutionReport& rep = res.report;
  const IterationTrace& tr = res.trace;
  REQUIRE(tr.converged);
  CHECK(rep.converged);
  CHECK(tr.q == doctest::Approx(3.0 - 8.0 / 3.0));
  CHECK(tr.ball_radius == doctest::Approx(tr.beta * std::pow(0.05, tr.q)));
  for (const IterationRecord& rec : tr.records) {
    CHECK(rec.v_norm <= tr.ball_radius);
    if (rec.iteration >= 2) {
      CHECK(rec.ratio <= 0.9);
    }
  }
  for (std::size_t k = 2; k < tr.records.size(); ++k) {
    CHECK(tr.records[k].step_norm < tr.records[k - 1].step_norm);
  }
  CHECK(rep.residual_norm <= 1e-6);
  CHECK(rep.min_u > 0.0);
  CHECK(rep.ratio_min >= 0.98);
  CHECK(rep.ratio_max <= 1.02);
  CHECK(rep.g_norm > 0.0);
  CHECK(!rep.ratio_table.empty());
  for (std::size_t k = 0; k < rep.u.size(); ++k) {
    REQUIRE(rep.u[k] == doctest::Approx(rep.ubar[k] + rep.v[k]).epsilon(1e-14));
  }

  VerifyOptions vo;
  vo.ball_radius = tr.ball_radius;
  const Ledger ledger = verify_solution(rep, run.approx, run.disc, vo);
  INFO(ledger.failed().size());
  CHECK(ledger.passed());
  for (const char* name : {"positivity", "sandwich", "ball", "residual", "truncation", "monotone_decay", "asymptote"}) {
    CAPTURE(name);
    CHECK(find(ledger, name).passed);
    CHECK(!find(ledger, name).skipped);
  }

  // weak form of Delta u + |u|^p = 0 against random test vectors
  const LinearOperator op = assemble(run.disc, run.approx, run.weights.delta_nu);
  const std::vector<double> lv = op.apply(rep.v);
  const std::vector<double> q = q_nonlinearity(rep.ubar, rep.v, 4.0);
  std::vector<double> f(rep.u.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = run.approx.residual(run.disc.coordinates(run.disc.node_of_unknown[k]));
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::vector<double> phi = oracle::uniform(seed, f.size(), -1.0, 1.0);
    double pairing = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double w = run.disc.quadrature[k];
      pairing += w * (lv[k] + f[k] + q[k]) * phi[k];
      scale += w * (std::abs(lv[k]) + std::abs(f[k]) + std::abs(q[k])) * std::abs(phi[k]);
    }
    CHECK(std::abs(pairing) <= 1e-8 * scale);
  }

  // a perturbed field no longer passes
  std::vector<double> blown(rep.u.size());
  for (std::size_t k = 0; k < blown.size(); ++k) {
    blown[k] = rep.ubar[k] + 100.0 * rep.v[k];
  }
  const SolutionReport bad = analyze_solution(run.approx, run.weights, run.disc, blown);
  const Ledger bad_ledger = verify_solution(bad, run.approx, run.disc, vo);
  CHECK(!bad_ledger.passed());
  CHECK(!find(bad_ledger, "ball").passed);
  CHECK(!find(bad_ledger, "sandwich").passed);
  CHECK(!find(bad_ledger, "residual").passed);
}

TEST_CASE("analyze_solution reproduces the run's report") {
  RadialRun run = radial_setup(3, 4.0, 0.05, 0.25, 1001);
  const PicardResult res = picard_solve(run.approx, run.weights, run.disc);
  const SolutionReport again = analyze_solution(run.approx, run.weights, run.disc, res.report.u);
  CHECK(again.residual_norm == doctest::Approx(res.report.residual_norm).epsilon(1e-9));
  CHECK(again.min_u == res.report.min_u);
  CHECK(again.asymptote_deviation == doctest::Approx(res.report.asymptote_deviation));
}

TEST_CASE("coarse grid at the largest epsilon is flagged") {
  RadialRun run = radial_setup(3, 4.0, 0.1, 0.25, 201);
  const PicardResult res = picard_solve(run.approx, run.weights, run.disc);
  VerifyOptions vo;
  vo.ball_radius = res.trace.ball_radius;
  const Ledger ledger = verify_solution(res.report, run.approx, run.disc, vo);
  CHECK(!ledger.passed());
  const std::vector<std::string> failed = ledger.failed();
  CHECK(std::find(failed.begin(), failed.end(), "truncation") != failed.end());
  CHECK(!find(ledger, "truncation").passed);
}

TEST_CASE("failures carry the partial trace") {
  RadialRun run = radial_setup(3, 4.0, 0.05, 0.25, 1001);
  PicardOptions few;
  few.max_iter = 2;
  try {
    picard_solve(run.approx, run.weights, run.disc, few);
    FAIL("expected MaxIterations");
  } catch (const PicardFailure& e) {
    CHECK(e.code() == ErrorCode::MaxIterations);
    CHECK(e.partial().trace.records.size() == 2);
    CHECK(!e.partial().trace.converged);
  }
  PicardOptions tight;
  tight.beta = 1e-6;
  try {
    picard_solve(run.approx, run.weights, run.disc, tight);
    FAIL("expected LeftBall");
  } catch (const PicardFailure& e) {
    CHECK(e.code() == ErrorCode::LeftBall);
    CHECK(!e.partial().trace.records.empty());
  }
}

TEST_CASE("small box run with two symmetric points") {
  SingularSpec spec;
  spec.dimension = 3;
  spec.points = {{-0.5, 0.0, 0.0}, {0.5, 0.0, 0.0}};
  spec.epsilons = {0.05, 0.05};
  spec.R = 0.2;
  spec.domain = Domain::cube(3, 1.0);
  DiscretizationOptions o;
  o.mode = DiscMode::Box3d;
  o.grid_n = 33;
  const Discretization disc = make_discretization(spec, o);
  const ApproximateSolution approx(spec, profile(3, 4.0));
  const WeightSelection ws = select_weights(profile(3, 4.0).constants());
  PicardOptions po;
  po.solve.cg_tol = 1e-10;
  po.stop_tol = 1e-8;
  const PicardResult res = picard_solve(approx, ws, disc, po);
  CHECK(res.trace.converged);
  CHECK(res.report.min_u > 0.0);
  CHECK(res.report.g_norm < 0.0);
  // swap x -> -x maps the grid to itself
  const std::size_t n = disc.shape[0];
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < disc.unknown_count(); ++k) {
    const std::size_t node = disc.node_of_unknown[k];
    const std::size_t i = node % n;
    const std::size_t mirror = node - i + (n - 1 - i);
    const long km = disc.unknown_of_node[mirror];
    REQUIRE(km >= 0);
    worst = std::max(worst, std::abs(res.report.v[k] - res.report.v[static_cast<std::size_t>(km)]));
    scale = std::max(scale, std::abs(res.report.v[k]));
  }
  CHECK(worst <= 1e-6 * scale);
  VerifyOptions vo;
  vo.ball_radius = res.trace.ball_radius;
  const Ledger ledger = verify_solution(res.report, approx, disc, vo);
  CHECK(find(ledger, "positivity").passed);
  CHECK(find(ledger, "truncation").skipped);
  CHECK(find(ledger, "monotone_decay").passed);
}
