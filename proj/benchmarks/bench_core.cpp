#include <benchmark/benchmark.h>

#include <random>

#include "emden/fixed_point.hpp"
#include "emden/linear_solve.hpp"
#include "emden/ode_family.hpp"

namespace {

using namespace emden;

const RadialProfile& profile_3_4() {
  static const RadialProfile prof = compute_profile(derive_constants({3, 4.0}));
  return prof;
}

SingularSpec radial_spec(double eps) {
  SingularSpec s;
  s.dimension = 3;
  s.points = {{0.0, 0.0, 0.0}};
  s.epsilons = {eps};
  s.R = 0.25;
  s.domain = Domain::ball(3, 1.0);
  return s;
}

void BM_ComputeProfile(benchmark::State& state) {
  const DerivedConstants c = derive_constants({5, 2.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_profile(c));
  }
}
BENCHMARK(BM_ComputeProfile)->Unit(benchmark::kMillisecond);

void BM_DecayingSolution(benchmark::State& state) {
  const RadialProfile& prof = profile_3_4();
  const OdeChannel ch{2.0, static_cast<double>(state.range(0)), PotentialMode::Full};
  for (auto _ : state) {
    benchmark::DoNotOptimize(decaying_solution(ch, prof));
  }
}
BENCHMARK(BM_DecayingSolution)->Arg(0)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ResidualEvaluation(benchmark::State& state) {
  const ApproximateSolution approx(radial_spec(0.05), profile_3_4());
  std::vector<double> x{0.3, 0.1, 0.05};
  for (auto _ : state) {
    benchmark::DoNotOptimize(approx.residual(x));
  }
}
BENCHMARK(BM_ResidualEvaluation);

void BM_RadialRightInverse(benchmark::State& state) {
  SingularSpec spec = radial_spec(0.05);
  DiscretizationOptions o;
  o.grid_n = static_cast<std::size_t>(state.range(0));
  const Discretization disc = make_discretization(spec, o);
  const ApproximateSolution approx(spec, profile_3_4());
  const WeightSelection w = select_weights(profile_3_4().constants());
  const LinearOperator op = assemble(disc, approx, w.delta_nu);
  RightInverse g(op);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> f(disc.unknown_count());
  for (double& x : f) {
    x = u(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.solve(f));
  }
}
BENCHMARK(BM_RadialRightInverse)->Arg(2001)->Arg(8001);

void BM_BoxStencil(benchmark::State& state) {
  SingularSpec spec;
  spec.dimension = 3;
  spec.points = {{-0.5, 0.0, 0.0}, {0.5, 0.0, 0.0}};
  spec.epsilons = {0.05, 0.05};
  spec.R = 0.2;
  spec.domain = Domain::cube(3, 1.0);
  DiscretizationOptions o;
  o.mode = DiscMode::Box3d;
  o.grid_n = static_cast<std::size_t>(state.range(0));
  const Discretization disc = make_discretization(spec, o);
  const ApproximateSolution approx(spec, profile_3_4());
  const LinearOperator op = assemble(disc, approx, 0.125);
  std::vector<double> x(disc.node_count(), 0.0), y;
  for (std::size_t k = 0; k < disc.unknown_count(); ++k) {
    x[disc.node_of_unknown[k]] = 1.0 / (1.0 + static_cast<double>(k % 17));
  }
  for (auto _ : state) {
    op.apply_nodes(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_BoxStencil)->Arg(33)->Arg(65);

void BM_PicardRadial(benchmark::State& state) {
  SingularSpec spec = radial_spec(0.05);
  const Discretization disc = make_discretization(spec, {});
  const ApproximateSolution approx(spec, profile_3_4());
  const WeightSelection w = select_weights(profile_3_4().constants());
  for (auto _ : state) {
    benchmark::DoNotOptimize(picard_solve(approx, w, disc));
  }
}
BENCHMARK(BM_PicardRadial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
