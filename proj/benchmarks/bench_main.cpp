#include <benchmark/benchmark.h>

#include "sunqsde/oracle_sim.hpp"
#include "sunqsde/qsde_model.hpp"

namespace {

using namespace sunq;

struct Fixture {
  GellMannBasis basis;
  StructureTensors tensors;
  ThetaContext ctx;

  explicit Fixture(int n)
      : basis(build_generators(n)),
        tensors(structure_constants(basis)),
        ctx(tensors) {}
};

void bm_structure_constants(benchmark::State& state) {
  const GellMannBasis basis = build_generators(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(structure_constants(basis));
  }
}
BENCHMARK(bm_structure_constants)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

void bm_identity_suite(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_structure_identities(fx.tensors, 1e-9));
  }
}
BENCHMARK(bm_identity_suite)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void bm_theta_minus(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)));
  GaussianRng rng(1);
  Eigen::VectorXd beta(fx.ctx.s());
  for (int i = 0; i < beta.size(); ++i) beta[i] = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fx.ctx.theta_minus(beta));
  }
}
BENCHMARK(bm_theta_minus)->Arg(3)->Arg(6);

void bm_synth_and_check(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)));
  GaussianRng rng(7);
  SlhParams p;
  p.alpha.resize(fx.ctx.s());
  for (int i = 0; i < p.alpha.size(); ++i) p.alpha[i] = rng.normal();
  p.Lambda.resize(2, fx.ctx.s());
  for (int k = 0; k < 2; ++k)
    for (int c = 0; c < fx.ctx.s(); ++c)
      p.Lambda(k, c) = std::complex<double>(rng.normal(), rng.normal());
  for (auto _ : state) {
    const StateSpaceModel m = synthesize_state_space(fx.ctx, p, fx.ctx.n());
    benchmark::DoNotOptimize(check_physical_realizability(fx.ctx, m, 1e-9));
  }
}
BENCHMARK(bm_synth_and_check)->Arg(2)->Arg(3)->Arg(4);

void bm_ito_integrands(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)));
  const StateSpaceModel m =
      random_model(fx.ctx, fx.ctx.n(), 1, 3, ModelKind::Realizable);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ito_integrands(fx.ctx, m));
  }
}
BENCHMARK(bm_ito_integrands)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void bm_moment_integration(benchmark::State& state) {
  const Fixture fx(2);
  const StateSpaceModel m = random_model(fx.ctx, 2, 1, 5, ModelKind::Realizable);
  const MomentState s0 =
      init_moments(fx.ctx, Eigen::MatrixXcd::Identity(2, 2) / 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_moments(fx.ctx, m, s0, 0.1, 1e-3));
  }
}
BENCHMARK(bm_moment_integration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
