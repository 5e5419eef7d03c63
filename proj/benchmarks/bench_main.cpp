#include <benchmark/benchmark.h>

#include "amd/presets.hpp"

using namespace amd;

namespace {

void BM_Matexp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  Operator M = random_matrix(d, rng);
  M /= M.norm();
  for (auto _ : state) benchmark::DoNotOptimize(matexp(M));
}
BENCHMARK(BM_Matexp)->Arg(16)->Arg(64)->Arg(256);

void BM_BuildSuperoperator(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(2);
  const Lindbladian L(random_hermitian(d, rng), {random_matrix(d, rng), random_matrix(d, rng)});
  for (auto _ : state) benchmark::DoNotOptimize(build_superoperator(L));
}
BENCHMARK(BM_BuildSuperoperator)->Arg(4)->Arg(8)->Arg(16);

void BM_PropagateCollective(benchmark::State& state) {
  const Lindbladian L = presets::appendix_b_lindbladian(1.0, 1.0, 3.0);
  L.superoperator();  // warm the cache
  Rng rng(3);
  const Operator rho0 = random_density(8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_const(L, rho0, 50.0 / 3.0));
}
BENCHMARK(BM_PropagateCollective);

void BM_Decompose(benchmark::State& state) {
  const Lindbladian L = presets::appendix_b_lindbladian(1.0, 1.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(L));
}
BENCHMARK(BM_Decompose);

void BM_ComputeGaps(benchmark::State& state) {
  const LindbladCurve curve(
      LindbladCurve::Sampled{{{0.0, presets::appendix_b_lindbladian(1.0, 1.0, 3.0)}}});
  const BlockTracker tracker = constant_tracker(presets::appendix_b_block(1.0, 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_gaps(curve, tracker, 11));
}
BENCHMARK(BM_ComputeGaps);

void BM_TransportDiscrete(benchmark::State& state) {
  const Loop loop = presets::holonomy_loop(PauliLoopKind::ZZ_X, std::sqrt(2.0) * M_PI,
                                           std::sqrt(2.0) * M_PI, 5.0);
  const Operator rho0 = kron(basis_ket(0, 2) * basis_ket(0, 2).adjoint(), identity(2) / 2);
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(transport_discrete(loop, N, rho0));
}
BENCHMARK(BM_TransportDiscrete)->Arg(200)->Arg(2000);

void BM_HolonomicGateFullSim(benchmark::State& state) {
  const Loop loop = presets::holonomy_loop(PauliLoopKind::ZZ_X, std::sqrt(2.0) * M_PI,
                                           std::sqrt(2.0) * M_PI, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(gate_via_simulation(loop, 200.0));
}
BENCHMARK(BM_HolonomicGateFullSim);

}  // namespace

BENCHMARK_MAIN();
