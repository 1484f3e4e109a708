#include <benchmark/benchmark.h>

#include "orbitforge/closure.hpp"
#include "orbitforge/integrate.hpp"
#include "orbitforge/krawczyk.hpp"
#include "orbitforge/segment.hpp"
#include "orbitforge/signature.hpp"
#include "orbitforge/symbolic.hpp"

using namespace orbitforge;

namespace {

const LorenzParams kParams;

State3 on_attractor() { return flow({1.0, 1.0, 1.0}, kParams, 10.0); }

const Trajectory& sample_trajectory() {
  static const Trajectory tr = integrate(on_attractor(), kParams, kDefaultDt, 20000);
  return tr;
}

// LR closed once from attractor crossings.
const PeriodicOrbit& lr_orbit() {
  static const PeriodicOrbit o = [] {
    const Trajectory tr = integrate(on_attractor(), kParams, kDefaultDt, 200000);
    const auto cs = crossings(tr, kParams, SectionConfig{});
    return newton_close(seed_from_sequence(SymbolSequence{"LR"}, {}, cs), ClosureConfig{}, SymbolSequence{"LR"});
  }();
  return o;
}

void BM_Rk4Steps(benchmark::State& state) {
  const State3 s0 = on_attractor();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(flow(s0, kParams, static_cast<double>(n) * kDefaultDt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rk4Steps)->Arg(2000)->Arg(20000);

void BM_Signature(benchmark::State& state) {
  const auto method = static_cast<SignatureMethod>(state.range(0));
  const Trajectory& tr = sample_trajectory();
  for (auto _ : state) benchmark::DoNotOptimize(signature_curve(tr, kParams, method));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tr.size()));
}
BENCHMARK(BM_Signature)
    ->Arg(static_cast<int>(SignatureMethod::Analytic))
    ->Arg(static_cast<int>(SignatureMethod::Discrete));

void BM_Segmentation(benchmark::State& state) {
  const Trajectory& tr = sample_trajectory();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        segment_trajectory(tr, kParams, WindowConfig{}, SectionConfig{}, SignatureMethod::Analytic));
}
BENCHMARK(BM_Segmentation)->Unit(benchmark::kMillisecond);

void BM_PoincareMap(benchmark::State& state) {
  const SectionPoint q = lr_orbit().shooting.points.front();
  const ClosureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(poincare_map(q, cfg));
}
BENCHMARK(BM_PoincareMap)->Unit(benchmark::kMicrosecond);

void BM_NewtonFromPerturbedLR(benchmark::State& state) {
  ShootingState s = lr_orbit().shooting;
  for (SectionPoint& q : s.points) q[0] += 1e-3;
  const ClosureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(newton_close(s, cfg));
}
BENCHMARK(BM_NewtonFromPerturbedLR)->Unit(benchmark::kMillisecond);

void BM_KrawczykLR(benchmark::State& state) {
  const ShootingState& s = lr_orbit().shooting;
  const ClosureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(krawczyk(s, 1e-6, cfg));
}
BENCHMARK(BM_KrawczykLR)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
