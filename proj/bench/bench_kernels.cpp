// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "kgl/algebra.hpp"
#include "kgl/catalog.hpp"
#include "kgl/groupoid.hpp"
#include "kgl/structure.hpp"

using namespace kgl;

namespace {

struct ProductInput {
  KGraph g = example_graph("full2");
  Cocycle2 c = torus_cocycle(2);
  AlgebraElement x, y;

  explicit ProductInput(int terms) {
    std::mt19937_64 rng(1);
    const ValueGroup grp = algebra_group(c.group());
    x = fixture::random_element(rng, g, grp, {2, 2}, terms);
    y = fixture::random_element(rng, g, grp, {2, 2}, terms);
  }
};

void BM_StarProduct(benchmark::State& state) {
  const ProductInput in(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(star_product(in.g, in.x, in.y, in.c));
}

void BM_StarProductSerial(benchmark::State& state) {
  const ProductInput in(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(star_product_serial(in.g, in.x, in.y, in.c));
}

struct ProbeInput {
  KGraph g = example_graph("T_2");
  PairCoefficients a;
  IndicatorCombination x;
  std::vector<Cocycle2> seq;
  std::vector<double> params;
  Cocycle2 lim = Cocycle2::zero(ValueGroup::circle_turns(), 2);
  int depth;

  explicit ProbeInput(int d) : depth(d) {
    std::mt19937_64 rng(2);
    fixture::random_probe_input(rng, g, depth, a, x);
    seq = fixture::torus_sequence(2, 20, params);
  }
};

void BM_ContinuityProbe(benchmark::State& state) {
  const ProbeInput in(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(continuity_probe(in.g, in.a, in.seq, in.params, in.lim, in.x, in.depth));
}

void BM_ContinuityProbeSerial(benchmark::State& state) {
  const ProbeInput in(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(continuity_probe_serial(in.g, in.a, in.seq, in.params, in.lim, in.x, in.depth));
}

void BM_AperiodicityProbe(benchmark::State& state) {
  const KGraph g = example_graph("O_3");
  for (auto _ : state) benchmark::DoNotOptimize(aperiodicity_probe(g, {state.range(0)}));
}

}  // namespace

BENCHMARK(BM_StarProduct)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StarProductSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ContinuityProbe)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ContinuityProbeSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AperiodicityProbe)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
