// OpenMP kernels against their serial references. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <igid/brownian_fpt.hpp>
#include <igid/codebook.hpp>
#include <igid/codec.hpp>
#include <igid/error_analysis.hpp>
#include <igid/reference.hpp>
#include <igid/rng.hpp>

#include <cmath>
#include <vector>

namespace {

using namespace igid;

const FluidParams kFluid = FluidParams::make(1, std::sqrt(0.5), 1);

void BM_FptParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_first_passage_times(kFluid, 1e-3, n, 1, true));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FptSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::sample_first_passage_times(kFluid, 1e-3, n, 1, true));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct TypeOneSetup {
  IGParams params = IGParams::make(1, 4);
  std::vector<double> codeword;
  DecodingRule rule{0.0, 0.0};

  explicit TypeOneSetup(std::size_t n) : codeword(n, 5.0) {
    rule = DecodingRule::make(params, scaling_quantities(n, 1, 0.5).delta_n);
  }
};

void BM_Type1Parallel(benchmark::State& state) {
  TypeOneSetup s(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_type1(s.codeword, s.params, s.rule, 1000, 2));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_Type1Serial(benchmark::State& state) {
  TypeOneSetup s(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::estimate_type1(s.codeword, s.params, s.rule, 1000, 2));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}

Codebook density_book() {
  RandomStream rng(3);
  return build_greedy_packing(3, 10, 2, 1000000, 1000000, rng).codebook;
}

void BM_DensityParallel(benchmark::State& state) {
  const Codebook book = density_book();
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_packing_density(book, 1, state.range(0), 4));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DensitySerial(benchmark::State& state) {
  const Codebook book = density_book();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::estimate_packing_density(book, 1, state.range(0), 4));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_FptParallel)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FptSerial)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Type1Parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Type1Serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DensityParallel)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DensitySerial)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
