#include <benchmark/benchmark.h>

#include "lensdyn/det.hpp"
#include "lensdyn/det_gen.hpp"
#include "lensdyn/random.hpp"
#include "lensdyn/suites.hpp"

namespace {

using namespace lensdyn;

void suite(benchmark::State& state, suites::Exec exec) {
  suites::Options opts;
  opts.cases = static_cast<std::size_t>(state.range(0));
  opts.exec = exec;
  for (auto _ : state) benchmark::DoNotOptimize(suites::matrix_theorem_suite(opts).passed);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MatrixTheoremSerial(benchmark::State& s) { suite(s, suites::Exec::Serial); }
void BM_MatrixTheoremParallel(benchmark::State& s) { suite(s, suites::Exec::Parallel); }
BENCHMARK(BM_MatrixTheoremSerial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixTheoremParallel)->Arg(200)->Unit(benchmark::kMillisecond);

// Period-k orbits of a fixed random system: |S|^k maps times the chart set.
det::System bench_system() {
  Rng rng(7);
  return det::random_system(rng, det::labelled_set("s", 6), {det::labelled_set("i", 3), det::labelled_set("o", 2)});
}

void BM_RepresentableSerial(benchmark::State& state) {
  const auto sys = bench_system();
  const auto rep = det::walking_cycle(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(det::representable_span_serial(rep, sys).total().size());
}

void BM_RepresentableParallel(benchmark::State& state) {
  const auto sys = bench_system();
  const auto rep = det::walking_cycle(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(det::representable_span(rep, sys).total().size());
}

BENCHMARK(BM_RepresentableSerial)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RepresentableParallel)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
