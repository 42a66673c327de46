// Serial reference vs OpenMP kernel for the three parallel loops.
#include <benchmark/benchmark.h>

#include "dh/config.hpp"
#include "dh/verify.hpp"

using namespace dh;

namespace {

ScanSpec scan_for(const RunConfig& c, int count) {
  ScanSpec s;
  s.k_y = linspace(c.ky_grid.lo, c.ky_grid.hi, count);
  s.n_max = 10;
  return s;
}

void BM_scan(benchmark::State& st, bool parallel) {
  RunConfig c = preset(Shape::Hyperbolic);
  ScanSpec s = scan_for(c, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    SpectrumTable t = parallel ? scan_spectrum(c.material, c.field, s) : scan_spectrum_serial(c.material, c.field, s);
    benchmark::DoNotOptimize(t.rows.data());
  }
}

void BM_observables(benchmark::State& st, bool parallel) {
  RunConfig c = preset(Shape::Exponential);
  EigenState s = build_state(c.material, c.field, {3, 3.0, 1});
  Interval w = support(s);
  std::vector<double> xs = linspace(w.lo, w.hi, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto o = parallel ? observables(s, xs) : observables_serial(s, xs);
    benchmark::DoNotOptimize(o.data());
  }
}

void BM_eigenvalues(benchmark::State& st, bool parallel) {
  RunConfig c = preset(Shape::Constant);
  FDOperator op = assemble_fd(c.material, c.field, 0.0, {-12, 12}, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto ev = parallel ? eigenvalues_in(op, -3, 3) : eigenvalues_in_serial(op, -3, 3);
    benchmark::DoNotOptimize(ev.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_scan, serial, false)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_scan, omp, true)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_observables, serial, false)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_observables, omp, true)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_eigenvalues, serial, false)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_eigenvalues, omp, true)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
