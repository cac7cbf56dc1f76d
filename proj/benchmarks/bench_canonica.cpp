#include <benchmark/benchmark.h>

#include <canonica/lattices.hpp>
#include <canonica/lct.hpp>
#include <canonica/phase_retrieval.hpp>
#include <canonica/signal.hpp>
#include <canonica/stlct.hpp>
#include <canonica/windows.hpp>

using namespace canonica;

namespace {

Signal bench_signal(std::size_t n) {
  return random_gaussian_mixture(make_centered_grid(8.0, n), 1);
}

const LctParams kShear{1.0, 1.0, 0.0, 1.0};

void bm_lct_fast(benchmark::State& state) {
  const Signal f = bench_signal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Signal F = lct_fast(kShear, NormalizationMode::Unitary, f);
    benchmark::DoNotOptimize(F.v.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_lct_fast)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void bm_lct_direct(benchmark::State& state) {
  const Signal f = bench_signal(static_cast<std::size_t>(state.range(0)));
  const Grid out = induced_grid(kShear, f.grid);
  for (auto _ : state) {
    Signal F = lct_direct(kShear, NormalizationMode::Unitary, f, out);
    benchmark::DoNotOptimize(F.v.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_lct_direct)->RangeMultiplier(4)->Range(256, 1024)->Complexity();

// one spectrogram column: fixed x, a induced-grid sweep of mu values
void bm_stlct_column(benchmark::State& state) {
  const Signal f = bench_signal(256);
  const WindowSpec w;
  const Grid ind = induced_grid(kShear, f.grid);
  std::vector<TfPoint> pts;
  for (int j = -32; j < 32; ++j)
    pts.push_back({0.5, ind.point(f.grid.n / 2 + j)});
  for (auto _ : state) {
    SpectrogramSamples s = stlct_analytic(kShear, w, f, pts);
    benchmark::DoNotOptimize(s.values.data());
  }
}
BENCHMARK(bm_stlct_column);

void bm_measure_sqrt_lattice(benchmark::State& state) {
  const Grid grid{-2.56, 0.02, 256};
  const Signal f = random_gaussian_mixture(grid, 1);
  WindowSpec w;
  w.gamma = 0.5;
  const SamplingSet lat = sqrt_lattice(0.4, 0.4, 20);
  for (auto _ : state) {
    MeasurementSet m = measure(f, kShear, w, lat);
    benchmark::DoNotOptimize(m.magnitudes.data());
  }
}
BENCHMARK(bm_measure_sqrt_lattice);

void bm_loss_gradient(benchmark::State& state) {
  const Grid grid{-2.56, 0.02, 256};
  const Signal f = random_gaussian_mixture(grid, 1);
  WindowSpec w;
  w.gamma = 0.5;
  const MeasurementSet meas =
      measure(f, kShear, w, sqrt_lattice(0.4, 0.4, 20));
  const Signal h = random_gaussian_mixture(grid, 2);
  for (auto _ : state) {
    Signal G = pr_loss_gradient(meas, h);
    benchmark::DoNotOptimize(G.v.data());
  }
}
BENCHMARK(bm_loss_gradient);

}  // namespace

BENCHMARK_MAIN();
