#include <benchmark/benchmark.h>

#include "wkg/bilinear.hpp"
#include "wkg/scattering_data.hpp"

namespace {

void bm_fft_round_trip(benchmark::State& state) {
    auto grid = wkg::make_grid(static_cast<int>(state.range(0)), 16.0 * 3.141592653589793);
    wkg::FftEngine eng(grid);
    wkg::SpectralField f = wkg::random_smooth_field(grid, wkg::FieldTag::kg, 7);
    for (auto _ : state) {
        wkg::PhysicalField p = eng.inverse(f);
        benchmark::DoNotOptimize(eng.forward(p, wkg::FieldTag::kg));
    }
}
BENCHMARK(bm_fft_round_trip)->Arg(16)->Arg(32);

void bm_rhs_profiles(benchmark::State& state) {
    auto grid = wkg::make_grid(static_cast<int>(state.range(0)), 16.0 * 3.141592653589793);
    wkg::FftEngine eng(grid);
    wkg::ProfileState s;
    s.t = 1.0;
    s.Vwa = wkg::random_smooth_field(grid, wkg::FieldTag::wa, 3);
    s.Vkg = wkg::random_smooth_field(grid, wkg::FieldTag::kg, 4);
    for (auto _ : state) benchmark::DoNotOptimize(wkg::rhs_profiles(eng, s));
}
BENCHMARK(bm_rhs_profiles)->Arg(16)->Arg(32);

void bm_bilinear_oracle(benchmark::State& state) {
    auto grid = wkg::make_grid(8, 4.0 * 3.141592653589793);
    wkg::SpectralField F = wkg::random_field(grid, wkg::FieldTag::kg, 5);
    wkg::SpectralField G = wkg::random_field(grid, wkg::FieldTag::kg, 6);
    wkg::BilinearJob job{wkg::Family::wa, wkg::Sign::plus, wkg::Sign::minus, &F, &G, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(wkg::eval_bilinear_oracle(job));
}
BENCHMARK(bm_bilinear_oracle);

}  // namespace

BENCHMARK_MAIN();
