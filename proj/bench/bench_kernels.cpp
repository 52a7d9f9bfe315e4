// Serial reference against the OpenMP kernels on the hot paths.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "oisac/config.hpp"
#include "oisac/kernels.hpp"
#include "oisac/layout.hpp"
#include "oisac/modem.hpp"
#include "oisac/sensing.hpp"

using namespace oisac;

namespace {

Exec policy(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_lambertian_map(benchmark::State& state) {
    const Scenario s = default_config().scenario;
    const FloorGrid grid = FloorGrid::of(s, 512);
    for (auto _ : state) benchmark::DoNotOptimize(lambertian_map(s, grid, s.coverage_area, policy(state)));
    label(state);
}

void BM_layout_fractions(benchmark::State& state) {
    const Scenario s = default_config().scenario;
    const FloorGrid grid = FloorGrid::of(s, 256);
    std::vector<double> eps, xi;
    for (int i = 0; i < 16; ++i) eps.push_back(0.1 * i);
    for (int j = 0; j < 16; ++j) xi.push_back(0.1 * j);
    for (auto _ : state)
        benchmark::DoNotOptimize(layout_fractions(s, 4, eps, xi, grid, s.coverage_area, 0.8e-4, policy(state)));
    label(state);
}

void BM_run_ber(benchmark::State& state) {
    const CMatrix h = CMatrix::Constant(32, 4, {0.5, 0.0});
    BerSetup b;
    b.num_bits = 100000;
    b.ofdm.constellation = Constellation::qam16;
    for (auto _ : state) benchmark::DoNotOptimize(run_ber(h, b, {8.0, 12.0}, policy(state)));
    label(state);
}

void BM_run_mse(benchmark::State& state) {
    const Config cfg = default_config();
    const auto lambert = RadiationPattern::lambertian(cfg.scenario.semi_angle);
    MseSetup m;
    m.trials = 2000;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_mse(cfg.scenario, lambert, cfg.experiment.device, Aiming::vertical(), m,
                                         {1e-11, 1e-10}, policy(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_lambertian_map)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_layout_fractions)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_ber)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_mse)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
