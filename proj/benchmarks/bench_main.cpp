#include <memory>

#include <benchmark/benchmark.h>

#include "wavefio/fft.hpp"
#include "wavefio/fio.hpp"
#include "wavefio/polyphase.hpp"
#include "wavefio/random.hpp"
#include "wavefio/tiling.hpp"
#include "wavefio/transport.hpp"
#include "wavefio/wavesim.hpp"

using namespace wavefio;

namespace {

Field2D noise(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Array2D<double> a(m, m);
    for (auto& v : a.values()) v = rng.normal();
    return Field2D(std::move(a));
}

std::shared_ptr<const FrequencyTiling> tiling_for(std::size_t m) {
    TilingConfig c;
    c.side = m;
    if (m == 64) {
        c.k_min = 1;
        c.k_max = 3;
        c.wedges = {8, 8, 16};
    }
    return std::make_shared<const FrequencyTiling>(build_tiling(c));
}

void BM_Fft2(benchmark::State& state) {
    const Field2D f = noise(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(ifft2(fft2(f)));
}
BENCHMARK(BM_Fft2)->Arg(64)->Arg(128)->Arg(256);

void BM_BuildTiling(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(tiling_for(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BuildTiling)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Analyze(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto t = tiling_for(m);
    const Field2D f = noise(m, 2);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(f, *t));
}
BENCHMARK(BM_Analyze)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ApplyFioConstant(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const FioPlan plan = constant_speed_plan(tiling_for(m), 1.0, 0.1);
    const Field2D f = noise(m, 3);
    for (auto _ : state) benchmark::DoNotOptimize(apply_fio(f, plan));
}
BENCHMARK(BM_ApplyFioConstant)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_TracedPlan(benchmark::State& state) {
    const auto t = tiling_for(64);
    const WaveSpeed w = WaveSpeed::gaussian(0.5, 0.5, 0.15, -0.5, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(traced_plan(t, w, 0.1, 64));
}
BENCHMARK(BM_TracedPlan)->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const DiscreteMeasure a = to_measure(noise(m, 4));
    const DiscreteMeasure b = to_measure(noise(m, 5));
    SinkhornOptions opt;
    opt.epsilon = 1e-2;
    for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_w2(a, b, opt));
}
BENCHMARK(BM_Sinkhorn)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FdtdSteps(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    SimConfig cfg = make_sim_config(m, WaveSpeed::gaussian(0.5, 0.5, 0.15, -0.5, 1.0), 1.0, 0.3);
    cfg.steps = 100;
    const Field2D p0 = noise(m, 6);
    const Field2D v0(m);
    for (auto _ : state) benchmark::DoNotOptimize(fdtd_propagate(p0, v0, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(cfg.steps));
}
BENCHMARK(BM_FdtdSteps)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Polyphase(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const int levels = static_cast<int>(state.range(1));
    Rng rng(7);
    Array2D<double> taps(k, k), x(64, 64);
    for (auto& v : taps.values()) v = rng.normal();
    for (auto& v : x.values()) v = rng.normal();
    const Filter2D h(std::move(taps));
    for (auto _ : state) {
        if (levels == 0) {
            benchmark::DoNotOptimize(convolve_periodic(x, h.kernel()));
        } else {
            benchmark::DoNotOptimize(polyphase_apply(x, h, levels));
        }
    }
}
// levels 0 is the direct periodic convolution.
BENCHMARK(BM_Polyphase)->Args({9, 0})->Args({9, 1})->Args({9, 2})->Args({9, 3})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
