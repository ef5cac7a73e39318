#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "sfac/core.hpp"
#include "sfac/kernels.hpp"
#include "sfac/samplers.hpp"

namespace {

using sfac::kernels::Exec;

const sfac::PointPattern& poisson_box() {
    static const sfac::PointPattern p = sfac::sample_poisson(sfac::Window::box({60.0, 60.0}), 1.0 / M_PI, 7);
    return p;
}

const sfac::PointPattern& poisson_ball() {
    static const sfac::PointPattern p = sfac::sample_poisson(sfac::Window::ball(2, 40.0), 1.0 / M_PI, 11);
    return p;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_ExpSums(benchmark::State& state) {
    const auto& p = poisson_box();
    const sfac::WaveGrid grid = sfac::allowed_wavevectors(p.window(), 1.5, true);
    const std::vector<double> weights(p.size(), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sfac::kernels::exp_sums(p.coords(), weights, 2, grid.wavevectors, exec_of(state)));
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_PairKernelSums(benchmark::State& state) {
    const auto& p = poisson_ball();
    std::vector<double> ks;
    for (int i = 1; i <= 8; ++i) ks.push_back(0.2 * i);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sfac::kernels::pair_kernel_sums(p.coords(), 2, ks, exec_of(state)));
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_PcfPairSums(benchmark::State& state) {
    const auto& p = poisson_box();
    std::vector<double> r;
    for (int i = 1; i <= 128; ++i) r.push_back(0.1 * i);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sfac::kernels::pcf_pair_sums(p.coords(), p.window(), r, 0.5, exec_of(state)));
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_ExpSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairKernelSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PcfPairSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
