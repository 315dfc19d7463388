#include <benchmark/benchmark.h>

#include <random>

#include "hydro/blstm.hpp"
#include "hydro/reduction.hpp"
#include "hydro/synthetic.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

hydro::BlstmConfig shape(const benchmark::State& state) {
    return {6, static_cast<std::size_t>(state.range(0)), 12, 4, 2};
}

}  // namespace

static void BM_BlstmForward(benchmark::State& state) {
    const auto model = hydro::BlstmModel::initialize(shape(state), 1);
    const auto window = noise(12 * 6, 2);
    for (auto _ : state) benchmark::DoNotOptimize(hydro::blstm_forward(window, model));
}
BENCHMARK(BM_BlstmForward)->Arg(32)->Arg(256);

static void BM_BlstmBackward(benchmark::State& state) {
    const auto model = hydro::BlstmModel::initialize(shape(state), 1);
    const std::size_t batch = 128;
    const auto inputs = noise(batch * 12 * 6, 3);
    const auto targets = noise(batch * 4 * 2, 4);
    for (auto _ : state) benchmark::DoNotOptimize(hydro::backward(inputs, targets, batch, model));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(batch));
}
BENCHMARK(BM_BlstmBackward)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Reduce(benchmark::State& state) {
    auto cfg = hydro::SynthConfig::watershed_defaults();
    const auto series = hydro::generate(cfg);
    const auto w = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hydro::reduce(series, {w, 1}));
}
BENCHMARK(BM_Reduce)->Arg(7)->Arg(28)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
