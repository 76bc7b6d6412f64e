// Serial reference against OpenMP kernels. Arg(0) = serial, Arg(1) = OpenMP.
#include <benchmark/benchmark.h>

#include "cavheat/arrayn.hpp"
#include "cavheat/config.hpp"
#include "cavheat/experiments.hpp"

using namespace cavheat;

namespace {

Execution policy_of(const benchmark::State& state)
{
    return state.range(1) == 0 ? Execution::serial : Execution::openmp;
}

ArraySystem chain(int sites)
{
    ArraySystem a;
    a.sites = sites;
    a.omega = 1.0;
    a.coupling = 0.05;
    a.left = {0.15, 0.5};
    a.right = {0.15, 0.0};
    a.atom = AtomSpec{2.0, 0.1, -1.0, sites};
    return a;
}

void BM_VectorizedOperator(benchmark::State& state)
{
    const auto gens = arrayn::build_generators(chain(static_cast<int>(state.range(0))));
    const Execution policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(arrayn::vectorized_operator(gens, policy));
}

void BM_SizeScan(benchmark::State& state)
{
    const auto base = chain(2);
    const int n_max = static_cast<int>(state.range(0));
    const Execution policy = policy_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(arrayn::size_scan(base, 2, n_max, arrayn::AtomPlacement::last_site, policy));
    }
}

void BM_ChiSweep(benchmark::State& state)
{
    cli::Config config;
    config.set("atom", "yes");
    config.set("sweep_min", "0");
    config.set("sweep_max", "1.5");
    config.set("sweep_step", std::to_string(1.5 / static_cast<double>(state.range(0) - 1)));
    const auto spec = cli::make_spec(cli::Experiment::chi_sweep, config);
    const Execution policy = policy_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(cli::run_experiment(spec, policy));
}

} // namespace

BENCHMARK(BM_VectorizedOperator)->ArgsProduct({{8, 16, 24}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SizeScan)->ArgsProduct({{8, 12, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChiSweep)->ArgsProduct({{1001}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
