// bench_ladder.cpp — Scaling of the collective-ladder pipeline with atom number.
// The state vector is 4N+1 entries, so generator assembly and one relaxation
// window should scale polynomially in N, never exponentially.

#include <benchmark/benchmark.h>

#include "blockade/decomposition.hpp"
#include "blockade/ladder.hpp"
#include "blockade/warnings.hpp"

namespace la = blockade::ladder;
namespace de = blockade::decomposition;

namespace {

la::LadderParams params_for(int n)
{
    return {.n_atoms = n,
            .rates = {.gamma = 1.0, .gamma_rg = 1.0, .gamma_rd = 1.0, .omega = 30.0},
            .flipping = la::FlippingModel::proportional(0.5, 0.5)};
}

void BM_GeneratorAssembly(benchmark::State& state)
{
    const auto p = params_for(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto gen = la::generator(p);
        benchmark::DoNotOptimize(gen.matrix.data());
    }
    state.counters["dim"] = static_cast<double>(4 * state.range(0) + 1);
}

void BM_RelaxationWindow(benchmark::State& state)
{
    const auto p = params_for(static_cast<int>(state.range(0)));
    const auto grid = blockade::uniform_grid(2.0, 21);
    for (auto _ : state) {
        auto states = la::evolve(p, grid);
        benchmark::DoNotOptimize(states.back().dark_pop);
    }
    state.counters["dim"] = static_cast<double>(4 * state.range(0) + 1);
}

void BM_CascadeWindow(benchmark::State& state)
{
    const auto p = params_for(static_cast<int>(state.range(0)));
    const auto grid = blockade::uniform_grid(2.0 * state.range(0), 101);
    for (auto _ : state) {
        auto traj = de::evolve_pj(p, grid);
        benchmark::DoNotOptimize(traj.p.data());
    }
}

void BM_ResolventSpectrum(benchmark::State& state)
{
    const auto p = params_for(static_cast<int>(state.range(0)));
    const auto grid = blockade::symmetric_grid(la::default_delta_span(p), 513);
    la::SpectrumOptions opts;
    opts.method = blockade::SpectrumMethod::resolvent;
    const double t = la::default_seed_time(p);
    for (auto _ : state) {
        auto s = la::scattered_spectrum(p, t, grid, opts);
        benchmark::DoNotOptimize(s.values.data());
    }
}

} // namespace

BENCHMARK(BM_GeneratorAssembly)->RangeMultiplier(2)->Range(1, 128);
BENCHMARK(BM_RelaxationWindow)->RangeMultiplier(2)->Range(1, 32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CascadeWindow)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResolventSpectrum)->RangeMultiplier(2)->Range(1, 16)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv)
{
    blockade::set_warning_handler([](const std::string&) {});
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
