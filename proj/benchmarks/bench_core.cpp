#include <benchmark/benchmark.h>

#include "zeno/bang_bang.hpp"
#include "zeno/collapse_oracle.hpp"
#include "zeno/lee_model.hpp"
#include "zeno/qft_model.hpp"

namespace {

const zeno::bang_bang::ExponentialDecay kSys{1.0, 0.0};

void BM_BandClickProbability(benchmark::State& state) {
    const double tau = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(zeno::bang_bang::band_click_probability(kSys, {1.0, 0.0}, tau));
    }
}
BENCHMARK(BM_BandClickProbability)->Arg(1)->Arg(10)->Arg(100);

void BM_SurvivalAmplitude(benchmark::State& state) {
    const zeno::lee::CutoffLeeModel model(0.0, 10.0, 0.1);
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(zeno::lee::survival_amplitude(model, t));
}
BENCHMARK(BM_SurvivalAmplitude)->Arg(1)->Arg(100)->Arg(500);

// one pulse of the oracle: free step plus collapse
void BM_EvolveAndCollapse(benchmark::State& state) {
    const zeno::collapse::KLattice lattice{200.0, static_cast<std::size_t>(state.range(0))};
    const auto band = zeno::collapse::snap_band(lattice, {1.0, 0.0});
    const auto start = zeno::collapse::StateVector::excited(lattice, kSys);
    for (auto _ : state) {
        auto s = zeno::collapse::evolve_free(start, kSys, 0.5);
        benchmark::DoNotOptimize(zeno::collapse::measure_collapse(s, band, zeno::collapse::Outcome::no_click));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolveAndCollapse)->Arg(1 << 14)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_LoopSelfEnergy(benchmark::State& state) {
    const zeno::qft::QftModel model{1.0, 0.2, 0.3, 3.0};
    for (auto _ : state) benchmark::DoNotOptimize(zeno::qft::loop_self_energy(model, 1.0));
}
BENCHMARK(BM_LoopSelfEnergy);

} // namespace

BENCHMARK_MAIN();
