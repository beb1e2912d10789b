#include <rotunsim/experiments.hpp>
#include <rotunsim/telemetry.hpp>

#include <benchmark/benchmark.h>

#include <sstream>

using namespace rotunsim;

static void BM_RunE1(benchmark::State& state) {
    const Scenario s = scenario_e1(static_cast<double>(state.range(0)));
    const SimConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(run(s, cfg));
    state.SetItemsProcessed(state.iterations() * 9000);  // physics steps
}
BENCHMARK(BM_RunE1)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_RunE4(benchmark::State& state) {
    const Scenario s = scenario_e4();
    const SimConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(run(s, cfg));
    state.SetItemsProcessed(state.iterations() * 35000);
}
BENCHMARK(BM_RunE4)->Unit(benchmark::kMillisecond);

static void BM_CompareStability(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(compare_stability());
}
BENCHMARK(BM_CompareStability)->Unit(benchmark::kMillisecond);

static void BM_WriteCsv(benchmark::State& state) {
    const Trajectory traj = run(scenario_e1(2.0), SimConfig{});
    for (auto _ : state) {
        std::ostringstream out;
        write_csv(traj, out);
        benchmark::DoNotOptimize(out.str());
    }
}
BENCHMARK(BM_WriteCsv)->Unit(benchmark::kMicrosecond);
