#include <rotunsim/control.hpp>
#include <rotunsim/plant.hpp>

#include <benchmark/benchmark.h>

using namespace rotunsim;

static void BM_Derivatives(benchmark::State& state) {
    const PlantParams p;
    const PlantState s{0.1, -0.2, 0.3, 0.1, 20.0, 3.0};
    const PlantInputs in{3.0, 0.3, 5.0, 10.0};
    for (auto _ : state) benchmark::DoNotOptimize(derivatives(s, in, p));
}
BENCHMARK(BM_Derivatives);

static void BM_StepRk4(benchmark::State& state) {
    const PlantParams p;
    PlantState s{0.1, 0.0, 0.1, 0.0, 0.0, 3.0};
    const PlantInputs in{3.0, 0.1, 0.0, 0.0};
    for (auto _ : state) {
        s = step_rk4(s, in, p, 1e-3);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_StepRk4);

static void BM_EquilibriumBeta(benchmark::State& state) {
    const PlantParams p;
    for (auto _ : state) benchmark::DoNotOptimize(equilibrium_beta(0.26, 1.0, p));
}
BENCHMARK(BM_EquilibriumBeta);

static void BM_ControllerStep(benchmark::State& state) {
    const PlantParams p;
    const ControlConfig cfg;
    ControllerState cs;
    for (auto _ : state) {
        benchmark::DoNotOptimize(controller_step({0.2, 0.1, 3.0}, {3.0, 0.26}, 0.01, cs, cfg, p));
    }
}
BENCHMARK(BM_ControllerStep);
