#include <benchmark/benchmark.h>

#include "lcl/solver.hpp"

using namespace lcl;

namespace {

GridSpec grid_of(int N, double nu) {
    GridSpec g;
    g.N = N;
    g.nu = nu;
    return g;
}

void BM_substep(benchmark::State& state) {
    GridSpec g = grid_of(int(state.range(0)), 0.05);
    NoiseParams np = NoiseParams::from_preset("haar-geometric(2)");
    RngStream rng(1);
    NoiseRealization zeta = sample_segment(np, rng);
    PdeStepper s(g);
    VelocityField u0(g);
    ForcingBasis::add_normalized(u0, 0, 1.0);
    s.set_state(u0);
    for (auto _ : state) {
        s.substep(&zeta, 1e-3);
        if (s.time() > 0.9) s.set_time(0.0);
    }
}
BENCHMARK(BM_substep)->Arg(32)->Arg(64)->Arg(96);

void BM_evolve_unit(benchmark::State& state) {
    GridSpec g = grid_of(int(state.range(0)), 0.05);
    NoiseParams np = NoiseParams::from_preset("haar-geometric(2)");
    RngStream rng(1);
    NoiseRealization zeta = sample_segment(np, rng);
    PdeStepper s(g);
    VelocityField u(g);
    DensePath path;
    for (auto _ : state) u = evolve_unit_with(s, u, zeta, 1e-3, &path);
}
BENCHMARK(BM_evolve_unit)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
