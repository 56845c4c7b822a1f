#include <benchmark/benchmark.h>

#include "lcl/lagrangian.hpp"

using namespace lcl;

namespace {

VelocityField random_field(const GridSpec& g, std::uint64_t seed) {
    RngStream rng(seed);
    VelocityField u(g);
    for_each_canonical(g.cutoff(), [&](int k1, int k2) {
        double w = std::exp(-0.1 * (k1 * k1 + k2 * k2));
        double kn = std::sqrt(double(k1 * k1 + k2 * k2));
        Complex a(rng.uniform(-1, 1), rng.uniform(-1, 1));
        u.add_mode_pair(k1, k2, w * a * (-k2 / kn), w * a * (k1 / kn));
    });
    return u;
}

void BM_eval_point(benchmark::State& state) {
    GridSpec g;
    g.N = int(state.range(0));
    g.nu = 0.05;
    VelocityField u = random_field(g, 3);
    SpectrumBlock b;
    field_to_block(u, b);
    PointEval pe;
    double x = 0.1;
    for (auto _ : state) {
        eval_block(b, x, 2.0 * x, int(state.range(1)), pe);
        x += 1e-3;
        benchmark::DoNotOptimize(pe.u[0]);
    }
}
BENCHMARK(BM_eval_point)->Args({64, 1})->Args({64, 2})->Args({96, 1});

void BM_triple_unit(benchmark::State& state) {
    GridSpec g;
    g.N = int(state.range(0));
    g.nu = 0.05;
    VelocityField u = random_field(g, 5);
    DensePath p(g, 0.0, 1e-3, 1000);
    SpectrumBlock b;
    field_to_block(u, b);
    for (int i = 0; i <= 1000; ++i) p.snapshot(i) = b;
    for (auto _ : state) {
        auto res = advance_triple_unit(p, {1.0, 2.0}, mat2_identity(),
                                       {1.0, 0.0}, 1e-3);
        benchmark::DoNotOptimize(res.log_growth);
    }
}
BENCHMARK(BM_triple_unit)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
