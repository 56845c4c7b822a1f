#include <benchmark/benchmark.h>

#include "lcl/planner.hpp"

using namespace lcl;

namespace {

void BM_factorize(benchmark::State& state) {
    RngStream rng(7);
    Mat2 A = mat2_mul(Transvection{Transvection::T12, 1.3}.matrix(),
                      mat2_mul(Transvection{Transvection::T21, -0.8}.matrix(),
                               Transvection{Transvection::T12, 0.4}.matrix()));
    for (auto _ : state) {
        auto f = transvection_factorize(A);
        benchmark::DoNotOptimize(f.size());
    }
}
BENCHMARK(BM_factorize);

void BM_shift_plan(benchmark::State& state) {
    NoiseParams np = NoiseParams::from_preset("haar-polynomial(80,1.5)");
    for (auto _ : state) {
        ControlPlan plan = shift_position({0.0, 0.0}, {3.0, 2.0}, 1.0, np);
        benchmark::DoNotOptimize(plan.segments.size());
    }
}
BENCHMARK(BM_shift_plan);

}  // namespace
