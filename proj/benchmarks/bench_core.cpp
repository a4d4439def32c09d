#include <benchmark/benchmark.h>

#include "perilib/dynamics.hpp"
#include "perilib/kepler.hpp"
#include "perilib/normal_form.hpp"
#include "perilib/potentials.hpp"
#include "perilib/tf_series.hpp"

namespace {

using namespace perilib;

void BM_SolveKepler(benchmark::State& state) {
    double ell = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_kepler(0.9, ell));
        ell += 1e-3;
    }
}
BENCHMARK(BM_SolveKepler);

void BM_FEps(benchmark::State& state) {
    const QuadratureSpec quad{static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(f_eps(0.25, 0.7, quad));
}
BENCHMARK(BM_FEps)->Arg(64)->Arg(256)->Arg(1024);

// Close to the singular locus the adaptive refinement kicks in.
void BM_FEpsNearLocus(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(f_eps(0.25, 1.25 * (1.0 - 1e-4)));
}
BENCHMARK(BM_FEpsNearLocus);

void BM_UHat(benchmark::State& state) {
    const QuadratureSpec quad{static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(u_hat(0.3, 1.0, 0.4, 1.1, quad));
}
BENCHMARK(BM_UHat)->Arg(64)->Arg(256)->Arg(1024);

void BM_IntegrateSecular(benchmark::State& state) {
    HamiltonianSpec spec;
    spec.masses = derive_mass_params(1.0, 0.1, Frame::m0centric);
    const SecularState s0{0.1, 0.0, 100.0, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(integrate(spec, s0, 1000.0));
}
BENCHMARK(BM_IntegrateSecular)->Unit(benchmark::kMillisecond);

const DeskModel& desk() {
    static const DeskModel m = build_desk_model(default_desk_model());
    return m;
}

void BM_PoissonBracket(benchmark::State& state) {
    const DeskModel& m = desk();
    for (auto _ : state) benchmark::DoNotOptimize(poisson_bracket(m.f, m.h));
}
BENCHMARK(BM_PoissonBracket)->Unit(benchmark::kMillisecond);

void BM_NormalFormStep(benchmark::State& state) {
    const DeskModel& m = desk();
    NormalFormOptions opt;
    opt.weights = default_desk_model().weights;
    opt.nqp.x0 = default_desk_model().x0;
    for (auto _ : state) benchmark::DoNotOptimize(normal_form_steps(m.f, m.freq, 1, opt));
}
BENCHMARK(BM_NormalFormStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
