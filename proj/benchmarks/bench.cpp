#include <benchmark/benchmark.h>

#include "kslie/integrate.hpp"
#include "kslie/sampling.hpp"
#include "kslie/superpose.hpp"

using namespace kslie;

namespace {

const Point5 kP(1, 2, 0.1, 1, 1);
const expr::CoeffSet kStandard = expr::parse_coeffs({"1", "sin(t)", "cos(t)", "1", "t"});

void BM_FieldEval(benchmark::State& state) {
    for (auto _ : state) {
        for (int alpha = 1; alpha <= 5; ++alpha)
            benchmark::DoNotOptimize(eval_field(alpha, kP));
    }
}
BENCHMARK(BM_FieldEval);

void BM_OmegaMatrices(benchmark::State& state) {
    for (auto _ : state) {
        for (int i = 1; i <= 4; ++i) benchmark::DoNotOptimize(omega(i, kP));
    }
}
BENCHMARK(BM_OmegaMatrices);

void BM_HamiltonianPairing(benchmark::State& state) {
    for (auto _ : state) {
        for (int alpha = 1; alpha <= 5; ++alpha)
            for (int i = 1; i <= 4; ++i)
                benchmark::DoNotOptimize(verify_hamiltonian_pair(alpha, i, kP));
    }
}
BENCHMARK(BM_HamiltonianPairing);

void BM_PoissonBracket(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(poisson_bracket(1, 2, 1, kP));
}
BENCHMARK(BM_PoissonBracket);

void BM_LieBracket(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(lie_bracket(1, 3, kP));
}
BENCHMARK(BM_LieBracket);

void BM_StructureFit(benchmark::State& state) {
    ChartSampler sampler(1);
    const std::vector<Point5> pts = sampler.points(16);
    for (auto _ : state) benchmark::DoNotOptimize(fit_structure_constants(pts));
}
BENCHMARK(BM_StructureFit);

void BM_ConservedDirectionalDerivatives(benchmark::State& state) {
    ChartSampler sampler(2);
    const ProlongedPoint P = sampler.prolonged(2);
    for (auto _ : state)
        for (int alpha = 1; alpha <= 5; ++alpha)
            benchmark::DoNotOptimize(
                prolonged_directional_derivative(ConservedQuantityId::C1E1, alpha, P));
}
BENCHMARK(BM_ConservedDirectionalDerivatives);

void BM_IntegrateBoundedPair(benchmark::State& state) {
    const ProlongedPoint init(
        {Point5(-0.4, 0.5, 0.1, 0.2, -0.3), Point5(-0.3, 0.45, -0.2, 0.1, 0.4)});
    IntegratorConfig cfg;
    cfg.t0 = 0;
    cfg.t1 = 1;
    for (auto _ : state) benchmark::DoNotOptimize(integrate(init, kStandard, cfg));
}
BENCHMARK(BM_IntegrateBoundedPair);

void BM_NewtonReconstruct(benchmark::State& state) {
    const Point3 xi1(-0.4, 0.5, 0.1), xi2(-0.3, 0.45, -0.2);
    const ConstantsTriple k = constants_from_pair(xi1, xi2);
    const Point3 guess(-0.38, 0.52, 0.08);
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(xi2, k, guess));
}
BENCHMARK(BM_NewtonReconstruct);

void BM_ExprEval(benchmark::State& state) {
    double t = 0;
    for (auto _ : state) {
        t += 1e-3;
        benchmark::DoNotOptimize(kStandard.eval(t));
    }
}
BENCHMARK(BM_ExprEval);

}  // namespace

BENCHMARK_MAIN();
