#include <benchmark/benchmark.h>

#include "pvar/lambda_variation.hpp"
#include "pvar/lifting.hpp"
#include "pvar/openness.hpp"
#include "pvar/random_instances.hpp"
#include "pvar/variation.hpp"

using namespace pvar;

namespace {

StepFunction make_input(std::size_t pieces, std::uint64_t seed) {
    Rng rng(seed);
    RandomFunctionSpec spec;
    spec.min_pieces = pieces;
    spec.max_pieces = pieces;
    return random_step_function(rng, spec);
}

void BM_TotalVarP(benchmark::State& state) {
    StepFunction f = make_input(static_cast<std::size_t>(state.range(0)), 7);
    PExponent p(1.5);
    for (auto _ : state) benchmark::DoNotOptimize(total_var_p(f, p).first);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TotalVarP)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_BruteForceVarP(benchmark::State& state) {
    StepFunction f = make_input(static_cast<std::size_t>(state.range(0)), 11);
    PExponent p(1.5);
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_var_p(f, p));
}
BENCHMARK(BM_BruteForceVarP)->DenseRange(8, 16, 4);

void BM_IterationStep(benchmark::State& state) {
    const auto pieces = static_cast<std::size_t>(state.range(0));
    Rng rng(13);
    auto [F, G] = random_nondegenerate_pair(rng, pieces, Field::Complex, 0.5);
    StepFunction h = scale(constant_step_function(1.0), 1e-6);
    IterationState s = make_iteration_state(F, G, h);
    for (auto _ : state) benchmark::DoNotOptimize(iteration_step(s).n);
}
BENCHMARK(BM_IterationStep)->RangeMultiplier(8)->Range(16, 1024);

void BM_FactorPerturbation(benchmark::State& state) {
    Rng rng(17);
    auto [F, G] = random_nondegenerate_pair(rng, static_cast<std::size_t>(state.range(0)),
                                            Field::Real, 0.5);
    PExponent p(2.0);
    auto config = make_openness_config(F, G, p, 0.5);
    std::vector<double> grid;
    std::set_union(F.breakpoints().begin(), F.breakpoints().end(), G.breakpoints().begin(),
                   G.breakpoints().end(), std::back_inserter(grid));
    StepFunction h = random_perturbation(rng, grid, Field::Real, 0.9 * config.eta,
                                         bvp_norm_fn(p));
    FactorOptions options;
    options.epsilon = 0.5;
    for (auto _ : state)
        benchmark::DoNotOptimize(factor_perturbation(F, G, h, p, options).steps);
}
BENCHMARK(BM_FactorPerturbation)->Arg(16)->Arg(64)->Arg(256);

void BM_LiftPair(benchmark::State& state) {
    Rng rng(19);
    auto [F, G] = random_degenerate_pair(rng, static_cast<std::size_t>(state.range(0)),
                                         Field::Real);
    PExponent p(2.0);
    for (auto _ : state) benchmark::DoNotOptimize(lift_pair(F, G, p, 0.25).plan.eta);
}
BENCHMARK(BM_LiftPair)->Arg(8)->Arg(64)->Arg(256);

void BM_LambdaVarExact(benchmark::State& state) {
    StepFunction f = make_input(static_cast<std::size_t>(state.range(0)), 23);
    PExponent p(1.0);
    auto lambda = LambdaSequence::harmonic();
    for (auto _ : state) benchmark::DoNotOptimize(lambda_var_p(f, lambda, p).value);
}
BENCHMARK(BM_LambdaVarExact)->DenseRange(4, 12, 4);

void BM_LambdaVarGreedy(benchmark::State& state) {
    StepFunction f = make_input(static_cast<std::size_t>(state.range(0)), 29);
    PExponent p(1.0);
    auto lambda = LambdaSequence::harmonic();
    for (auto _ : state)
        benchmark::DoNotOptimize(lambda_var_p_lower_bound(f, lambda, p).value);
}
BENCHMARK(BM_LambdaVarGreedy)->Arg(32)->Arg(96);

}  // namespace

BENCHMARK_MAIN();
