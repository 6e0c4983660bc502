#include "dradp/domains/chain.hpp"
#include "dradp/lower_bound.hpp"
#include "dradp/optim/simplex.hpp"
#include "dradp/problem.hpp"
#include "dradp/rng.hpp"
#include "dradp/solver.hpp"

#include <benchmark/benchmark.h>

using namespace dradp;

namespace {

// dense random LP with a known feasible point, sized by the benchmark argument
optim::LinearProgram random_lp(Index n_vars, Index n_rows, std::uint64_t seed) {
    Rng rng(seed);
    optim::LinearProgram lp(0, optim::Sense::maximize);
    for (Index j = 0; j < n_vars; ++j)
        lp.add_variable(rng.uniform(-1.0, 1.0), 0.0, 10.0);
    for (Index i = 0; i < n_rows; ++i) {
        std::vector<std::pair<Index, double>> terms;
        for (Index j = 0; j < n_vars; ++j)
            terms.emplace_back(j, rng.uniform(-1.0, 1.0));
        lp.add_row(std::move(terms), optim::RowType::less_equal, rng.uniform(1.0, 5.0));
    }
    return lp;
}

void BM_SimplexDense(benchmark::State& state) {
    const Index n = state.range(0);
    const optim::LinearProgram lp = random_lp(n, n, 7);
    for (auto _ : state) {
        const optim::LpSolution sol = optim::simplex_solve(lp);
        benchmark::DoNotOptimize(sol.objective);
    }
}
BENCHMARK(BM_SimplexDense)->Arg(20)->Arg(80)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_EvaluateLowerBoundChain(benchmark::State& state) {
    const chain::Instance inst = chain::generate(3);
    const DradpProblem problem = make_tabular_problem(inst.mdp, inst.basis);
    const RandomizedPolicy pi = RandomizedPolicy::uniform(inst.mdp.n_states(), inst.mdp.n_actions());
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_lower_bound(problem, pi));
}
BENCHMARK(BM_EvaluateLowerBoundChain)->Unit(benchmark::kMicrosecond);

void BM_SolveChain(benchmark::State& state) {
    const chain::Instance inst = chain::generate(3);
    const DradpProblem problem = make_tabular_problem(inst.mdp, inst.basis);
    DradpOptions options;
    options.time_limit_ms = static_cast<double>(state.range(0));
    for (auto _ : state) {
        const DradpSolution sol = solve(problem, options);
        benchmark::DoNotOptimize(sol.objective);
    }
    state.counters["work_ms"] = options.time_limit_ms;
}
BENCHMARK(BM_SolveChain)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
