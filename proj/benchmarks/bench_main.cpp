#include <benchmark/benchmark.h>

#include "qws/dense_oracle.hpp"
#include "qws/krylov.hpp"
#include "qws/otoc.hpp"

using namespace qws;

namespace {

WalkConfig clean_config(int sites, int steps) {
    WalkConfig c;
    c.sites = sites;
    c.steps = steps;
    c.seed = 1;
    c.disorder = DisorderSpec{DisorderKind::Clean, 0.25 * kPi, 0.0, Distribution::UniformInterval};
    return c;
}

// One Heisenberg step on the rank-2 representation.
void BM_Rank2Step(benchmark::State& state) {
    const int sites = static_cast<int>(state.range(0));
    const std::vector<double> row{0.3};
    Rank2Operator op = initial_local_operator(Axis::X, 0, sites);
    WalkerState scratch(sites);
    for (auto _ : state) {
        conjugate_step_inplace(op, row, Direction::Backward, scratch);
        benchmark::DoNotOptimize(op);
    }
}
BENCHMARK(BM_Rank2Step)->RangeMultiplier(2)->Range(8, 1024);

// The same step as a dense U^dagger O U product.
void BM_DenseStep(benchmark::State& state) {
    const int sites = static_cast<int>(state.range(0));
    const std::vector<double> row{0.3};
    const auto u = dense::step_unitary(row, sites);
    dense::DenseOperator op = dense::local_operator(Axis::X, 0, sites);
    for (auto _ : state) {
        op = u.adjoint() * op * u;
        benchmark::DoNotOptimize(op.data());
    }
}
BENCHMARK(BM_DenseStep)->RangeMultiplier(2)->Range(8, 32);

void BM_OtocGrid(benchmark::State& state) {
    const int sites = static_cast<int>(state.range(0));
    const auto config = clean_config(sites, sites / 2);
    const auto pairs = all_pairs();
    for (auto _ : state) benchmark::DoNotOptimize(otoc_grid(config, pairs, Normalization::Trace));
}
BENCHMARK(BM_OtocGrid)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_GramMatrix(benchmark::State& state) {
    const auto config = clean_config(2 * static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(config, Axis::X, 0));
}
BENCHMARK(BM_GramMatrix)->Arg(30)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_KrylovDecompose(benchmark::State& state) {
    const int steps = static_cast<int>(state.range(0));
    const auto gram = gram_matrix(clean_config(2 * steps, steps), Axis::X, 0);
    for (auto _ : state) benchmark::DoNotOptimize(krylov_decompose(gram));
}
BENCHMARK(BM_KrylovDecompose)->Arg(30)->Arg(60)->Arg(120)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
