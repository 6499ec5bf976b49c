#include <benchmark/benchmark.h>

#include "ttround/orthogonalize.hpp"
#include "ttround/round_rand.hpp"
#include "ttround/sketch.hpp"

using namespace ttround;

namespace {

TTTensor uniform_tt(Index d, Index n, Index r, std::uint64_t seed) {
    std::vector<Index> modes(static_cast<std::size_t>(d), n);
    std::vector<Index> ranks(static_cast<std::size_t>(d + 1), r);
    ranks.front() = ranks.back() = 1;
    return random_gaussian_tt(modes, ranks, seed);
}

} // namespace

static void BM_DeterministicRound(benchmark::State& state) {
    const Index r = state.range(0);
    TTTensor x = uniform_tt(6, 32, r, 1);
    for (auto _ : state) {
        TTTensor y = round_deterministic(x, 1e-10);
        benchmark::DoNotOptimize(y.max_rank());
    }
}
BENCHMARK(BM_DeterministicRound)->Arg(8)->Arg(16)->Arg(32);

static void BM_FixedKRPRound(benchmark::State& state) {
    const Index r = state.range(0);
    TTTensor x = uniform_tt(6, 32, r, 2);
    const std::vector<Index> targets(5, 8);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        TTTensor y = round_fixed_krp(x, targets, seed++);
        benchmark::DoNotOptimize(y.max_rank());
    }
}
BENCHMARK(BM_FixedKRPRound)->Arg(8)->Arg(16)->Arg(32);

static void BM_AdaptiveKRPRound(benchmark::State& state) {
    const Index r = state.range(0);
    TTTensor x = uniform_tt(6, 32, r, 3);
    AdaptiveConfig cfg;
    cfg.tolerance = 1e-6;
    for (auto _ : state) {
        cfg.seed++;
        TTTensor y = round_adaptive_krp(x, cfg);
        benchmark::DoNotOptimize(y.max_rank());
    }
}
BENCHMARK(BM_AdaptiveKRPRound)->Arg(8)->Arg(16);

static void BM_KRPPartialContraction(benchmark::State& state) {
    const Index r = state.range(0);
    TTTensor x = uniform_tt(6, 32, r, 4);
    GaussianStream stream(5);
    auto factors = draw_gaussian_factors(x, 2, 8, stream);
    for (auto _ : state) {
        auto w = krp_partial_contractions_rl(x, factors);
        benchmark::DoNotOptimize(w.w.front().sum());
    }
}
BENCHMARK(BM_KRPPartialContraction)->Arg(8)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
