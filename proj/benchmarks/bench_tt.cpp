#include <cmath>
#include <cstdint>
#include <random>

#include <benchmark/benchmark.h>

#include "qtt/corpus.hpp"
#include "qtt/tensor_train.hpp"

namespace {

qtt::TensorizedFunction sample(int level, int degree) {
    return qtt::tensorize([](double x) { return std::sin(7.0 * x) + std::sqrt(x); }, level,
                          qtt::PolySpace::make(degree, 2));
}

void BM_TtSvd(benchmark::State& state) {
    const auto tf = sample(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(qtt::tt_svd(tf, 1e-10));
    state.SetComplexityN(static_cast<std::int64_t>(tf.elements()));
}
BENCHMARK(BM_TtSvd)->DenseRange(8, 16, 2)->Complexity();

void BM_Round(benchmark::State& state) {
    std::mt19937_64 rng(0);
    const auto s = qtt::PolySpace::make(3, 2);
    const int d = static_cast<int>(state.range(0));
    const auto a = qtt::random_train(s, d, 16, rng);
    const auto sum = qtt::add(a, a);
    for (auto _ : state) benchmark::DoNotOptimize(qtt::round(sum, 1e-10));
}
BENCHMARK(BM_Round)->RangeMultiplier(4)->Range(8, 512);

void BM_Eval(benchmark::State& state) {
    const auto tt = qtt::tt_svd(sample(static_cast<int>(state.range(0)), 3), 1e-10);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(tt.eval(u(rng)));
}
BENCHMARK(BM_Eval)->DenseRange(8, 16, 4);

void BM_Add(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const auto s = qtt::PolySpace::make(1, 2);
    const int d = static_cast<int>(state.range(0));
    const auto a = qtt::random_train(s, d, 8, rng);
    const auto b = qtt::random_train(s, d, 8, rng);
    for (auto _ : state) benchmark::DoNotOptimize(qtt::add(a, b));
}
BENCHMARK(BM_Add)->RangeMultiplier(4)->Range(8, 512);

void BM_ExtendRound(benchmark::State& state) {
    const auto tt = qtt::tt_svd(sample(8, 3), 1e-10);
    const int to = 8 + static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qtt::round(qtt::extend_level(tt, to), 1e-12));
}
BENCHMARK(BM_ExtendRound)->RangeMultiplier(4)->Range(4, 256);

}  // namespace

BENCHMARK_MAIN();
