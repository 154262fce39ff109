#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "spanlab/duality.hpp"
#include "spanlab/lagrangian.hpp"
#include "spanlab/locsys.hpp"
#include "spanlab/shapes.hpp"
#include "spanlab/spans.hpp"

using namespace spanlab;

namespace {

CategoryPtr finset(int n) { return std::make_shared<const FinCategory>(FinCategory::finset(n)); }

void BM_SigmaShape(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    SigmaShape s({n, n});
    benchmark::DoNotOptimize(s.poset().covers().size());
  }
}
BENCHMARK(BM_SigmaShape)->DenseRange(1, 4);

void BM_Pullback(benchmark::State& state) {
  const auto c = FinCategory::finset(4);
  const int f = c.from_function(2, 2, {0, 1});
  const int g = c.from_function(2, 2, {1, 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(pullback(c, f, g).cone.apex);
  }
}
BENCHMARK(BM_Pullback);

void BM_SpanLevel(benchmark::State& state) {
  const auto c = finset(static_cast<int>(state.range(0)));
  const auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    SpanLevel level(c, {n}, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(level.size());
  }
}
BENCHMARK(BM_SpanLevel)->Args({2, 1})->Args({2, 2})->Args({3, 1})->Args({3, 2})->Unit(benchmark::kMillisecond);

void BM_Segal(benchmark::State& state) {
  const auto c = finset(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(segal_check(c, {2}, static_cast<int>(state.range(0))).verdict);
  }
}
BENCHMARK(BM_Segal)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_Triangles(benchmark::State& state) {
  const auto c = FinCategory::finset(3);
  const auto spans = all_spans(c, 3);
  for (auto _ : state) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < spans.size(); i += 31) {
      ok += triangle_check(c, build_adjunction(c, spans[i])).verdict == Verdict::verified ? 1 : 0;
    }
    benchmark::DoNotOptimize(ok);
  }
}
BENCHMARK(BM_Triangles)->Unit(benchmark::kMillisecond);

void BM_LocalSystemLevel(benchmark::State& state) {
  const auto k = std::make_shared<const InternalCategory>(InternalCategory::cyclic_group(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    LocalSystemLevel level(finset(2), k, 1, 2);
    benchmark::DoNotOptimize(level.size());
  }
}
BENCHMARK(BM_LocalSystemLevel)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_LagrangianCompose(benchmark::State& state) {
  const auto x = SymplecticSpace::standard(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(1);
  const auto a = random_lagrangian(x, x, rng);
  const auto b = random_lagrangian(x, x, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose_lagrangian(a, b).basis.rows());
  }
}
BENCHMARK(BM_LagrangianCompose)->DenseRange(2, 8, 2);

} // namespace

BENCHMARK_MAIN();
