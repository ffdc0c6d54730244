#include <benchmark/benchmark.h>

#include "betadyn/analysis.hpp"

namespace betadyn {
namespace {

BetaPtr beta_of(const char* text) { return make_beta(BetaSpec::parse(text)); }

void BM_FollowerStep(benchmark::State& state) {
  const auto ctx = beta_of("golden");
  const DigitWord digits = DigitStream(ctx->from_rational(Rational(2, 7))).take(4096);
  for (auto _ : state) {
    ExactReal r = ctx->one();
    for (Digit d : digits) r = *follower_step(r, d);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(digits.size()));
}
BENCHMARK(BM_FollowerStep);

void BM_Enumerate(benchmark::State& state) {
  const auto ctx = beta_of("golden");
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t words = 0;
  for (auto _ : state) {
    words = 0;
    for_each_admissible(ctx, n, kDefaultEnumerationBudget, [&](std::span<const Digit>, const ExactReal&) { ++words; });
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words));
}
BENCHMARK(BM_Enumerate)->Arg(12)->Arg(18);

void BM_ExactSample(benchmark::State& state) {
  const auto ctx = beta_of("golden");
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mc_law(ctx, n, 1, seed++, McMode::exact));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ExactSample)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_DirectBits(benchmark::State& state) {
  const auto ctx = beta_of("2");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mc_law(ctx, 1'000'000, 1, seed++, McMode::direct_bits));
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_DirectBits)->Unit(benchmark::kMillisecond);

void BM_PlanMaterialize(benchmark::State& state) {
  auto s = std::make_shared<const EpSchedule>(build_ep_schedule(beta_of("golden"), 3, Phi::sqrt(), 3));
  const EpPointStream stream = ep_stream(s, 42);
  DigitWord buffer(std::size_t{1} << 20);
  for (auto _ : state) {
    PlanCursor cursor = stream.cursor();
    benchmark::DoNotOptimize(cursor.read(buffer));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(buffer.size()));
}
BENCHMARK(BM_PlanMaterialize)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace betadyn

BENCHMARK_MAIN();
