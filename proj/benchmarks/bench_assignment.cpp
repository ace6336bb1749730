#include <benchmark/benchmark.h>

#include <random>

#include "ulsched/assignment.hpp"
#include "ulsched/schedulers.hpp"

namespace {

using namespace ulsched;

TrafficMatrix random_traffic(std::size_t n, std::size_t m, std::uint64_t seed) {
  static constexpr std::int64_t kTiers[] = {252, 504, 756};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> tier(0, 2);
  std::uniform_int_distribution<std::int64_t> buf(1, 20000);
  RewardMatrix p(n, m);
  std::vector<std::int64_t> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) p(i, j) = kTiers[tier(rng)];
    b[i] = buf(rng);
  }
  return traffic_matrix_from_capacity(p, b);
}

std::vector<UrgencyReport> random_urgency(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> u(0, 2000);
  std::vector<UrgencyReport> out(n);
  for (UrgencyReport& r : out) {
    r.m_vo = r.k_current = u(rng);
    r.history = u(rng);
    r.k = r.k_current + r.history;
  }
  return out;
}

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> d(-999, 999);
  RewardMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_max_assignment(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

void BM_Dham(benchmark::State& state) {
  const auto t = random_traffic(static_cast<std::size_t>(state.range(0)), 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(schedule_dham(t));
}
BENCHMARK(BM_Dham)->Arg(10)->Arg(30)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_Darts(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = random_traffic(n, 8, 3);
  const auto u = random_urgency(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(schedule_darts(t, u));
}
BENCHMARK(BM_Darts)->Arg(10)->Arg(30)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_SurplusRounds(benchmark::State& state) {
  const auto t = random_traffic(4, 8, 5);
  const auto u = random_urgency(4, 6);
  for (auto _ : state) benchmark::DoNotOptimize(schedule_darts(t, u));
}
BENCHMARK(BM_SurplusRounds)->Unit(benchmark::kMicrosecond);

}  // namespace
