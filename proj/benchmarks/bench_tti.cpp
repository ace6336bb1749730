#include <benchmark/benchmark.h>

#include "ulsched/config.hpp"
#include "ulsched/engine.hpp"

namespace {

using namespace ulsched;

// Whole-run cost per TTI for each scheduler/drain pair at 30 UEs.
void BM_Run(benchmark::State& state, const char* policy) {
  ScenarioConfig c;
  const PolicyPair p = policy_pair_from_string(policy);
  c.policy = p.policy;
  c.ue_policy = p.ue_policy;
  c.ue_count = 30;
  c.tti_count = state.range(0);
  c.load = {26.0, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(run(c));
  state.SetItemsProcessed(state.iterations() * c.tti_count);
}
BENCHMARK_CAPTURE(BM_Run, dham, "dham")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, darts, "darts")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, dafs, "dafs")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, dafs_pf, "dafs-pf")->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
