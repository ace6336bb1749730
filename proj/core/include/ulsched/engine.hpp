#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "ulsched/config.hpp"
#include "ulsched/metrics.hpp"

namespace ulsched {

// Hexagonal serving cell area for the configured inter-site distance.
double cell_area_km2(const ChannelConfig& cfg);

// Seven-cell layout with UEs dropped uniformly in the serving hexagon, either
// a fixed count or a Poisson-distributed count with mean intensity * area.
// UEs closer than min_distance_m are redrawn. Shadowing is drawn per UE from
// its own substream. Same (cfg, seed) gives the same topology.
Topology deploy(const ScenarioConfig& cfg, std::uint64_t seed);

struct RunResult {
  MetricsSummary summary;
  std::shared_ptr<const Topology> topology;  // null for CQI-trace runs
};

// Runs one scenario: per TTI, arrivals -> enqueue -> age_and_drop -> urgency
// -> CQI -> scheduler -> UE drains -> metrics. Validates the config first and
// throws ConfigError before TTI 0 on failure.
RunResult run_scenario(const ScenarioConfig& cfg);
MetricsSummary run(const ScenarioConfig& cfg);

struct SweepRun {
  RunLabel label;
  MetricsSummary summary;
};

// One run per (load point, policy, replicate), executed on up to `jobs`
// threads. Replicate r uses seed + r, so policies are paired by seed.
// Results come back in (point, policy, replicate) order regardless of jobs.
std::vector<SweepRun> sweep(const ScenarioConfig& cfg, int jobs = 1);

// Same as sweep() over an explicit list of configs.
std::vector<MetricsSummary> run_all(const std::vector<ScenarioConfig>& cfgs,
                                    int jobs = 1);

}  // namespace ulsched
