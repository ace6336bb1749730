#include "ulsched/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

namespace ulsched {

double cell_area_km2(const ChannelConfig& cfg) {
  const double r_km = cfg.inter_site_distance_m / std::numbers::sqrt3 / 1000.0;
  return 1.5 * std::numbers::sqrt3 * r_km * r_km;
}

Topology deploy(const ScenarioConfig& cfg, std::uint64_t seed) {
  const ChannelConfig& ch = cfg.channel;
  Topology topo;
  topo.serving = {0.0, 0.0};
  topo.neighbors = first_tier_centers(ch.inter_site_distance_m);
  topo.cell_radius_m = ch.inter_site_distance_m / std::numbers::sqrt3;

  Rng rng = make_stream(seed, Stream::deployment);
  std::size_t n = cfg.ue_count;
  if (cfg.deployment == DeploymentMode::ppp) {
    std::poisson_distribution<std::size_t> count(cfg.ppp_intensity_per_km2 *
                                                 cell_area_km2(ch));
    n = count(rng);
  }

  std::uniform_real_distribution<double> ux(-topo.cell_radius_m, topo.cell_radius_m);
  std::uniform_real_distribution<double> uy(-topo.cell_radius_m * std::numbers::sqrt3 / 2.0,
                                            topo.cell_radius_m * std::numbers::sqrt3 / 2.0);
  topo.ues.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    UePlacement u;
    do {
      u.position = {ux(rng), uy(rng)};
    } while (!inside_hexagon(u.position, topo.serving, topo.cell_radius_m) ||
             distance(u.position, topo.serving) < ch.min_distance_m);
    u.distance_m = distance(u.position, topo.serving);
    Rng shadow = make_stream(seed, Stream::shadowing, {i});
    u.shadowing_db = std::normal_distribution<double>(0.0, ch.shadowing_sigma_db)(shadow);
    topo.ues.push_back(u);
  }
  return topo;
}

namespace {

struct UeState {
  explicit UeState(const BufferConfig& b) : buffer(b) {}

  UeBuffer buffer;
  std::optional<VoiceSource> voice;
  std::optional<VideoSource> video;
  std::optional<DataSource> data;
};

std::vector<UeState> make_ues(const ScenarioConfig& cfg, std::size_t n,
                              bool with_generators) {
  std::vector<UeState> ues;
  ues.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ues.emplace_back(cfg.buffer);
  if (!with_generators || n == 0) return ues;

  // The cell-wide offered load is split evenly; each source keeps its packet
  // model and reaches its share by packet spacing (voice), frame rate (video)
  // or OFF-period stretching (data).
  const double share = 1e6 / static_cast<double>(n);
  const double voice_bps = cfg.load.voice_mbps * share;
  const double video_bps = cfg.load.video_mbps * share;
  const double data_bps = cfg.load.data_mbps * share;

  VoiceConfig vc = cfg.voice;
  if (voice_bps > 0.0) {
    try {
      vc.interval_ms = voice_interval_for_load(voice_bps, vc);
    } catch (const std::domain_error& e) {
      throw ConfigError("voice_mbps", e.what());
    }
  }
  VideoConfig vic = cfg.video;
  if (video_bps > 0.0) {
    vic.fps = video_bps / (8.0 * expected_video_frame_bytes(vic));
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (voice_bps > 0.0) ues[i].voice.emplace(vc, make_stream(cfg.seed, Stream::voice, {i}));
    if (video_bps > 0.0) ues[i].video.emplace(vic, make_stream(cfg.seed, Stream::video, {i}));
    if (data_bps > 0.0) {
      ues[i].data.emplace(cfg.data, data_bps, make_stream(cfg.seed, Stream::data, {i}));
    }
  }
  return ues;
}

std::vector<std::vector<Packet>> bucket_trace(const std::vector<TraceArrival>& trace,
                                              std::size_t n_ue,
                                              std::int64_t ttis) {
  // Flattened [tti][ue] buckets, keeping file order within a slot.
  std::vector<std::vector<Packet>> slots(static_cast<std::size_t>(ttis) * n_ue);
  for (const TraceArrival& a : trace) {
    if (a.ue >= n_ue) {
      throw ConfigError("arrival_trace", "UE " + std::to_string(a.ue) +
                                             " outside 0.." + std::to_string(n_ue - 1));
    }
    if (a.tti < 0 || a.tti >= ttis) continue;
    slots[static_cast<std::size_t>(a.tti) * n_ue + a.ue].push_back(
        Packet::make(a.cls, a.size, a.tti));
  }
  return slots;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);

  RunResult result;
  std::unique_ptr<CqiSource> channel;
  if (!cfg.cqi_trace.empty()) {
    std::vector<CqiGrid> grids;
    try {
      grids = load_cqi_trace(cfg.cqi_trace, cfg.ue_count,
                             static_cast<std::size_t>(cfg.channel.rc_count()));
    } catch (const std::exception& e) {
      throw ConfigError("cqi_trace", e.what());
    }
    if (static_cast<std::int64_t>(grids.size()) < cfg.tti_count) {
      throw ConfigError("tti_count", "exceeds the " + std::to_string(grids.size()) +
                                         " TTIs in the CQI trace");
    }
    channel = std::make_unique<TraceChannel>(std::move(grids));
  } else {
    auto topo = std::make_shared<const Topology>(deploy(cfg, cfg.seed));
    result.topology = topo;
    channel = std::make_unique<GeometricChannel>(cfg.channel, topo, cfg.seed);
  }
  const std::size_t n = channel->ue_count();

  std::vector<std::vector<Packet>> scripted;
  const bool from_trace = !cfg.arrival_trace.empty();
  if (from_trace) {
    try {
      scripted = bucket_trace(load_arrival_trace(cfg.arrival_trace), n, cfg.tti_count);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("arrival_trace", e.what());
    }
  }

  std::vector<UeState> ues = make_ues(cfg, n, !from_trace);
  MetricsCollector metrics(n, cfg.record_trace);
  const UrgencyMode mode = urgency_mode_for(cfg.policy);

  std::vector<UrgencyReport> urgency(n);
  std::vector<std::int64_t> backlog(n);
  std::vector<Packet> arrivals;

  for (std::int64_t tti = 0; tti < cfg.tti_count; ++tti) {
    for (std::size_t i = 0; i < n; ++i) {
      UeState& ue = ues[i];
      arrivals.clear();
      if (from_trace) {
        const auto& slot = scripted[static_cast<std::size_t>(tti) * n + i];
        arrivals.insert(arrivals.end(), slot.begin(), slot.end());
      } else {
        if (ue.voice) {
          auto p = ue.voice->step(tti);
          arrivals.insert(arrivals.end(), p.begin(), p.end());
        }
        if (ue.video) {
          auto p = ue.video->step(tti);
          arrivals.insert(arrivals.end(), p.begin(), p.end());
        }
        if (ue.data) {
          auto p = ue.data->step(tti);
          arrivals.insert(arrivals.end(), p.begin(), p.end());
        }
      }
      const DropCounts overflow = ue.buffer.enqueue(arrivals);
      metrics.record_arrivals(tti, i, arrivals, overflow);

      const DropCounts expired = ue.buffer.age_and_drop(tti);
      urgency[i] = compute_urgency(ue.buffer, tti, mode);
      backlog[i] = urgency[i].b;
      metrics.record_deadline_drops(tti, i, expired, urgency[i].k);
    }

    const TrafficMatrix traffic = build_traffic_matrix(channel->grid(tti), backlog);
    const SchedulerDecision decision = schedule(cfg.policy, traffic, urgency);

    for (std::size_t i = 0; i < n; ++i) {
      if (!decision.scheduled(i)) continue;
      metrics.record_grant(tti, i, decision.grant[i], decision.ue_rcs[i].size());
      const DrainResult r = drain(cfg.ue_policy, ues[i].buffer, tti, decision.grant[i]);
      metrics.record_drain(tti, i, r);
    }
    metrics.record_tti();
  }

  std::vector<UeBuffer> buffers;
  buffers.reserve(n);
  for (const UeState& ue : ues) buffers.push_back(ue.buffer);
  std::optional<std::size_t> worst;
  if (result.topology && n > 0) worst = worst_user(*result.topology, cfg.channel);
  result.summary = metrics.aggregate(buffers, worst);
  return result;
}

MetricsSummary run(const ScenarioConfig& cfg) { return run_scenario(cfg).summary; }

std::vector<MetricsSummary> run_all(const std::vector<ScenarioConfig>& cfgs,
                                    int jobs) {
  for (const ScenarioConfig& c : cfgs) validate(c);
  std::vector<MetricsSummary> out(cfgs.size());
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                              std::max<std::size_t>(cfgs.size(), 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        out[i] = run(cfgs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<SweepRun> sweep(const ScenarioConfig& cfg, int jobs) {
  validate(cfg);
  const std::vector<LoadPoint> points =
      cfg.sweep.points.empty() ? std::vector<LoadPoint>{cfg.load} : cfg.sweep.points;
  const std::vector<PolicyPair> policies =
      cfg.sweep.policies.empty() ? std::vector<PolicyPair>{{cfg.policy, cfg.ue_policy}}
                                 : cfg.sweep.policies;

  std::vector<ScenarioConfig> runs;
  std::vector<RunLabel> labels;
  for (const LoadPoint& p : points) {
    for (const PolicyPair& pol : policies) {
      for (int r = 0; r < cfg.sweep.replicates; ++r) {
        ScenarioConfig c = cfg;
        c.load = p;
        c.policy = pol.policy;
        c.ue_policy = pol.ue_policy;
        c.seed = cfg.seed + static_cast<std::uint64_t>(r);
        c.sweep = {};
        runs.push_back(c);
        labels.push_back({cfg.name, pol.name(), std::string(to_string(pol.ue_policy)),
                          p.voice_mbps, p.video_mbps, p.data_mbps, c.seed});
      }
    }
  }

  std::vector<MetricsSummary> summaries = run_all(runs, jobs);
  std::vector<SweepRun> out;
  out.reserve(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    out.push_back({labels[i], std::move(summaries[i])});
  }
  return out;
}

}  // namespace ulsched
