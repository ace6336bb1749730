#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ulsched/channel.hpp"
#include "ulsched/traffic.hpp"
#include "ulsched/ue_transmitter.hpp"

namespace ulsched {

// Jain's index (sum x)^2 / (n * sum x^2). Throws std::domain_error for an
// empty, negative or all-zero input.
double jain_index(std::span<const double> x);

// UE with the largest coupling loss (path loss + shadowing) to the serving
// eNodeB; ties go to the lowest id. Throws std::invalid_argument when the
// topology has no UEs.
std::size_t worst_user(const Topology& topo, const ChannelConfig& cfg);

// Integer-millisecond delay histogram; mergeable.
class DelayHistogram {
 public:
  void add(std::int64_t delay_ms, std::uint64_t n = 1);
  void merge(const DelayHistogram& other);

  std::uint64_t count() const { return count_; }
  double mean() const;
  // Smallest delay d with at least q of the mass at or below d.
  std::int64_t percentile(double q) const;
  std::int64_t max() const;

 private:
  std::vector<std::uint64_t> bins_;
  std::uint64_t count_ = 0;
  long double sum_ = 0;
};

struct UeCounters {
  PerClass<std::int64_t> arrived_bytes{};
  PerClass<std::int64_t> arrived_packets{};
  PerClass<std::int64_t> tx_bytes{};
  PerClass<std::int64_t> delivered_packets{};
  PerClass<std::int64_t> deadline_drop_bytes{};
  PerClass<std::int64_t> deadline_drop_packets{};
  PerClass<std::int64_t> overflow_drop_bytes{};
  PerClass<std::int64_t> overflow_drop_packets{};
  std::int64_t resident_bytes = 0;
  std::int64_t times_scheduled = 0;

  void merge(const UeCounters& other);

  std::int64_t arrived() const;
  std::int64_t transmitted() const;
  std::int64_t deadline_dropped() const;
  std::int64_t overflow_dropped() const;
  // arrived == transmitted + deadline_dropped + overflow_dropped + resident
  bool conserved() const;
};

enum class TracePhase { arrive, drop, schedule, transmit };
std::string_view to_string(TracePhase p);

struct TraceEvent {
  std::int64_t tti = 0;
  TracePhase phase = TracePhase::arrive;
  std::size_t ue = 0;
  std::int64_t bytes = 0;
  std::int64_t detail = 0;  // RC count for schedule, urgency k for drop
};

struct MetricsSummary {
  std::size_t n_ue = 0;
  std::int64_t ttis = 0;
  std::vector<UeCounters> per_ue;
  PerClass<DelayHistogram> delays;

  double jain = 1.0;
  bool jain_defined = false;
  std::optional<std::size_t> worst_user;

  std::int64_t total_tx_bytes = 0;
  double throughput_mbps = 0.0;
  double bytes_per_tti = 0.0;

  std::vector<TraceEvent> trace;

  UeCounters totals() const;
  bool conserved() const;
  std::int64_t worst_user_delivered(TrafficClass c) const;
};

// Streaming per-run accumulator. Each UE's counters are independent, so
// partial collectors over disjoint TTI ranges or UE subsets merge
// associatively.
class MetricsCollector {
 public:
  explicit MetricsCollector(std::size_t n_ue, bool keep_trace = false);

  void record_arrivals(std::int64_t tti, std::size_t ue,
                       std::span<const Packet> packets,
                       const DropCounts& overflow);
  void record_deadline_drops(std::int64_t tti, std::size_t ue,
                             const DropCounts& dropped, std::int64_t urgency_k);
  void record_grant(std::int64_t tti, std::size_t ue, std::int64_t bytes,
                    std::size_t rcs);
  void record_drain(std::int64_t tti, std::size_t ue, const DrainResult& r);
  void record_tti() { ++ttis_; }

  void merge(const MetricsCollector& other);

  // Resident bytes are read from the final buffers.
  MetricsSummary aggregate(std::span<const UeBuffer> buffers,
                           std::optional<std::size_t> worst) const;

  const std::vector<UeCounters>& per_ue() const { return per_ue_; }

 private:
  std::vector<UeCounters> per_ue_;
  PerClass<DelayHistogram> delays_;
  std::int64_t ttis_ = 0;
  bool keep_trace_;
  std::vector<TraceEvent> trace_;
};

// One summary row per (run, policy, load point, seed).
struct RunLabel {
  std::string run;
  std::string policy;
  std::string ue_policy;
  double voice_mbps = 0.0;
  double video_mbps = 0.0;
  double data_mbps = 0.0;
  std::uint64_t seed = 0;
};

void write_summary_csv_header(std::ostream& out);
void write_summary_csv_row(std::ostream& out, const RunLabel& label,
                           const MetricsSummary& s);
void write_trace_csv(std::ostream& out, std::span<const TraceEvent> events);

}  // namespace ulsched
