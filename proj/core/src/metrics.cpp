#include "ulsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ulsched {

double jain_index(std::span<const double> x) {
  if (x.empty()) throw std::domain_error("jain_index: empty input");
  double sum = 0.0;
  double sq = 0.0;
  for (double v : x) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::domain_error("jain_index: negative or non-finite entry");
    }
    sum += v;
    sq += v * v;
  }
  if (sum == 0.0) throw std::domain_error("jain_index: all-zero input");
  return sum * sum / (static_cast<double>(x.size()) * sq);
}

std::size_t worst_user(const Topology& topo, const ChannelConfig& cfg) {
  if (topo.ues.empty()) throw std::invalid_argument("worst_user: no UEs");
  std::size_t best = 0;
  double worst_loss = coupling_loss_db(topo, 0, cfg);
  for (std::size_t i = 1; i < topo.ues.size(); ++i) {
    const double loss = coupling_loss_db(topo, i, cfg);
    if (loss > worst_loss) {
      worst_loss = loss;
      best = i;
    }
  }
  return best;
}

void DelayHistogram::add(std::int64_t delay_ms, std::uint64_t n) {
  if (delay_ms < 0) throw std::domain_error("DelayHistogram: negative delay");
  const auto bin = static_cast<std::size_t>(delay_ms);
  if (bin >= bins_.size()) bins_.resize(bin + 1, 0);
  bins_[bin] += n;
  count_ += n;
  sum_ += static_cast<long double>(delay_ms) * n;
}

void DelayHistogram::merge(const DelayHistogram& other) {
  if (other.bins_.size() > bins_.size()) bins_.resize(other.bins_.size(), 0);
  for (std::size_t i = 0; i < other.bins_.size(); ++i) bins_[i] += other.bins_[i];
  count_ += other.count_;
  sum_ += other.sum_;
}

double DelayHistogram::mean() const {
  return count_ == 0 ? 0.0 : static_cast<double>(sum_ / count_);
}

std::int64_t DelayHistogram::percentile(double q) const {
  if (count_ == 0) return 0;
  q = std::clamp(q, 0.0, 1.0);
  const auto need = static_cast<std::uint64_t>(
      std::max(1.0, std::ceil(q * static_cast<double>(count_))));
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    seen += bins_[i];
    if (seen >= need) return static_cast<std::int64_t>(i);
  }
  return max();
}

std::int64_t DelayHistogram::max() const {
  for (std::size_t i = bins_.size(); i-- > 0;) {
    if (bins_[i] != 0) return static_cast<std::int64_t>(i);
  }
  return 0;
}

namespace {

std::int64_t sum3(const PerClass<std::int64_t>& v) { return v[0] + v[1] + v[2]; }

void add3(PerClass<std::int64_t>& a, const PerClass<std::int64_t>& b) {
  for (std::size_t c = 0; c < kClassCount; ++c) a[c] += b[c];
}

}  // namespace

void UeCounters::merge(const UeCounters& o) {
  add3(arrived_bytes, o.arrived_bytes);
  add3(arrived_packets, o.arrived_packets);
  add3(tx_bytes, o.tx_bytes);
  add3(delivered_packets, o.delivered_packets);
  add3(deadline_drop_bytes, o.deadline_drop_bytes);
  add3(deadline_drop_packets, o.deadline_drop_packets);
  add3(overflow_drop_bytes, o.overflow_drop_bytes);
  add3(overflow_drop_packets, o.overflow_drop_packets);
  resident_bytes += o.resident_bytes;
  times_scheduled += o.times_scheduled;
}

std::int64_t UeCounters::arrived() const { return sum3(arrived_bytes); }
std::int64_t UeCounters::transmitted() const { return sum3(tx_bytes); }
std::int64_t UeCounters::deadline_dropped() const {
  return sum3(deadline_drop_bytes);
}
std::int64_t UeCounters::overflow_dropped() const {
  return sum3(overflow_drop_bytes);
}

bool UeCounters::conserved() const {
  return arrived() ==
         transmitted() + deadline_dropped() + overflow_dropped() + resident_bytes;
}

std::string_view to_string(TracePhase p) {
  switch (p) {
    case TracePhase::arrive: return "arrive";
    case TracePhase::drop: return "drop";
    case TracePhase::schedule: return "schedule";
    case TracePhase::transmit: return "transmit";
  }
  return "?";
}

UeCounters MetricsSummary::totals() const {
  UeCounters t;
  for (const UeCounters& u : per_ue) t.merge(u);
  return t;
}

bool MetricsSummary::conserved() const {
  return std::all_of(per_ue.begin(), per_ue.end(),
                     [](const UeCounters& u) { return u.conserved(); }) &&
         totals().conserved();
}

std::int64_t MetricsSummary::worst_user_delivered(TrafficClass c) const {
  if (!worst_user || *worst_user >= per_ue.size()) return 0;
  return per_ue[*worst_user].delivered_packets[index_of(c)];
}

MetricsCollector::MetricsCollector(std::size_t n_ue, bool keep_trace)
    : per_ue_(n_ue), keep_trace_(keep_trace) {}

void MetricsCollector::record_arrivals(std::int64_t tti, std::size_t ue,
                                       std::span<const Packet> packets,
                                       const DropCounts& overflow) {
  UeCounters& u = per_ue_.at(ue);
  std::int64_t bytes = 0;
  for (const Packet& p : packets) {
    u.arrived_bytes[index_of(p.cls)] += p.size;
    u.arrived_packets[index_of(p.cls)] += 1;
    bytes += p.size;
  }
  add3(u.overflow_drop_bytes, overflow.bytes);
  add3(u.overflow_drop_packets, overflow.packets);
  if (keep_trace_ && bytes > 0) {
    trace_.push_back({tti, TracePhase::arrive, ue, bytes,
                      static_cast<std::int64_t>(packets.size())});
  }
}

void MetricsCollector::record_deadline_drops(std::int64_t tti, std::size_t ue,
                                             const DropCounts& dropped,
                                             std::int64_t urgency_k) {
  UeCounters& u = per_ue_.at(ue);
  add3(u.deadline_drop_bytes, dropped.bytes);
  add3(u.deadline_drop_packets, dropped.packets);
  if (keep_trace_ && dropped.total_bytes() > 0) {
    trace_.push_back(
        {tti, TracePhase::drop, ue, dropped.total_bytes(), urgency_k});
  }
}

void MetricsCollector::record_grant(std::int64_t tti, std::size_t ue,
                                    std::int64_t bytes, std::size_t rcs) {
  if (rcs == 0) return;
  per_ue_.at(ue).times_scheduled += 1;
  if (keep_trace_) {
    trace_.push_back({tti, TracePhase::schedule, ue, bytes,
                      static_cast<std::int64_t>(rcs)});
  }
}

void MetricsCollector::record_drain(std::int64_t tti, std::size_t ue,
                                    const DrainResult& r) {
  UeCounters& u = per_ue_.at(ue);
  add3(u.tx_bytes, r.bytes);
  for (const Delivery& d : r.delivered) {
    u.delivered_packets[index_of(d.cls)] += 1;
    delays_[index_of(d.cls)].add(d.delay_ms);
  }
  if (keep_trace_ && r.total_bytes() > 0) {
    trace_.push_back({tti, TracePhase::transmit, ue, r.total_bytes(),
                      static_cast<std::int64_t>(r.delivered.size())});
  }
}

void MetricsCollector::merge(const MetricsCollector& other) {
  if (other.per_ue_.size() != per_ue_.size()) {
    throw std::invalid_argument("MetricsCollector::merge: UE count mismatch");
  }
  for (std::size_t i = 0; i < per_ue_.size(); ++i) per_ue_[i].merge(other.per_ue_[i]);
  for (std::size_t c = 0; c < kClassCount; ++c) delays_[c].merge(other.delays_[c]);
  ttis_ = std::max(ttis_, other.ttis_);
  trace_.insert(trace_.end(), other.trace_.begin(), other.trace_.end());
  std::stable_sort(trace_.begin(), trace_.end(),
                   [](const TraceEvent& a, const TraceEvent& b) {
                     if (a.tti != b.tti) return a.tti < b.tti;
                     return a.phase < b.phase;
                   });
}

MetricsSummary MetricsCollector::aggregate(std::span<const UeBuffer> buffers,
                                           std::optional<std::size_t> worst) const {
  MetricsSummary s;
  s.n_ue = per_ue_.size();
  s.ttis = ttis_;
  s.per_ue = per_ue_;
  s.delays = delays_;
  s.worst_user = worst;
  s.trace = trace_;
  for (std::size_t i = 0; i < s.per_ue.size() && i < buffers.size(); ++i) {
    s.per_ue[i].resident_bytes = buffers[i].occupancy();
  }

  std::vector<double> tput(s.n_ue);
  for (std::size_t i = 0; i < s.n_ue; ++i) {
    tput[i] = static_cast<double>(s.per_ue[i].transmitted());
    s.total_tx_bytes += s.per_ue[i].transmitted();
  }
  if (s.total_tx_bytes > 0) {
    s.jain = jain_index(tput);
    s.jain_defined = true;
  }
  if (s.ttis > 0) {
    s.bytes_per_tti = static_cast<double>(s.total_tx_bytes) /
                      static_cast<double>(s.ttis);
    s.throughput_mbps = s.bytes_per_tti * 8.0 / (1000.0 * kTtiMs);
  }
  return s;
}

void write_summary_csv_header(std::ostream& out) {
  out << "run,policy,ue_policy,voice_mbps,video_mbps,data_mbps,seed,n_ue,ttis,"
         "tx_bytes,throughput_mbps,bytes_per_tti,fairness_jain,jain_defined,"
         "tx_voice,tx_video,tx_data,"
         "delivered_voice,delivered_video,delivered_data,"
         "deadline_drop_voice_bytes,deadline_drop_video_bytes,"
         "deadline_drop_voice_pkts,deadline_drop_video_pkts,"
         "overflow_drop_bytes,overflow_drop_pkts,"
         "delay_mean_voice,delay_p95_voice,delay_max_voice,"
         "delay_mean_video,delay_p95_video,delay_max_video,"
         "delay_mean_data,delay_p95_data,"
         "worst_ue,worst_voice_pkts,worst_video_pkts,worst_data_pkts,"
         "arrived_bytes,resident_bytes,conserved\n";
}

void write_summary_csv_row(std::ostream& out, const RunLabel& l,
                           const MetricsSummary& s) {
  const UeCounters t = s.totals();
  const auto& dv = s.delays[index_of(TrafficClass::voice)];
  const auto& dvi = s.delays[index_of(TrafficClass::video)];
  const auto& dd = s.delays[index_of(TrafficClass::data)];
  out << l.run << ',' << l.policy << ',' << l.ue_policy << ',' << l.voice_mbps
      << ',' << l.video_mbps << ',' << l.data_mbps << ',' << l.seed << ','
      << s.n_ue << ',' << s.ttis << ',' << s.total_tx_bytes << ','
      << s.throughput_mbps << ',' << s.bytes_per_tti << ',' << s.jain << ','
      << (s.jain_defined ? 1 : 0) << ',' << t.tx_bytes[0] << ','
      << t.tx_bytes[1] << ',' << t.tx_bytes[2] << ',' << t.delivered_packets[0]
      << ',' << t.delivered_packets[1] << ',' << t.delivered_packets[2] << ','
      << t.deadline_drop_bytes[0] << ',' << t.deadline_drop_bytes[1] << ','
      << t.deadline_drop_packets[0] << ',' << t.deadline_drop_packets[1] << ','
      << t.overflow_dropped() << ','
      << sum3(t.overflow_drop_packets) << ',' << dv.mean() << ','
      << dv.percentile(0.95) << ',' << dv.max() << ',' << dvi.mean() << ','
      << dvi.percentile(0.95) << ',' << dvi.max() << ',' << dd.mean() << ','
      << dd.percentile(0.95) << ',';
  if (s.worst_user) {
    out << *s.worst_user;
  }
  out << ',' << s.worst_user_delivered(TrafficClass::voice) << ','
      << s.worst_user_delivered(TrafficClass::video) << ','
      << s.worst_user_delivered(TrafficClass::data) << ',' << t.arrived() << ','
      << t.resident_bytes << ',' << (s.conserved() ? 1 : 0) << '\n';
}

void write_trace_csv(std::ostream& out, std::span<const TraceEvent> events) {
  out << "tti,phase,ue,bytes,detail\n";
  for (const TraceEvent& e : events) {
    out << e.tti << ',' << to_string(e.phase) << ',' << e.ue << ',' << e.bytes
        << ',' << e.detail << '\n';
  }
}

}  // namespace ulsched
