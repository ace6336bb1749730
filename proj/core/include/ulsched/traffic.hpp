#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ulsched/rng.hpp"

namespace ulsched {

enum class TrafficClass : std::uint8_t { voice = 0, video = 1, data = 2 };

inline constexpr std::size_t kClassCount = 3;
inline constexpr std::array<TrafficClass, kClassCount> kAllClasses = {
    TrafficClass::voice, TrafficClass::video, TrafficClass::data};

template <class T>
using PerClass = std::array<T, kClassCount>;

constexpr std::size_t index_of(TrafficClass c) {
  return static_cast<std::size_t>(c);
}

std::string_view to_string(TrafficClass c);
// Throws std::invalid_argument for unknown names.
TrafficClass traffic_class_from_string(std::string_view name);

// One TTI is 1 ms, so delays are integer milliseconds.
inline constexpr std::int64_t kTtiMs = 1;

struct Packet {
  TrafficClass cls = TrafficClass::data;
  std::int64_t size = 0;
  std::int64_t arrival_tti = 0;
  std::int64_t remaining = 0;

  static Packet make(TrafficClass cls, std::int64_t size, std::int64_t tti) {
    return Packet{cls, size, tti, size};
  }

  std::int64_t delay_ms(std::int64_t tti) const {
    return (tti - arrival_tti) * kTtiMs;
  }
};

struct BufferConfig {
  std::int64_t capacity_bytes = 64 * 1024;
  std::int64_t threshold_bytes = 48 * 1024;  // 75% of capacity
  std::int64_t voice_deadline_ms = 50;
  std::int64_t video_deadline_ms = 150;
  std::size_t history_window = 1000;
};

struct DropCounts {
  PerClass<std::int64_t> bytes{};
  PerClass<std::int64_t> packets{};

  std::int64_t total_bytes() const { return bytes[0] + bytes[1] + bytes[2]; }
  std::int64_t realtime_bytes() const { return bytes[0] + bytes[1]; }
};

// Sliding window of per-TTI deadline-drop totals (epsilon values).
class DropHistory {
 public:
  explicit DropHistory(std::size_t window = 1000);

  void push(std::int64_t dropped_bytes);
  std::int64_t sum() const { return sum_; }
  std::size_t window() const { return window_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::size_t window_;
  std::deque<std::int64_t> values_;
  std::int64_t sum_ = 0;
};

// Per-UE buffer: one FIFO per traffic class sharing a byte capacity.
class UeBuffer {
 public:
  explicit UeBuffer(BufferConfig cfg = {});

  const BufferConfig& config() const { return cfg_; }

  // Appends in order; a packet that does not fit is tail-dropped whole.
  // Returns the overflow-dropped byte and packet counts.
  DropCounts enqueue(std::span<const Packet> packets);
  bool enqueue(const Packet& p);

  // Removes real-time packets whose delay exceeds their class deadline and
  // records the real-time dropped bytes as this TTI's history entry. Data is
  // never deadline-dropped. Call once per TTI, before scheduling.
  DropCounts age_and_drop(std::int64_t tti);

  std::int64_t occupancy() const { return occupancy_; }
  std::int64_t occupancy(TrafficClass c) const {
    return class_bytes_[index_of(c)];
  }
  bool empty() const { return occupancy_ == 0; }

  const std::deque<Packet>& queue(TrafficClass c) const {
    return queues_[index_of(c)];
  }
  const DropHistory& history() const { return history_; }

  std::int64_t deadline_ms(TrafficClass c) const;

  // Sends up to `bytes` from the packet at `index` of the class queue.
  // A fully sent packet leaves the queue and is returned through `completed`.
  // Returns the bytes actually sent.
  std::int64_t transmit(TrafficClass c, std::size_t index, std::int64_t bytes,
                        Packet* completed = nullptr);

 private:
  BufferConfig cfg_;
  PerClass<std::deque<Packet>> queues_;
  PerClass<std::int64_t> class_bytes_{};
  std::int64_t occupancy_ = 0;
  DropHistory history_;
};

enum class UrgencyMode { single_class, mixed };

// Buffer status plus drop urgency reported to the eNodeB each TTI.
struct UrgencyReport {
  std::int64_t b = 0;          // buffered bytes
  std::int64_t m_vo = 0;       // voice bytes dropped if not served this TTI
  std::int64_t m_vi = 0;       // same for video
  std::int64_t m_d = 0;        // bytes above the buffer threshold
  std::int64_t history = 0;    // sum of recent real-time drops
  std::int64_t k_current = 0;  // this TTI's urgency without history
  std::int64_t k = 0;          // k_current + history
};

// single_class: k_current = m_vo + m_vi. mixed: k_current = m_vo + m_vi +
// m_d. A packet counts toward m_vo/m_vi when its delay at the start of the
// next TTI would exceed the class deadline.
UrgencyReport compute_urgency(const UeBuffer& buf, std::int64_t tti,
                              UrgencyMode mode);

// Pareto(K, alpha) with mass above `max` collapsed onto `max`. Samples lie in
// [K, max]. Throws std::domain_error unless K > 0, alpha > 1 and max > K.
double truncated_pareto_sample(double k, double alpha, double max, Rng& rng);

// Closed-form mean of truncated_pareto_sample.
double truncated_pareto_mean(double k, double alpha, double max);

struct VoiceConfig {
  std::int64_t packet_bytes = 40;
  std::int64_t sid_bytes = 15;
  double interval_ms = 20.0;       // talk-state packet spacing
  double sid_interval_ms = 160.0;  // silence-state SID spacing
  double talk_to_silence = 1.0 / 3000.0;  // per-TTI transition probability
  double silence_to_talk = 1.0 / 3000.0;

  double talk_fraction() const;
  // Long-run offered rate of the two-state chain.
  double mean_bytes_per_ms() const;
};

// Talk-state spacing that makes one source offer `bits_per_second`.
// Throws std::domain_error if the SID stream alone already exceeds it.
double voice_interval_for_load(double bits_per_second, const VoiceConfig& cfg);

class VoiceSource {
 public:
  enum class State { talk, silence };

  VoiceSource(VoiceConfig cfg, Rng rng);
  VoiceSource(VoiceConfig cfg, Rng rng, State initial);

  std::vector<Packet> step(std::int64_t tti);
  State state() const { return state_; }

 private:
  VoiceConfig cfg_;
  Rng rng_;
  State state_;
  double next_emit_ = 0.0;
};

struct VideoConfig {
  double fps = 15.0;
  int packets_per_frame = 8;
  std::int64_t min_frame_bytes = 1500;
  double size_k = 40.0, size_alpha = 1.2, size_max = 250.0;
  double gap_k_ms = 2.5, gap_alpha = 1.2, gap_max_ms = 12.5;
};

// Mean bytes per frame after the minimum-size scaling; estimated once from a
// fixed-seed sample so it is reproducible.
double expected_video_frame_bytes(const VideoConfig& cfg);
double video_fps_for_load(double bits_per_second, const VideoConfig& cfg);

class VideoSource {
 public:
  // Random initial phase within one frame period.
  VideoSource(VideoConfig cfg, Rng rng);
  VideoSource(VideoConfig cfg, Rng rng, double first_frame_ms);

  std::vector<Packet> step(std::int64_t tti);

  // Sizes of one frame: truncated-Pareto draws scaled up to min_frame_bytes.
  static std::vector<std::int64_t> draw_frame_sizes(const VideoConfig& cfg,
                                                    Rng& rng);

 private:
  void emit_frame(double start_ms);

  VideoConfig cfg_;
  Rng rng_;
  double next_frame_ms_ = 0.0;
  std::multimap<std::int64_t, std::int64_t> pending_;  // tti -> size
};

struct DataConfig {
  int sources = 16;
  double peak_bps_per_source = 0.5e6;
  double mean_on_ms = 1.0;
  double on_alpha = 1.4;
  double off_alpha = 1.2;
  double duration_cap = 20.0;  // durations truncated at cap * K
  std::int64_t payload_min = 46;
  std::int64_t payload_max = 1500;
};

// Aggregate of on/off sources with truncated-Pareto period lengths. The
// offered load is set by stretching the mean OFF period.
class DataSource {
 public:
  DataSource(DataConfig cfg, double bits_per_second, Rng rng);

  std::vector<Packet> step(std::int64_t tti);
  double mean_off_ms() const { return mean_off_ms_; }

 private:
  struct OnOff {
    bool on = false;
    double left_ms = 0.0;
    double credit = 0.0;
    std::int64_t next_size = 0;
  };

  double draw_period(bool on);
  std::int64_t draw_payload();

  DataConfig cfg_;
  Rng rng_;
  double peak_bytes_per_ms_ = 0.0;
  double mean_off_ms_ = 0.0;
  bool active_ = false;
  std::vector<OnOff> sources_;
};

// Deterministic arrival trace: lines of `tti ue class size_bytes`.
struct TraceArrival {
  std::int64_t tti = 0;
  std::size_t ue = 0;
  TrafficClass cls = TrafficClass::data;
  std::int64_t size = 0;

  friend bool operator==(const TraceArrival&, const TraceArrival&) = default;
};

// Throws std::runtime_error naming the offending line.
std::vector<TraceArrival> read_arrival_trace(std::istream& in);
std::vector<TraceArrival> load_arrival_trace(const std::string& path);

}  // namespace ulsched
