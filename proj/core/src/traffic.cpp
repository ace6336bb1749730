#include "ulsched/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace ulsched {

std::string_view to_string(TrafficClass c) {
  switch (c) {
    case TrafficClass::voice: return "voice";
    case TrafficClass::video: return "video";
    case TrafficClass::data: return "data";
  }
  return "?";
}

TrafficClass traffic_class_from_string(std::string_view name) {
  for (TrafficClass c : kAllClasses) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown traffic class '" + std::string(name) +
                              "'");
}

// ---------------------------------------------------------------------------
// DropHistory

DropHistory::DropHistory(std::size_t window) : window_(window) {}

void DropHistory::push(std::int64_t dropped_bytes) {
  if (window_ == 0) return;
  values_.push_back(dropped_bytes);
  sum_ += dropped_bytes;
  if (values_.size() > window_) {
    sum_ -= values_.front();
    values_.pop_front();
  }
}

// ---------------------------------------------------------------------------
// UeBuffer

UeBuffer::UeBuffer(BufferConfig cfg)
    : cfg_(cfg), history_(cfg.history_window) {}

bool UeBuffer::enqueue(const Packet& p) {
  if (occupancy_ + p.remaining > cfg_.capacity_bytes) return false;
  queues_[index_of(p.cls)].push_back(p);
  class_bytes_[index_of(p.cls)] += p.remaining;
  occupancy_ += p.remaining;
  return true;
}

DropCounts UeBuffer::enqueue(std::span<const Packet> packets) {
  DropCounts overflow;
  for (const Packet& p : packets) {
    if (!enqueue(p)) {
      overflow.bytes[index_of(p.cls)] += p.remaining;
      overflow.packets[index_of(p.cls)] += 1;
    }
  }
  return overflow;
}

std::int64_t UeBuffer::deadline_ms(TrafficClass c) const {
  switch (c) {
    case TrafficClass::voice: return cfg_.voice_deadline_ms;
    case TrafficClass::video: return cfg_.video_deadline_ms;
    case TrafficClass::data: break;
  }
  return -1;
}

DropCounts UeBuffer::age_and_drop(std::int64_t tti) {
  DropCounts dropped;
  for (TrafficClass c : {TrafficClass::voice, TrafficClass::video}) {
    auto& q = queues_[index_of(c)];
    const std::int64_t deadline = deadline_ms(c);
    // Arrival times are nondecreasing front-to-back.
    while (!q.empty() && q.front().delay_ms(tti) > deadline) {
      dropped.bytes[index_of(c)] += q.front().remaining;
      dropped.packets[index_of(c)] += 1;
      class_bytes_[index_of(c)] -= q.front().remaining;
      occupancy_ -= q.front().remaining;
      q.pop_front();
    }
  }
  history_.push(dropped.realtime_bytes());
  return dropped;
}

std::int64_t UeBuffer::transmit(TrafficClass c, std::size_t index,
                                std::int64_t bytes, Packet* completed) {
  auto& q = queues_[index_of(c)];
  Packet& p = q.at(index);
  const std::int64_t sent = std::clamp<std::int64_t>(bytes, 0, p.remaining);
  p.remaining -= sent;
  class_bytes_[index_of(c)] -= sent;
  occupancy_ -= sent;
  if (p.remaining == 0) {
    if (completed) *completed = p;
    q.erase(q.begin() + static_cast<std::ptrdiff_t>(index));
  }
  return sent;
}

// ---------------------------------------------------------------------------
// Urgency

namespace {

std::int64_t bytes_due(const std::deque<Packet>& q, std::int64_t tti,
                       std::int64_t deadline_ms) {
  std::int64_t due = 0;
  for (const Packet& p : q) {
    if (p.delay_ms(tti) + kTtiMs <= deadline_ms) break;
    due += p.remaining;
  }
  return due;
}

}  // namespace

UrgencyReport compute_urgency(const UeBuffer& buf, std::int64_t tti,
                              UrgencyMode mode) {
  UrgencyReport r;
  r.b = buf.occupancy();
  r.m_vo = bytes_due(buf.queue(TrafficClass::voice), tti,
                     buf.config().voice_deadline_ms);
  r.m_vi = bytes_due(buf.queue(TrafficClass::video), tti,
                     buf.config().video_deadline_ms);
  r.m_d = std::max<std::int64_t>(0, r.b - buf.config().threshold_bytes);
  r.history = buf.history().sum();
  r.k_current = r.m_vo + r.m_vi;
  if (mode == UrgencyMode::mixed) r.k_current += r.m_d;
  r.k = r.k_current + r.history;
  return r;
}

// ---------------------------------------------------------------------------
// Truncated Pareto

double truncated_pareto_sample(double k, double alpha, double max, Rng& rng) {
  if (!(k > 0.0) || !(alpha > 1.0) || !(max > k)) {
    throw std::domain_error(
        "truncated_pareto_sample: need K > 0, alpha > 1, max > K");
  }
  const double x = k / std::pow(uniform_open0(rng), 1.0 / alpha);
  return std::min(x, max);
}

double truncated_pareto_mean(double k, double alpha, double max) {
  return k + k / (alpha - 1.0) * (1.0 - std::pow(k / max, alpha - 1.0));
}

// ---------------------------------------------------------------------------
// Voice

double VoiceConfig::talk_fraction() const {
  const double total = talk_to_silence + silence_to_talk;
  return total > 0.0 ? silence_to_talk / total : 1.0;
}

double VoiceConfig::mean_bytes_per_ms() const {
  const double talk = talk_fraction();
  return talk * static_cast<double>(packet_bytes) / interval_ms +
         (1.0 - talk) * static_cast<double>(sid_bytes) / sid_interval_ms;
}

double voice_interval_for_load(double bits_per_second, const VoiceConfig& cfg) {
  const double target = bits_per_second / 8000.0;
  const double talk = cfg.talk_fraction();
  const double sid =
      (1.0 - talk) * static_cast<double>(cfg.sid_bytes) / cfg.sid_interval_ms;
  if (target <= sid || talk <= 0.0) {
    throw std::domain_error("voice_interval_for_load: load " +
                            std::to_string(bits_per_second) +
                            " bps not reachable by the talk state");
  }
  return talk * static_cast<double>(cfg.packet_bytes) / (target - sid);
}

VoiceSource::VoiceSource(VoiceConfig cfg, Rng rng)
    : cfg_(cfg), rng_(std::move(rng)) {
  state_ = uniform_open0(rng_) <= cfg_.talk_fraction() ? State::talk
                                                       : State::silence;
  const double spacing =
      state_ == State::talk ? cfg_.interval_ms : cfg_.sid_interval_ms;
  next_emit_ = (1.0 - uniform_open0(rng_)) * spacing;
}

VoiceSource::VoiceSource(VoiceConfig cfg, Rng rng, State initial)
    : cfg_(cfg), rng_(std::move(rng)), state_(initial) {}

std::vector<Packet> VoiceSource::step(std::int64_t tti) {
  std::vector<Packet> out;
  const bool talking = state_ == State::talk;
  const double spacing = talking ? cfg_.interval_ms : cfg_.sid_interval_ms;
  const std::int64_t size = talking ? cfg_.packet_bytes : cfg_.sid_bytes;
  while (next_emit_ <= static_cast<double>(tti)) {
    out.push_back(Packet::make(TrafficClass::voice, size, tti));
    next_emit_ += spacing;
  }
  const double flip = talking ? cfg_.talk_to_silence : cfg_.silence_to_talk;
  if (flip > 0.0 && uniform_open0(rng_) <= flip) {
    state_ = talking ? State::silence : State::talk;
    next_emit_ = static_cast<double>(tti + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Video

std::vector<std::int64_t> VideoSource::draw_frame_sizes(const VideoConfig& cfg,
                                                        Rng& rng) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(cfg.packets_per_frame));
  std::int64_t total = 0;
  for (auto& s : sizes) {
    s = std::llround(
        truncated_pareto_sample(cfg.size_k, cfg.size_alpha, cfg.size_max, rng));
    total += s;
  }
  if (total > 0 && total < cfg.min_frame_bytes) {
    const double scale = static_cast<double>(cfg.min_frame_bytes) /
                         static_cast<double>(total);
    for (auto& s : sizes) {
      s = static_cast<std::int64_t>(std::ceil(static_cast<double>(s) * scale));
    }
  }
  return sizes;
}

double expected_video_frame_bytes(const VideoConfig& cfg) {
  constexpr int kFrames = 20000;
  Rng rng(0x766964656fULL);
  double total = 0.0;
  for (int f = 0; f < kFrames; ++f) {
    for (std::int64_t s : VideoSource::draw_frame_sizes(cfg, rng)) {
      total += static_cast<double>(s);
    }
  }
  return total / kFrames;
}

double video_fps_for_load(double bits_per_second, const VideoConfig& cfg) {
  if (bits_per_second <= 0.0) return 0.0;
  return bits_per_second / (8.0 * expected_video_frame_bytes(cfg));
}

VideoSource::VideoSource(VideoConfig cfg, Rng rng)
    : cfg_(cfg), rng_(std::move(rng)) {
  if (cfg_.fps > 0.0) next_frame_ms_ = (1.0 - uniform_open0(rng_)) * 1000.0 / cfg_.fps;
}

VideoSource::VideoSource(VideoConfig cfg, Rng rng, double first_frame_ms)
    : cfg_(cfg), rng_(std::move(rng)), next_frame_ms_(first_frame_ms) {}

void VideoSource::emit_frame(double start_ms) {
  double t = start_ms;
  const auto sizes = draw_frame_sizes(cfg_, rng_);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) {
      t += truncated_pareto_sample(cfg_.gap_k_ms, cfg_.gap_alpha,
                                   cfg_.gap_max_ms, rng_);
    }
    pending_.emplace(static_cast<std::int64_t>(std::floor(t)), sizes[i]);
  }
}

std::vector<Packet> VideoSource::step(std::int64_t tti) {
  if (cfg_.fps > 0.0) {
    const double period = 1000.0 / cfg_.fps;
    while (next_frame_ms_ < static_cast<double>(tti + 1)) {
      emit_frame(next_frame_ms_);
      next_frame_ms_ += period;
    }
  }
  std::vector<Packet> out;
  auto end = pending_.upper_bound(tti);
  for (auto it = pending_.begin(); it != end; ++it) {
    out.push_back(Packet::make(TrafficClass::video, it->second, tti));
  }
  pending_.erase(pending_.begin(), end);
  return out;
}

// ---------------------------------------------------------------------------
// Data

namespace {

double truncated_mean_factor(double alpha, double cap) {
  return 1.0 + (1.0 - std::pow(cap, 1.0 - alpha)) / (alpha - 1.0);
}

}  // namespace

DataSource::DataSource(DataConfig cfg, double bits_per_second, Rng rng)
    : cfg_(cfg), rng_(std::move(rng)) {
  if (cfg_.sources <= 0 || bits_per_second <= 0.0) return;
  active_ = true;
  peak_bytes_per_ms_ = cfg_.peak_bps_per_source / 8000.0;
  const double per_source = bits_per_second / 8000.0 / cfg_.sources;
  // Offered rate = peak * on / (on + off); saturates at the peak.
  mean_off_ms_ = per_source >= peak_bytes_per_ms_
                     ? 0.0
                     : cfg_.mean_on_ms * (peak_bytes_per_ms_ / per_source - 1.0);
  const double on_share = cfg_.mean_on_ms / (cfg_.mean_on_ms + mean_off_ms_);
  sources_.resize(static_cast<std::size_t>(cfg_.sources));
  for (OnOff& s : sources_) {
    s.on = mean_off_ms_ == 0.0 || uniform_open0(rng_) <= on_share;
    s.left_ms = draw_period(s.on) * uniform_open0(rng_);
    s.next_size = draw_payload();
    s.credit = uniform_open0(rng_) * static_cast<double>(s.next_size);
  }
}

double DataSource::draw_period(bool on) {
  if (!on && mean_off_ms_ == 0.0) return 0.0;
  const double alpha = on ? cfg_.on_alpha : cfg_.off_alpha;
  const double mean = on ? cfg_.mean_on_ms : mean_off_ms_;
  const double k = mean / truncated_mean_factor(alpha, cfg_.duration_cap);
  return truncated_pareto_sample(k, alpha, cfg_.duration_cap * k, rng_);
}

std::int64_t DataSource::draw_payload() {
  std::uniform_int_distribution<std::int64_t> payload(cfg_.payload_min,
                                                      cfg_.payload_max);
  return payload(rng_);
}

std::vector<Packet> DataSource::step(std::int64_t tti) {
  std::vector<Packet> out;
  if (!active_) return out;
  for (OnOff& s : sources_) {
    double budget = 1.0;  // one TTI of source time
    while (budget > 0.0) {
      if (mean_off_ms_ == 0.0) {
        s.credit += peak_bytes_per_ms_ * budget;
        break;
      }
      const double dt = std::min(s.left_ms, budget);
      if (s.on) s.credit += peak_bytes_per_ms_ * dt;
      s.left_ms -= dt;
      budget -= dt;
      if (s.left_ms <= 0.0) {
        s.on = !s.on;
        s.left_ms = draw_period(s.on);
      }
    }
    while (s.credit >= static_cast<double>(s.next_size)) {
      out.push_back(Packet::make(TrafficClass::data, s.next_size, tti));
      s.credit -= static_cast<double>(s.next_size);
      s.next_size = draw_payload();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Arrival trace

std::vector<TraceArrival> read_arrival_trace(std::istream& in) {
  std::vector<TraceArrival> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    auto fail = [&](const std::string& why) {
      return std::runtime_error("arrival trace line " + std::to_string(line_no) +
                                ": " + why);
    };
    TraceArrival a;
    std::string cls;
    std::int64_t ue = -1;
    try {
      a.tti = std::stoll(first);
    } catch (const std::exception&) {
      throw fail("bad tti '" + first + "'");
    }
    if (!(fields >> ue >> cls >> a.size)) throw fail("expected `tti ue class size`");
    std::string extra;
    if (fields >> extra) throw fail("trailing field '" + extra + "'");
    if (a.tti < 0 || ue < 0) throw fail("negative tti or ue");
    if (a.size <= 0) throw fail("size must be positive");
    try {
      a.cls = traffic_class_from_string(cls);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
    a.ue = static_cast<std::size_t>(ue);
    out.push_back(a);
  }
  return out;
}

std::vector<TraceArrival> load_arrival_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open arrival trace '" + path + "'");
  return read_arrival_trace(in);
}

}  // namespace ulsched
