#include "ulsched/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ulsched {

using nlohmann::json;

std::string PolicyPair::name() const {
  if (policy == Policy::dafs && ue_policy == UePolicy::flip) return "dafs-pf";
  std::string n(to_string(policy));
  if (ue_policy == UePolicy::flip) n += "+flip";
  return n;
}

PolicyPair policy_pair_from_string(std::string_view name) {
  if (name == "dafs-pf") return {Policy::dafs, UePolicy::flip};
  const auto plus = name.find('+');
  if (plus == std::string_view::npos) return {policy_from_string(name), UePolicy::strict};
  return {policy_from_string(name.substr(0, plus)),
          ue_policy_from_string(name.substr(plus + 1))};
}

namespace {

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

void validate_load(const LoadPoint& l, const std::string& prefix) {
  const std::pair<const char*, double> loads[] = {
      {"voice_mbps", l.voice_mbps},
      {"video_mbps", l.video_mbps},
      {"data_mbps", l.data_mbps}};
  for (const auto& [key, v] : loads) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError(prefix + key, "offered load must be a finite value >= 0");
    }
  }
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.tti_count > 0, "tti_count", "must be positive");
  require(c.buffer.capacity_bytes > 0, "buffer_capacity", "must be positive");
  require(c.buffer.threshold_bytes >= 0 &&
              c.buffer.threshold_bytes < c.buffer.capacity_bytes,
          "buffer_threshold", "must satisfy 0 <= threshold < capacity");
  require(c.buffer.voice_deadline_ms > 0, "voice_deadline_ms", "must be positive");
  require(c.buffer.video_deadline_ms > 0, "video_deadline_ms", "must be positive");
  require(c.buffer.history_window >= 1, "history_window", "must be at least 1");

  if (c.deployment == DeploymentMode::fixed || !c.cqi_trace.empty()) {
    require(c.ue_count >= 1, "ue_count", "must be at least 1");
  } else {
    require(c.ppp_intensity_per_km2 > 0.0, "ppp_intensity_per_km2",
            "must be positive");
  }
  validate_load(c.load, "");

  const ChannelConfig& ch = c.channel;
  require(ch.inter_site_distance_m > 0.0, "channel.inter_site_distance_m",
          "must be positive");
  require(ch.prb_per_rc >= 1, "channel.prb_per_rc", "must be at least 1");
  require(ch.n_prb_data >= ch.prb_per_rc && ch.n_prb_data <= ch.n_prb_total,
          "channel.n_prb_data",
          "must lie in [prb_per_rc, n_prb_total]");
  require(ch.n_prb_data % ch.prb_per_rc == 0, "channel.n_prb_data",
          "must be a multiple of prb_per_rc");
  require(ch.shadowing_sigma_db >= 0.0, "channel.shadowing_sigma_db",
          "must be >= 0");
  require(ch.min_distance_m > 0.0 &&
              ch.min_distance_m < ch.inter_site_distance_m / std::sqrt(3.0),
          "channel.min_distance_m", "must be positive and inside the cell");
  require(ch.alpha_pc >= 0.0 && ch.alpha_pc <= 1.0, "channel.alpha_pc",
          "must lie in [0, 1]");
  require(ch.cqi_thresholds_db.size() == 15, "channel.cqi_thresholds_db",
          "needs exactly 15 values");
  require(std::is_sorted(ch.cqi_thresholds_db.begin(), ch.cqi_thresholds_db.end()),
          "channel.cqi_thresholds_db", "must be ascending");

  const VoiceConfig& v = c.voice;
  require(v.packet_bytes > 0, "voice.packet_bytes", "must be positive");
  require(v.sid_bytes > 0, "voice.sid_bytes", "must be positive");
  require(v.sid_interval_ms > 0.0, "voice.sid_interval_ms", "must be positive");
  require(v.talk_to_silence > 0.0 && v.talk_to_silence <= 1.0,
          "voice.talk_to_silence", "must lie in (0, 1]");
  require(v.silence_to_talk > 0.0 && v.silence_to_talk <= 1.0,
          "voice.silence_to_talk", "must lie in (0, 1]");

  const VideoConfig& vi = c.video;
  require(vi.packets_per_frame >= 1, "video.packets_per_frame", "must be at least 1");
  require(vi.min_frame_bytes >= 0, "video.min_frame_bytes", "must be >= 0");
  require(vi.size_k > 0.0 && vi.size_max > vi.size_k && vi.size_alpha > 1.0,
          "video.size_k", "needs 0 < size_k < size_max and size_alpha > 1");
  require(vi.gap_k_ms > 0.0 && vi.gap_max_ms > vi.gap_k_ms && vi.gap_alpha > 1.0,
          "video.gap_k_ms", "needs 0 < gap_k_ms < gap_max_ms and gap_alpha > 1");

  const DataConfig& d = c.data;
  require(d.sources >= 1, "data.sources", "must be at least 1");
  require(d.peak_bps_per_source > 0.0, "data.peak_bps_per_source", "must be positive");
  require(d.mean_on_ms > 0.0, "data.mean_on_ms", "must be positive");
  require(d.on_alpha > 1.0, "data.on_alpha", "must exceed 1");
  require(d.off_alpha > 1.0, "data.off_alpha", "must exceed 1");
  require(d.duration_cap > 1.0, "data.duration_cap", "must exceed 1");
  require(d.payload_min > 0 && d.payload_min <= d.payload_max, "data.payload_min",
          "needs 0 < payload_min <= payload_max");

  require(c.sweep.replicates >= 1, "sweep.replicates", "must be at least 1");
  for (const LoadPoint& p : c.sweep.points) validate_load(p, "sweep.points.");
}

namespace {

// Reads keys from one JSON object and rejects any it did not consume.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix)
      : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) {
      throw ConfigError(prefix_.empty() ? "<root>" : prefix_.substr(0, prefix_.size() - 1),
                        "expected a JSON object");
    }
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.emplace(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(prefix_ + key, std::string("wrong type: ") + e.what());
    }
  }

  template <class F>
  void with(const char* key, F&& fn) {
    seen_.emplace(key);
    auto it = obj_.find(key);
    if (it != obj_.end()) fn(*it, prefix_ + key);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(prefix_ + it.key(), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::set<std::string> seen_;
};

LoadPoint read_load(const json& j, const std::string& where, LoadPoint base) {
  ObjectReader r(j, where + ".");
  r.get("voice_mbps", base.voice_mbps);
  r.get("video_mbps", base.video_mbps);
  r.get("data_mbps", base.data_mbps);
  r.finish();
  return base;
}

void read_channel(const json& j, ChannelConfig& ch) {
  ObjectReader r(j, "channel.");
  r.get("inter_site_distance_m", ch.inter_site_distance_m);
  r.get("bandwidth_hz", ch.bandwidth_hz);
  r.get("center_freq_hz", ch.center_freq_hz);
  r.get("n_prb_total", ch.n_prb_total);
  r.get("n_prb_data", ch.n_prb_data);
  r.get("prb_per_rc", ch.prb_per_rc);
  r.get("prb_bandwidth_hz", ch.prb_bandwidth_hz);
  r.get("p_max_dbm", ch.p_max_dbm);
  r.get("p_o_dbm", ch.p_o_dbm);
  r.get("alpha_pc", ch.alpha_pc);
  r.get("shadowing_sigma_db", ch.shadowing_sigma_db);
  r.get("penetration_loss_db", ch.penetration_loss_db);
  r.get("min_distance_m", ch.min_distance_m);
  r.get("path_loss_intercept_db", ch.path_loss.intercept_db);
  r.get("path_loss_slope_db", ch.path_loss.slope_db);
  r.get("thermal_noise_dbm_hz", ch.thermal_noise_dbm_hz);
  r.get("noise_figure_db", ch.noise_figure_db);
  r.get("fast_fading", ch.fast_fading);
  r.get("cqi_thresholds_db", ch.cqi_thresholds_db);
  r.finish();
}

void read_voice(const json& j, VoiceConfig& v) {
  ObjectReader r(j, "voice.");
  r.get("packet_bytes", v.packet_bytes);
  r.get("sid_bytes", v.sid_bytes);
  r.get("sid_interval_ms", v.sid_interval_ms);
  r.get("talk_to_silence", v.talk_to_silence);
  r.get("silence_to_talk", v.silence_to_talk);
  r.finish();
}

void read_video(const json& j, VideoConfig& v) {
  ObjectReader r(j, "video.");
  r.get("packets_per_frame", v.packets_per_frame);
  r.get("min_frame_bytes", v.min_frame_bytes);
  r.get("size_k", v.size_k);
  r.get("size_alpha", v.size_alpha);
  r.get("size_max", v.size_max);
  r.get("gap_k_ms", v.gap_k_ms);
  r.get("gap_alpha", v.gap_alpha);
  r.get("gap_max_ms", v.gap_max_ms);
  r.finish();
}

void read_data(const json& j, DataConfig& d) {
  ObjectReader r(j, "data.");
  r.get("sources", d.sources);
  r.get("peak_bps_per_source", d.peak_bps_per_source);
  r.get("mean_on_ms", d.mean_on_ms);
  r.get("on_alpha", d.on_alpha);
  r.get("off_alpha", d.off_alpha);
  r.get("duration_cap", d.duration_cap);
  r.get("payload_min", d.payload_min);
  r.get("payload_max", d.payload_max);
  r.finish();
}

template <class Fn>
auto parse_enum(const std::string& key, const std::string& text, Fn fn) {
  try {
    return fn(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

ScenarioConfig from_json(const json& root) {
  ScenarioConfig c;
  ObjectReader r(root, "");
  r.get("name", c.name);

  std::string policy;
  r.get("policy", policy);
  std::string ue_policy;
  r.get("ue_policy", ue_policy);
  if (!policy.empty()) {
    const PolicyPair pp = parse_enum("policy", policy, policy_pair_from_string);
    c.policy = pp.policy;
    c.ue_policy = pp.ue_policy;
  }
  if (!ue_policy.empty()) {
    c.ue_policy = parse_enum("ue_policy", ue_policy, ue_policy_from_string);
  }

  r.get("seed", c.seed);
  r.get("tti_count", c.tti_count);

  std::string mode;
  r.get("deployment", mode);
  if (mode == "ppp") {
    c.deployment = DeploymentMode::ppp;
  } else if (mode.empty() || mode == "fixed") {
    c.deployment = DeploymentMode::fixed;
  } else {
    throw ConfigError("deployment", "expected fixed | ppp, got '" + mode + "'");
  }
  r.get("ue_count", c.ue_count);
  r.get("ppp_intensity_per_km2", c.ppp_intensity_per_km2);

  r.get("voice_mbps", c.load.voice_mbps);
  r.get("video_mbps", c.load.video_mbps);
  r.get("data_mbps", c.load.data_mbps);

  r.get("buffer_capacity", c.buffer.capacity_bytes);
  r.get("buffer_threshold", c.buffer.threshold_bytes);
  r.get("voice_deadline_ms", c.buffer.voice_deadline_ms);
  r.get("video_deadline_ms", c.buffer.video_deadline_ms);
  r.get("history_window", c.buffer.history_window);

  r.get("cqi_trace", c.cqi_trace);
  r.get("arrival_trace", c.arrival_trace);
  r.get("record_trace", c.record_trace);

  r.with("channel", [&](const json& j, const std::string&) { read_channel(j, c.channel); });
  r.with("voice", [&](const json& j, const std::string&) { read_voice(j, c.voice); });
  r.with("video", [&](const json& j, const std::string&) { read_video(j, c.video); });
  r.with("data", [&](const json& j, const std::string&) { read_data(j, c.data); });

  r.with("sweep", [&](const json& j, const std::string&) {
    ObjectReader s(j, "sweep.");
    s.with("points", [&](const json& pts, const std::string& key) {
      if (!pts.is_array()) throw ConfigError(key, "expected an array");
      for (const json& p : pts) c.sweep.points.push_back(read_load(p, key, c.load));
    });
    s.with("policies", [&](const json& pols, const std::string& key) {
      if (!pols.is_array()) throw ConfigError(key, "expected an array");
      for (const json& p : pols) {
        if (!p.is_string()) throw ConfigError(key, "expected policy names");
        c.sweep.policies.push_back(
            parse_enum(key, p.get<std::string>(), policy_pair_from_string));
      }
    });
    s.get("replicates", c.sweep.replicates);
    s.finish();
  });
  r.finish();
  return c;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
  json root;
  try {
    root = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  ScenarioConfig c = from_json(root);
  validate(c);
  return c;
}

ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  ScenarioConfig c = parse_config(in);
  // Fixture paths are relative to the config file.
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::string* p : {&c.cqi_trace, &c.arrival_trace}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) {
      *p = (base / *p).lexically_normal().string();
    }
  }
  return c;
}

std::string dump_config(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["policy"] = std::string(to_string(c.policy));
  j["ue_policy"] = std::string(to_string(c.ue_policy));
  j["seed"] = c.seed;
  j["tti_count"] = c.tti_count;
  j["deployment"] = c.deployment == DeploymentMode::ppp ? "ppp" : "fixed";
  j["ue_count"] = c.ue_count;
  j["ppp_intensity_per_km2"] = c.ppp_intensity_per_km2;
  j["voice_mbps"] = c.load.voice_mbps;
  j["video_mbps"] = c.load.video_mbps;
  j["data_mbps"] = c.load.data_mbps;
  j["buffer_capacity"] = c.buffer.capacity_bytes;
  j["buffer_threshold"] = c.buffer.threshold_bytes;
  j["voice_deadline_ms"] = c.buffer.voice_deadline_ms;
  j["video_deadline_ms"] = c.buffer.video_deadline_ms;
  j["history_window"] = c.buffer.history_window;
  j["cqi_trace"] = c.cqi_trace;
  j["arrival_trace"] = c.arrival_trace;
  j["record_trace"] = c.record_trace;

  const ChannelConfig& ch = c.channel;
  j["channel"] = {
      {"inter_site_distance_m", ch.inter_site_distance_m},
      {"bandwidth_hz", ch.bandwidth_hz},
      {"center_freq_hz", ch.center_freq_hz},
      {"n_prb_total", ch.n_prb_total},
      {"n_prb_data", ch.n_prb_data},
      {"prb_per_rc", ch.prb_per_rc},
      {"prb_bandwidth_hz", ch.prb_bandwidth_hz},
      {"p_max_dbm", ch.p_max_dbm},
      {"p_o_dbm", ch.p_o_dbm},
      {"alpha_pc", ch.alpha_pc},
      {"shadowing_sigma_db", ch.shadowing_sigma_db},
      {"penetration_loss_db", ch.penetration_loss_db},
      {"min_distance_m", ch.min_distance_m},
      {"path_loss_intercept_db", ch.path_loss.intercept_db},
      {"path_loss_slope_db", ch.path_loss.slope_db},
      {"thermal_noise_dbm_hz", ch.thermal_noise_dbm_hz},
      {"noise_figure_db", ch.noise_figure_db},
      {"fast_fading", ch.fast_fading},
      {"cqi_thresholds_db", ch.cqi_thresholds_db}};
  j["voice"] = {{"packet_bytes", c.voice.packet_bytes},
                {"sid_bytes", c.voice.sid_bytes},
                {"sid_interval_ms", c.voice.sid_interval_ms},
                {"talk_to_silence", c.voice.talk_to_silence},
                {"silence_to_talk", c.voice.silence_to_talk}};
  j["video"] = {{"packets_per_frame", c.video.packets_per_frame},
                {"min_frame_bytes", c.video.min_frame_bytes},
                {"size_k", c.video.size_k},
                {"size_alpha", c.video.size_alpha},
                {"size_max", c.video.size_max},
                {"gap_k_ms", c.video.gap_k_ms},
                {"gap_alpha", c.video.gap_alpha},
                {"gap_max_ms", c.video.gap_max_ms}};
  j["data"] = {{"sources", c.data.sources},
               {"peak_bps_per_source", c.data.peak_bps_per_source},
               {"mean_on_ms", c.data.mean_on_ms},
               {"on_alpha", c.data.on_alpha},
               {"off_alpha", c.data.off_alpha},
               {"duration_cap", c.data.duration_cap},
               {"payload_min", c.data.payload_min},
               {"payload_max", c.data.payload_max}};

  json sweep;
  json points = json::array();
  for (const LoadPoint& p : c.sweep.points) {
    points.push_back({{"voice_mbps", p.voice_mbps},
                      {"video_mbps", p.video_mbps},
                      {"data_mbps", p.data_mbps}});
  }
  sweep["points"] = points;
  json pols = json::array();
  for (const PolicyPair& p : c.sweep.policies) pols.push_back(p.name());
  sweep["policies"] = pols;
  sweep["replicates"] = c.sweep.replicates;
  j["sweep"] = sweep;
  return j.dump(2);
}

}  // namespace ulsched
