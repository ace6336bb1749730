#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ulsched/channel.hpp"
#include "ulsched/schedulers.hpp"
#include "ulsched/traffic.hpp"
#include "ulsched/ue_transmitter.hpp"

namespace ulsched {

// Validation or parse failure tied to one configuration key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class DeploymentMode { fixed, ppp };

// Offered load per class, summed over every UE in the serving cell.
struct LoadPoint {
  double voice_mbps = 0.0;
  double video_mbps = 0.0;
  double data_mbps = 0.0;

  double total_mbps() const { return voice_mbps + video_mbps + data_mbps; }
};

// A scheduler plus the drain the UEs run under it. "dafs-pf" names DAFS
// with priority flipping.
struct PolicyPair {
  Policy policy = Policy::dham;
  UePolicy ue_policy = UePolicy::strict;

  std::string name() const;
};

// Throws std::invalid_argument for unknown names.
PolicyPair policy_pair_from_string(std::string_view name);

struct SweepConfig {
  std::vector<LoadPoint> points;
  std::vector<PolicyPair> policies;  // empty: the scenario's own policy
  int replicates = 1;                // seeds seed, seed+1, ...
};

struct ScenarioConfig {
  std::string name = "scenario";
  Policy policy = Policy::dham;
  UePolicy ue_policy = UePolicy::strict;
  std::uint64_t seed = 1;
  std::int64_t tti_count = 10000;

  DeploymentMode deployment = DeploymentMode::fixed;
  std::size_t ue_count = 30;
  double ppp_intensity_per_km2 = 150.0;

  LoadPoint load{1.0, 1.0, 1.0};

  ChannelConfig channel;
  BufferConfig buffer;
  VoiceConfig voice;
  VideoConfig video;
  DataConfig data;

  std::string cqi_trace;      // replaces the geometric channel when set
  std::string arrival_trace;  // replaces the generators when set
  bool record_trace = false;

  SweepConfig sweep;
};

// Rejects inconsistent settings with a ConfigError naming the key, e.g.
// "buffer_threshold" when the threshold is not below the capacity.
void validate(const ScenarioConfig& cfg);

// JSON scenario file. Every key is optional and falls back to the defaults
// above; unknown keys are rejected. The result is validated.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_string(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// The effective configuration as JSON, readable by parse_config.
std::string dump_config(const ScenarioConfig& cfg);

}  // namespace ulsched
