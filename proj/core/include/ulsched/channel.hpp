#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace ulsched {

struct PathLossModel {
  double intercept_db = 128.1;  // loss at 1 km
  double slope_db = 37.6;       // per decade of distance
};

std::vector<double> default_cqi_thresholds();

struct ChannelConfig {
  double inter_site_distance_m = 500.0;
  double bandwidth_hz = 10e6;
  double center_freq_hz = 2e9;
  int n_prb_total = 50;
  int n_prb_data = 48;
  int prb_per_rc = 6;
  double prb_bandwidth_hz = 180e3;

  double p_max_dbm = 24.0;
  double p_o_dbm = -106.0;
  double alpha_pc = 1.0;

  double shadowing_sigma_db = 4.0;
  // Building/vehicle penetration added to every link on top of the distance
  // law.
  double penetration_loss_db = 20.0;
  double min_distance_m = 35.0;
  PathLossModel path_loss;

  double thermal_noise_dbm_hz = -174.0;
  double noise_figure_db = 5.0;

  bool fast_fading = true;
  // 15 ascending SINR thresholds; CQI k covers [t_k, t_{k+1}).
  std::vector<double> cqi_thresholds_db = default_cqi_thresholds();

  int rc_count() const { return prb_per_rc > 0 ? n_prb_data / prb_per_rc : 0; }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

struct UePlacement {
  Point position;
  double distance_m = 0.0;  // to the serving eNodeB
  double shadowing_db = 0.0;
};

// Seven-cell layout: the serving cell at the origin plus six first-tier
// cells. Immutable once deployed.
struct Topology {
  Point serving;
  std::array<Point, 6> neighbors{};
  double cell_radius_m = 0.0;  // hexagon circumradius
  std::vector<UePlacement> ues;

  std::size_t ue_count() const { return ues.size(); }
};

std::array<Point, 6> first_tier_centers(double inter_site_distance_m);

bool inside_hexagon(Point p, Point center, double circumradius);

// Path loss for a link of the given length. Throws std::domain_error for
// distance <= 0.
double path_loss(double distance_m, const PathLossModel& model = {});

// Open-loop fractional power control, capped at P_max:
//   min(P_max, P_o + 10 log10(n_prb) + alpha * PL)
// Throws std::domain_error for n_prb < 1.
double uplink_tx_power(double path_loss_db, int n_prb, const ChannelConfig& cfg);

// Thermal noise plus noise figure over one RC.
double rc_noise_dbm(const ChannelConfig& cfg);

// Total loss from UE i to the serving eNodeB: distance law, penetration and
// the UE's shadowing realization.
double coupling_loss_db(const Topology& topo, std::size_t ue,
                        const ChannelConfig& cfg);

struct SinrTerms {
  double signal_dbm = 0.0;
  double noise_dbm = 0.0;
  std::array<double, 6> interference_dbm{};
  double sinr_db = 0.0;
};

// Linear-domain combination: S / (N + sum I), returned in dB.
double combine_sinr_db(double signal_dbm, double noise_dbm,
                       std::span<const double> interference_dbm);

// Received powers at the serving eNodeB from one interfering UE per
// first-tier cell, for a single (tti, rc) slot.
std::array<double, 6> realize_interference(const Topology& topo,
                                           const ChannelConfig& cfg,
                                           std::uint64_t seed, std::int64_t tti,
                                           int rc);

SinrTerms sinr(std::size_t ue, const Topology& topo, double fading_db,
               const std::array<double, 6>& interference_dbm,
               const ChannelConfig& cfg);

// Step function over ascending thresholds, clamped to [1, 15].
int sinr_to_cqi(double sinr_db, std::span<const double> thresholds);

// Bytes one RC (6 PRBs) carries in one TTI at the given CQI.
// Throws std::domain_error outside [1, 15].
std::int64_t cqi_to_bytes_per_rc(int cqi);

class CqiGrid {
 public:
  CqiGrid() = default;
  CqiGrid(std::size_t n_ue, std::size_t n_rc, int fill = 1);
  CqiGrid(std::size_t n_ue, std::size_t n_rc, std::vector<int> entries);

  std::size_t ue_count() const { return n_ue_; }
  std::size_t rc_count() const { return n_rc_; }

  int at(std::size_t ue, std::size_t rc) const { return cqi_[ue * n_rc_ + rc]; }
  void set(std::size_t ue, std::size_t rc, int cqi);

  std::span<const int> row(std::size_t ue) const {
    return {cqi_.data() + ue * n_rc_, n_rc_};
  }

  friend bool operator==(const CqiGrid&, const CqiGrid&) = default;

 private:
  std::size_t n_ue_ = 0;
  std::size_t n_rc_ = 0;
  std::vector<int> cqi_;
};

// One block-fading draw per (UE, RC) composed with static path loss and
// shadowing. A pure function of (seed, tti, topology, cfg).
CqiGrid realize_cqi_grid(std::int64_t tti, const Topology& topo,
                         const ChannelConfig& cfg, std::uint64_t seed);

// Rayleigh power fading expressed in dB for one (ue, rc, tti) slot.
double fading_sample_db(std::uint64_t seed, std::size_t ue, int rc,
                        std::int64_t tti);

// Source of per-TTI CQI grids.
class CqiSource {
 public:
  virtual ~CqiSource() = default;
  virtual CqiGrid grid(std::int64_t tti) const = 0;
  virtual std::size_t ue_count() const = 0;
  virtual std::size_t rc_count() const = 0;
};

class GeometricChannel final : public CqiSource {
 public:
  GeometricChannel(ChannelConfig cfg, std::shared_ptr<const Topology> topo,
                   std::uint64_t seed);

  CqiGrid grid(std::int64_t tti) const override;
  std::size_t ue_count() const override { return topo_->ue_count(); }
  std::size_t rc_count() const override {
    return static_cast<std::size_t>(cfg_.rc_count());
  }

 private:
  ChannelConfig cfg_;
  std::shared_ptr<const Topology> topo_;
  std::uint64_t seed_;
};

// Replays grids loaded from a CQI trace; the geometric pipeline is never
// touched. TTIs past the end of the trace throw std::out_of_range.
class TraceChannel final : public CqiSource {
 public:
  explicit TraceChannel(std::vector<CqiGrid> grids);

  CqiGrid grid(std::int64_t tti) const override;
  std::size_t ue_count() const override;
  std::size_t rc_count() const override;
  std::size_t tti_count() const { return grids_.size(); }

 private:
  std::vector<CqiGrid> grids_;
};

// CQI trace: one line per TTI, whitespace-separated integers in UE-major
// order, each in [1, 15]. Blank lines and '#' comments are skipped.
// Throws std::runtime_error naming the offending line.
std::vector<CqiGrid> read_cqi_trace(std::istream& in, std::size_t n_ue,
                                    std::size_t n_rc);
std::vector<CqiGrid> load_cqi_trace(const std::string& path, std::size_t n_ue,
                                    std::size_t n_rc);
void write_cqi_trace(std::ostream& out, std::span<const CqiGrid> grids);

}  // namespace ulsched
