#include "ulsched/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ulsched/rng.hpp"

namespace ulsched {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

double to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double to_dbm(double mw) { return 10.0 * std::log10(mw); }

double standard_normal(SplitMix64& gen) {
  // Box-Muller on (0, 1] uniforms.
  const double u1 = uniform_open0(gen);
  const double u2 = uniform_open0(gen);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double rayleigh_db(SplitMix64& gen) {
  return 10.0 * std::log10(-std::log(uniform_open0(gen)));
}

Point sample_in_hexagon(Point center, double radius, double min_distance,
                        SplitMix64& gen) {
  for (;;) {
    const double x = (2.0 * uniform_open0(gen) - 1.0) * radius;
    const double y = (2.0 * uniform_open0(gen) - 1.0) * radius * kSqrt3 / 2.0;
    const Point p{center.x + x, center.y + y};
    if (inside_hexagon(p, center, radius) &&
        distance(p, center) >= min_distance) {
      return p;
    }
  }
}

}  // namespace

std::vector<double> default_cqi_thresholds() {
  std::vector<double> t(15);
  for (int k = 0; k < 15; ++k) t[k] = -6.0 + 2.0 * k;
  return t;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::array<Point, 6> first_tier_centers(double inter_site_distance_m) {
  std::array<Point, 6> out{};
  for (int k = 0; k < 6; ++k) {
    const double angle = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
    out[k] = {inter_site_distance_m * std::cos(angle),
              inter_site_distance_m * std::sin(angle)};
  }
  return out;
}

bool inside_hexagon(Point p, Point center, double circumradius) {
  // Flat-topped hexagon, matching first_tier_centers' 30 degree offsets.
  const double ax = std::abs(p.x - center.x);
  const double ay = std::abs(p.y - center.y);
  const double eps = 1e-9 * circumradius;
  return ay <= kSqrt3 / 2.0 * circumradius + eps &&
         kSqrt3 * ax + ay <= kSqrt3 * circumradius + eps;
}

double path_loss(double distance_m, const PathLossModel& model) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("path_loss: distance must be positive, got " +
                            std::to_string(distance_m));
  }
  return model.intercept_db + model.slope_db * std::log10(distance_m / 1000.0);
}

double uplink_tx_power(double path_loss_db, int n_prb,
                       const ChannelConfig& cfg) {
  if (n_prb < 1) {
    throw std::domain_error("uplink_tx_power: n_prb must be >= 1");
  }
  const double open_loop = cfg.p_o_dbm + 10.0 * std::log10(n_prb) +
                           cfg.alpha_pc * path_loss_db;
  return std::min(cfg.p_max_dbm, open_loop);
}

double rc_noise_dbm(const ChannelConfig& cfg) {
  return cfg.thermal_noise_dbm_hz +
         10.0 * std::log10(cfg.prb_per_rc * cfg.prb_bandwidth_hz) +
         cfg.noise_figure_db;
}

double coupling_loss_db(const Topology& topo, std::size_t ue,
                        const ChannelConfig& cfg) {
  const UePlacement& u = topo.ues.at(ue);
  return path_loss(u.distance_m, cfg.path_loss) + cfg.penetration_loss_db +
         u.shadowing_db;
}

double combine_sinr_db(double signal_dbm, double noise_dbm,
                       std::span<const double> interference_dbm) {
  double denom = to_mw(noise_dbm);
  for (double i : interference_dbm) denom += to_mw(i);
  return to_dbm(to_mw(signal_dbm) / denom);
}

std::array<double, 6> realize_interference(const Topology& topo,
                                           const ChannelConfig& cfg,
                                           std::uint64_t seed, std::int64_t tti,
                                           int rc) {
  std::array<double, 6> out{};
  const int n_prb = cfg.prb_per_rc;
  for (std::size_t cell = 0; cell < topo.neighbors.size(); ++cell) {
    SplitMix64 gen(derive_seed(seed, Stream::interference,
                               {static_cast<std::uint64_t>(tti),
                                static_cast<std::uint64_t>(rc), cell}));
    const Point home = topo.neighbors[cell];
    const Point pos =
        sample_in_hexagon(home, topo.cell_radius_m, cfg.min_distance_m, gen);
    const double own_loss = path_loss(distance(pos, home), cfg.path_loss) +
                            cfg.penetration_loss_db +
                            cfg.shadowing_sigma_db * standard_normal(gen);
    const double tx = uplink_tx_power(own_loss, n_prb, cfg);
    const double cross_loss =
        path_loss(std::max(distance(pos, topo.serving), cfg.min_distance_m),
                  cfg.path_loss) +
        cfg.penetration_loss_db + cfg.shadowing_sigma_db * standard_normal(gen);
    const double fading = cfg.fast_fading ? rayleigh_db(gen) : 0.0;
    out[cell] = tx - cross_loss + fading;
  }
  return out;
}

SinrTerms sinr(std::size_t ue, const Topology& topo, double fading_db,
               const std::array<double, 6>& interference_dbm,
               const ChannelConfig& cfg) {
  const double loss = coupling_loss_db(topo, ue, cfg);
  SinrTerms t;
  t.signal_dbm = uplink_tx_power(loss, cfg.prb_per_rc, cfg) - loss + fading_db;
  t.noise_dbm = rc_noise_dbm(cfg);
  t.interference_dbm = interference_dbm;
  t.sinr_db = combine_sinr_db(t.signal_dbm, t.noise_dbm, t.interference_dbm);
  return t;
}

int sinr_to_cqi(double sinr_db, std::span<const double> thresholds) {
  const auto reached = std::upper_bound(thresholds.begin(), thresholds.end(),
                                        sinr_db) -
                       thresholds.begin();
  return std::clamp(static_cast<int>(reached), 1, 15);
}

std::int64_t cqi_to_bytes_per_rc(int cqi) {
  if (cqi < 1 || cqi > 15) {
    throw std::domain_error("cqi_to_bytes_per_rc: CQI " + std::to_string(cqi) +
                            " outside [1, 15]");
  }
  if (cqi <= 6) return 252;  // QPSK
  if (cqi <= 9) return 504;  // 16-QAM
  return 756;                // 64-QAM
}

CqiGrid::CqiGrid(std::size_t n_ue, std::size_t n_rc, int fill)
    : n_ue_(n_ue), n_rc_(n_rc), cqi_(n_ue * n_rc, fill) {}

CqiGrid::CqiGrid(std::size_t n_ue, std::size_t n_rc, std::vector<int> entries)
    : n_ue_(n_ue), n_rc_(n_rc), cqi_(std::move(entries)) {
  if (cqi_.size() != n_ue * n_rc) {
    throw std::invalid_argument("CqiGrid: entry count mismatch");
  }
  for (int c : cqi_) {
    if (c < 1 || c > 15) throw std::domain_error("CqiGrid: CQI outside [1, 15]");
  }
}

void CqiGrid::set(std::size_t ue, std::size_t rc, int cqi) {
  if (cqi < 1 || cqi > 15) throw std::domain_error("CqiGrid: CQI outside [1, 15]");
  cqi_[ue * n_rc_ + rc] = cqi;
}

double fading_sample_db(std::uint64_t seed, std::size_t ue, int rc,
                        std::int64_t tti) {
  SplitMix64 gen(derive_seed(seed, Stream::fading,
                             {static_cast<std::uint64_t>(tti), ue,
                              static_cast<std::uint64_t>(rc)}));
  return rayleigh_db(gen);
}

CqiGrid realize_cqi_grid(std::int64_t tti, const Topology& topo,
                         const ChannelConfig& cfg, std::uint64_t seed) {
  const int n_rc = cfg.rc_count();
  CqiGrid grid(topo.ue_count(), static_cast<std::size_t>(n_rc));
  for (int rc = 0; rc < n_rc; ++rc) {
    const auto interference = realize_interference(topo, cfg, seed, tti, rc);
    for (std::size_t ue = 0; ue < topo.ue_count(); ++ue) {
      const double fading =
          cfg.fast_fading ? fading_sample_db(seed, ue, rc, tti) : 0.0;
      const SinrTerms t = sinr(ue, topo, fading, interference, cfg);
      grid.set(ue, static_cast<std::size_t>(rc),
               sinr_to_cqi(t.sinr_db, cfg.cqi_thresholds_db));
    }
  }
  return grid;
}

GeometricChannel::GeometricChannel(ChannelConfig cfg,
                                   std::shared_ptr<const Topology> topo,
                                   std::uint64_t seed)
    : cfg_(std::move(cfg)), topo_(std::move(topo)), seed_(seed) {
  if (!topo_) throw std::invalid_argument("GeometricChannel: null topology");
}

CqiGrid GeometricChannel::grid(std::int64_t tti) const {
  return realize_cqi_grid(tti, *topo_, cfg_, seed_);
}

TraceChannel::TraceChannel(std::vector<CqiGrid> grids)
    : grids_(std::move(grids)) {
  if (grids_.empty()) throw std::invalid_argument("TraceChannel: empty trace");
}

CqiGrid TraceChannel::grid(std::int64_t tti) const {
  if (tti < 0 || static_cast<std::size_t>(tti) >= grids_.size()) {
    throw std::out_of_range("TraceChannel: TTI " + std::to_string(tti) +
                            " beyond trace of " +
                            std::to_string(grids_.size()));
  }
  return grids_[static_cast<std::size_t>(tti)];
}

std::size_t TraceChannel::ue_count() const { return grids_.front().ue_count(); }
std::size_t TraceChannel::rc_count() const { return grids_.front().rc_count(); }

std::vector<CqiGrid> read_cqi_trace(std::istream& in, std::size_t n_ue,
                                    std::size_t n_rc) {
  std::vector<CqiGrid> grids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::vector<int> values;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw std::runtime_error("CQI trace line " + std::to_string(line_no) +
                                 ": not an integer: '" + tok + "'");
      }
      if (v < 1 || v > 15) {
        throw std::runtime_error("CQI trace line " + std::to_string(line_no) +
                                 ": CQI " + tok + " outside [1, 15]");
      }
      values.push_back(v);
    }
    if (values.empty()) continue;
    if (values.size() != n_ue * n_rc) {
      throw std::runtime_error(
          "CQI trace line " + std::to_string(line_no) + ": expected " +
          std::to_string(n_ue * n_rc) + " values, got " +
          std::to_string(values.size()));
    }
    grids.emplace_back(n_ue, n_rc, std::move(values));
  }
  return grids;
}

std::vector<CqiGrid> load_cqi_trace(const std::string& path, std::size_t n_ue,
                                    std::size_t n_rc) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CQI trace '" + path + "'");
  return read_cqi_trace(in, n_ue, n_rc);
}

void write_cqi_trace(std::ostream& out, std::span<const CqiGrid> grids) {
  for (const CqiGrid& g : grids) {
    for (std::size_t ue = 0; ue < g.ue_count(); ++ue) {
      for (std::size_t rc = 0; rc < g.rc_count(); ++rc) {
        if (ue + rc > 0) out << ' ';
        out << g.at(ue, rc);
      }
    }
    out << '\n';
  }
}

}  // namespace ulsched
