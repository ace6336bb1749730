#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "ulsched/assignment.hpp"
#include "ulsched/channel.hpp"
#include "ulsched/traffic.hpp"

namespace ulsched {

// w = min(p, b) per (UE, RC): the bytes a UE would actually send on an RC.
struct TrafficMatrix {
  RewardMatrix w;
  RewardMatrix p;
  std::vector<std::int64_t> b;

  std::size_t ue_count() const { return b.size(); }
  std::size_t rc_count() const { return p.cols(); }
};

TrafficMatrix build_traffic_matrix(const CqiGrid& cqi,
                                   std::span<const std::int64_t> buffered);

// Same as build_traffic_matrix but from a capacity matrix in bytes.
TrafficMatrix traffic_matrix_from_capacity(const RewardMatrix& p,
                                           std::span<const std::int64_t> buffered);

// d_ij = max(0, k_i - w_ij): urgent bytes UE i still loses when granted RC j.
// `k_current` must exclude the drop-history term.
RewardMatrix compute_drop_matrix(std::span<const std::int64_t> k_current,
                                 const TrafficMatrix& traffic);

struct SchedulerDecision {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> rc_owner;              // per RC: UE or kNone
  std::vector<std::int64_t> grant;                // per UE: bytes granted
  std::vector<std::vector<std::size_t>> ue_rcs;   // per UE: RCs granted
  std::int64_t objective = 0;
  std::size_t rounds = 0;

  bool scheduled(std::size_t ue) const { return !ue_rcs[ue].empty(); }
  std::int64_t total_grant() const;

  friend bool operator==(const SchedulerDecision&,
                         const SchedulerDecision&) = default;
};

// Throughput-maximizing assignment: one RC per UE, zero-cost dummy RCs when
// there are more backlogged UEs than RCs. With fewer backlogged UEs than RCs
// the surplus rounds below run with zero urgency. UEs with empty buffers are
// not active and take no part.
SchedulerDecision schedule_dham(const TrafficMatrix& traffic);

// Drop-aware assignment maximizing sum(w - d) - sum(beta * k): every dummy
// RC in row i costs -k_i (history included), and w - d on real RCs uses the
// current-TTI urgency only. Falls back to schedule_iterative_surplus when
// fewer UEs than RCs are backlogged.
SchedulerDecision schedule_darts(const TrafficMatrix& traffic,
                                 std::span<const UrgencyReport> urgency);

// Repeated assignment rounds (d omitted) while RCs and backlog remain. After
// each round the granted bytes are taken off b and k (k floored at 0).
SchedulerDecision schedule_iterative_surplus(
    const TrafficMatrix& traffic, std::span<const UrgencyReport> urgency);

// k_i = m_vo + m_vi + m_d + drop history, from mixed-mode reports.
std::vector<std::int64_t> dafs_metric(std::span<const UrgencyReport> urgency);

// schedule_darts driven by the mixed-class metric.
SchedulerDecision schedule_dafs(const TrafficMatrix& traffic,
                                std::span<const UrgencyReport> urgency);

enum class Policy { dham, darts, dafs };

std::string_view to_string(Policy p);
// Throws std::invalid_argument for unknown names.
Policy policy_from_string(std::string_view name);

// Urgency mode a policy expects from the UEs.
UrgencyMode urgency_mode_for(Policy p);

SchedulerDecision schedule(Policy policy, const TrafficMatrix& traffic,
                           std::span<const UrgencyReport> urgency);

}  // namespace ulsched
