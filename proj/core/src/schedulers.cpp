#include "ulsched/schedulers.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ulsched {

std::int64_t SchedulerDecision::total_grant() const {
  return std::accumulate(grant.begin(), grant.end(), std::int64_t{0});
}

TrafficMatrix traffic_matrix_from_capacity(
    const RewardMatrix& p, std::span<const std::int64_t> buffered) {
  if (p.rows() != buffered.size()) {
    throw std::invalid_argument("traffic matrix: " +
                                std::to_string(buffered.size()) +
                                " buffers for " + std::to_string(p.rows()) +
                                " UEs");
  }
  TrafficMatrix t;
  t.p = p;
  t.b.assign(buffered.begin(), buffered.end());
  t.w = RewardMatrix(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      t.w(i, j) = std::min(p(i, j), t.b[i]);
  return t;
}

TrafficMatrix build_traffic_matrix(const CqiGrid& cqi,
                                   std::span<const std::int64_t> buffered) {
  RewardMatrix p(cqi.ue_count(), cqi.rc_count());
  for (std::size_t i = 0; i < cqi.ue_count(); ++i)
    for (std::size_t j = 0; j < cqi.rc_count(); ++j)
      p(i, j) = cqi_to_bytes_per_rc(cqi.at(i, j));
  return traffic_matrix_from_capacity(p, buffered);
}

RewardMatrix compute_drop_matrix(std::span<const std::int64_t> k_current,
                                 const TrafficMatrix& traffic) {
  if (k_current.size() != traffic.ue_count()) {
    throw std::invalid_argument("compute_drop_matrix: urgency length mismatch");
  }
  RewardMatrix d(traffic.ue_count(), traffic.rc_count());
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      d(i, j) = std::max<std::int64_t>(0, k_current[i] - traffic.w(i, j));
  return d;
}

namespace {

SchedulerDecision empty_decision(const TrafficMatrix& traffic) {
  SchedulerDecision d;
  d.rc_owner.assign(traffic.rc_count(), SchedulerDecision::kNone);
  d.grant.assign(traffic.ue_count(), 0);
  d.ue_rcs.assign(traffic.ue_count(), {});
  return d;
}

std::vector<std::size_t> backlogged(std::span<const std::int64_t> b) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] > 0) out.push_back(i);
  return out;
}

void check_urgency(const TrafficMatrix& traffic,
                   std::span<const UrgencyReport> urgency) {
  if (urgency.size() != traffic.ue_count()) {
    throw std::invalid_argument("scheduler: " + std::to_string(urgency.size()) +
                                " urgency reports for " +
                                std::to_string(traffic.ue_count()) + " UEs");
  }
}

// Writes one solved assignment round into the decision. `rows` maps matrix
// rows to UE ids, `cols` maps real matrix columns to RC ids.
void apply_round(const Assignment& a, std::span<const std::size_t> rows,
                 std::span<const std::size_t> cols, const RewardMatrix& w_sub,
                 SchedulerDecision& d) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t c = a.mapping[r];
    if (c == Assignment::kNone || c >= cols.size()) continue;
    const std::size_t ue = rows[r];
    const std::size_t rc = cols[c];
    d.rc_owner[rc] = ue;
    d.ue_rcs[ue].push_back(rc);
    d.grant[ue] += w_sub(r, c);
  }
  d.objective += a.objective;
  d.rounds += 1;
}

std::vector<std::size_t> all_rcs(std::size_t m) {
  std::vector<std::size_t> v(m);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

std::vector<UrgencyReport> zero_urgency(std::size_t n) {
  return std::vector<UrgencyReport>(n);
}

}  // namespace

SchedulerDecision schedule_iterative_surplus(
    const TrafficMatrix& traffic, std::span<const UrgencyReport> urgency) {
  check_urgency(traffic, urgency);
  SchedulerDecision d = empty_decision(traffic);
  std::vector<std::int64_t> b = traffic.b;
  std::vector<std::int64_t> k(urgency.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = urgency[i].k;
  std::vector<std::size_t> free_rcs = all_rcs(traffic.rc_count());

  for (std::size_t round = 0; round < traffic.rc_count(); ++round) {
    const std::vector<std::size_t> rows = backlogged(b);
    if (rows.empty() || free_rcs.empty()) break;

    RewardMatrix w(rows.size(), free_rcs.size());
    std::vector<std::int64_t> penalty(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      penalty[r] = k[rows[r]];
      for (std::size_t c = 0; c < free_rcs.size(); ++c)
        w(r, c) = std::min(traffic.p(rows[r], free_rcs[c]), b[rows[r]]);
    }
    const RewardMatrix square = rows.size() < free_rcs.size()
                                    ? pad_with_zero_dummy_rows(w)
                                    : replicate_penalty_dummies(w, penalty);
    const Assignment a = solve_max_assignment(square);

    const std::vector<std::int64_t> before = d.grant;
    apply_round(a, rows, free_rcs, w, d);
    for (std::size_t ue : rows) {
      const std::int64_t got = d.grant[ue] - before[ue];
      b[ue] -= got;
      k[ue] = std::max<std::int64_t>(0, k[ue] - got);
    }
    std::erase_if(free_rcs, [&](std::size_t rc) {
      return d.rc_owner[rc] != SchedulerDecision::kNone;
    });
  }
  return d;
}

SchedulerDecision schedule_dham(const TrafficMatrix& traffic) {
  const std::vector<std::size_t> rows = backlogged(traffic.b);
  if (rows.size() < traffic.rc_count()) {
    return schedule_iterative_surplus(traffic,
                                      zero_urgency(traffic.ue_count()));
  }
  SchedulerDecision d = empty_decision(traffic);
  RewardMatrix w(rows.size(), traffic.rc_count());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < traffic.rc_count(); ++c)
      w(r, c) = traffic.w(rows[r], c);
  const Assignment a = solve_max_assignment(pad_with_zero_dummies(w));
  apply_round(a, rows, all_rcs(traffic.rc_count()), w, d);
  return d;
}

SchedulerDecision schedule_darts(const TrafficMatrix& traffic,
                                 std::span<const UrgencyReport> urgency) {
  check_urgency(traffic, urgency);
  const std::vector<std::size_t> rows = backlogged(traffic.b);
  if (rows.size() < traffic.rc_count()) {
    return schedule_iterative_surplus(traffic, urgency);
  }
  SchedulerDecision d = empty_decision(traffic);
  RewardMatrix w(rows.size(), traffic.rc_count());
  RewardMatrix gamma(rows.size(), traffic.rc_count());
  std::vector<std::int64_t> penalty(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const UrgencyReport& u = urgency[rows[r]];
    penalty[r] = u.k;
    for (std::size_t c = 0; c < traffic.rc_count(); ++c) {
      w(r, c) = traffic.w(rows[r], c);
      gamma(r, c) = w(r, c) - std::max<std::int64_t>(0, u.k_current - w(r, c));
    }
  }
  const Assignment a =
      solve_max_assignment(replicate_penalty_dummies(gamma, penalty));
  apply_round(a, rows, all_rcs(traffic.rc_count()), w, d);
  return d;
}

std::vector<std::int64_t> dafs_metric(std::span<const UrgencyReport> urgency) {
  std::vector<std::int64_t> k(urgency.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const UrgencyReport& u = urgency[i];
    k[i] = u.m_vo + u.m_vi + u.m_d + u.history;
  }
  return k;
}

SchedulerDecision schedule_dafs(const TrafficMatrix& traffic,
                                std::span<const UrgencyReport> urgency) {
  std::vector<UrgencyReport> reports(urgency.begin(), urgency.end());
  const std::vector<std::int64_t> k = dafs_metric(urgency);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    reports[i].k = k[i];
    reports[i].k_current = k[i] - reports[i].history;
  }
  return schedule_darts(traffic, reports);
}

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::dham: return "dham";
    case Policy::darts: return "darts";
    case Policy::dafs: return "dafs";
  }
  return "?";
}

Policy policy_from_string(std::string_view name) {
  for (Policy p : {Policy::dham, Policy::darts, Policy::dafs}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected dham | darts | dafs)");
}

UrgencyMode urgency_mode_for(Policy p) {
  return p == Policy::dafs ? UrgencyMode::mixed : UrgencyMode::single_class;
}

SchedulerDecision schedule(Policy policy, const TrafficMatrix& traffic,
                           std::span<const UrgencyReport> urgency) {
  switch (policy) {
    case Policy::dham: return schedule_dham(traffic);
    case Policy::darts: return schedule_darts(traffic, urgency);
    case Policy::dafs: return schedule_dafs(traffic, urgency);
  }
  throw std::invalid_argument("schedule: bad policy");
}

}  // namespace ulsched
