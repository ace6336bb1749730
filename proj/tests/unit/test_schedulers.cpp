#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "ulsched/schedulers.hpp"

using namespace ulsched;

namespace {

std::vector<UrgencyReport> reports(const std::vector<std::int64_t>& k_current,
                                   const std::vector<std::int64_t>& history) {
  std::vector<UrgencyReport> out(k_current.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].k_current = k_current[i];
    out[i].history = history[i];
    out[i].k = k_current[i] + history[i];
    out[i].m_vo = k_current[i];
  }
  return out;
}

TrafficMatrix random_traffic(std::mt19937_64& rng, std::size_t n, std::size_t m,
                             std::int64_t b_lo) {
  static constexpr std::int64_t kTiers[] = {252, 504, 756};
  std::uniform_int_distribution<int> tier(0, 2);
  std::uniform_int_distribution<std::int64_t> buf(b_lo, 1600);
  RewardMatrix p(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) p(i, j) = kTiers[tier(rng)];
  std::vector<std::int64_t> b(n);
  for (auto& v : b) v = buf(rng);
  return traffic_matrix_from_capacity(p, b);
}

void expect_consistent(const SchedulerDecision& d, const TrafficMatrix& t) {
  ASSERT_EQ(d.rc_owner.size(), t.rc_count());
  ASSERT_EQ(d.grant.size(), t.ue_count());
  for (std::size_t j = 0; j < t.rc_count(); ++j) {
    const std::size_t ue = d.rc_owner[j];
    if (ue == SchedulerDecision::kNone) continue;
    ASSERT_LT(ue, t.ue_count());
    EXPECT_NE(std::find(d.ue_rcs[ue].begin(), d.ue_rcs[ue].end(), j), d.ue_rcs[ue].end());
  }
  for (std::size_t i = 0; i < t.ue_count(); ++i) {
    EXPECT_LE(d.grant[i], t.b[i]);
    EXPECT_GE(d.grant[i], 0);
    if (t.b[i] == 0) {
      EXPECT_FALSE(d.scheduled(i));
    }
  }
}

}  // namespace

TEST(TrafficMatrixTest, ClipsCapacityAtBuffer) {
  const CqiGrid cqi(3, 2, std::vector<int>{7, 12, 3, 15, 10, 1});
  const std::vector<std::int64_t> b = {600, 100, 0};
  const TrafficMatrix t = build_traffic_matrix(cqi, b);
  EXPECT_EQ(t.p, RewardMatrix::from_rows({{504, 756}, {252, 756}, {756, 252}}));
  EXPECT_EQ(t.w, RewardMatrix::from_rows({{504, 600}, {100, 100}, {0, 0}}));
  const std::vector<std::int64_t> wrong = {1, 2};
  EXPECT_THROW(build_traffic_matrix(cqi, wrong), std::invalid_argument);
}

TEST(DropMatrix, UrgentBytesLeftAfterGrant) {
  const TrafficMatrix t =
      traffic_matrix_from_capacity(RewardMatrix::from_rows({{252, 756}, {504, 504}}),
                                   std::vector<std::int64_t>{2000, 2000});
  const std::vector<std::int64_t> kc = {550, 0};
  const RewardMatrix d = compute_drop_matrix(kc, t);
  EXPECT_EQ(d(0, 0), 298);
  EXPECT_EQ(d(0, 1), 0);
  EXPECT_EQ(d(1, 0), 0);
  const std::vector<std::int64_t> short_k = {1};
  EXPECT_THROW(compute_drop_matrix(short_k, t), std::invalid_argument);
}

TEST(Dham, PicksLargestTransmission) {
  const TrafficMatrix t = traffic_matrix_from_capacity(
      RewardMatrix::from_rows({{504}, {756}, {252}}), std::vector<std::int64_t>{400, 300, 260});
  const SchedulerDecision d = schedule_dham(t);
  EXPECT_EQ(d.rc_owner[0], 0u);
  EXPECT_EQ(d.grant, (std::vector<std::int64_t>{400, 0, 0}));
  EXPECT_EQ(d.objective, 400);
  EXPECT_EQ(d.rounds, 1u);
}

TEST(Dham, MaximizesTotalGrant) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + trial % 4;
    const std::size_t n = m + trial % 3;
    const TrafficMatrix t = random_traffic(rng, n, m, 1);
    const SchedulerDecision d = schedule_dham(t);
    expect_consistent(d, t);
    oracle::Matrix padded(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) padded[i][j] = t.w(i, j);
    ASSERT_EQ(d.total_grant(), oracle::max_assignment_value(padded));
    ASSERT_EQ(d.objective, d.total_grant());
  }
}

TEST(Dham, SingleUeTakesEveryChunkInRounds) {
  const TrafficMatrix t = traffic_matrix_from_capacity(RewardMatrix(1, 3, 504),
                                                       std::vector<std::int64_t>{1200});
  const SchedulerDecision d = schedule_dham(t);
  EXPECT_EQ(d.rounds, 3u);
  EXPECT_EQ(d.grant[0], 1200);
  EXPECT_EQ(d.ue_rcs[0], (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Dham, SurplusStopsWhenBuffersEmpty) {
  const TrafficMatrix t = traffic_matrix_from_capacity(RewardMatrix(2, 4, 756),
                                                       std::vector<std::int64_t>{100, 900});
  const SchedulerDecision d = schedule_dham(t);
  EXPECT_EQ(d.grant, (std::vector<std::int64_t>{100, 900}));
  EXPECT_EQ(d.ue_rcs[0].size() + d.ue_rcs[1].size(), 3u);
  EXPECT_EQ(std::count(d.rc_owner.begin(), d.rc_owner.end(), SchedulerDecision::kNone), 1);
}

TEST(Dham, EmptyBuffersAreIgnored) {
  const TrafficMatrix t = traffic_matrix_from_capacity(RewardMatrix(4, 2, 756),
                                                       std::vector<std::int64_t>{0, 0, 0, 0});
  const SchedulerDecision d = schedule_dham(t);
  EXPECT_EQ(d.total_grant(), 0);
  for (std::size_t owner : d.rc_owner) EXPECT_EQ(owner, SchedulerDecision::kNone);
}

TEST(Darts, PrefersUserAboutToDrop) {
  // One chunk, three users; the third would lose the most if skipped.
  const TrafficMatrix t = traffic_matrix_from_capacity(
      RewardMatrix::from_rows({{504}, {504}, {252}}), std::vector<std::int64_t>{400, 300, 260});
  const auto u = reports({50, 100, 255}, {0, 0, 0});
  const SchedulerDecision d = schedule_darts(t, u);
  EXPECT_EQ(d.rc_owner[0], 2u);
  EXPECT_EQ(d.objective, (252 - 3) - 50 - 100);
  EXPECT_EQ(d.grant[2], 252);
  EXPECT_EQ(schedule_dham(t).rc_owner[0], 0u);
}

TEST(Darts, HistoryRaisesSkipCost) {
  const TrafficMatrix t = traffic_matrix_from_capacity(
      RewardMatrix::from_rows({{504}, {504}}), std::vector<std::int64_t>{500, 480});
  EXPECT_EQ(schedule_darts(t, reports({0, 0}, {0, 0})).rc_owner[0], 0u);
  EXPECT_EQ(schedule_darts(t, reports({0, 0}, {0, 40})).rc_owner[0], 1u);
}

TEST(Darts, ZeroUrgencyMatchesDham) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + trial % 4;
    const std::size_t n = 1 + trial % 7;
    const TrafficMatrix t = random_traffic(rng, n, m, 0);
    const std::vector<UrgencyReport> zero(n);
    ASSERT_EQ(schedule_darts(t, zero), schedule_dham(t)) << "trial " << trial;
  }
}

TEST(Darts, MatchesExhaustiveIlp) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::int64_t> urg(0, 900), hist(0, 400);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + trial % 3;
    const std::size_t n = std::max<std::size_t>(m, 2 + trial % 5);
    const TrafficMatrix t = random_traffic(rng, n, m, 1);
    oracle::DartsInstance in;
    in.w.assign(n, std::vector<std::int64_t>(m));
    std::vector<std::int64_t> kc(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) in.w[i][j] = t.w(i, j);
      kc[i] = std::min(urg(rng), t.b[i]);
      h[i] = hist(rng);
    }
    in.k_current = kc;
    for (std::size_t i = 0; i < n; ++i) in.k.push_back(kc[i] + h[i]);
    const SchedulerDecision d = schedule_darts(t, reports(kc, h));
    expect_consistent(d, t);
    ASSERT_EQ(d.objective, oracle::darts_ilp_value(in)) << "trial " << trial;
  }
}

TEST(Darts, UrgencyLengthChecked) {
  const TrafficMatrix t =
      traffic_matrix_from_capacity(RewardMatrix(2, 1, 252), std::vector<std::int64_t>{1, 1});
  const std::vector<UrgencyReport> one(1);
  EXPECT_THROW(schedule_darts(t, one), std::invalid_argument);
}

TEST(Surplus, UrgencyDecaysWithGrants) {
  // Two users, four chunks: both are served and every grant fits its buffer.
  const TrafficMatrix t = traffic_matrix_from_capacity(
      RewardMatrix::from_rows({{756, 252, 252, 252}, {252, 756, 504, 504}}),
      std::vector<std::int64_t>{1000, 2000});
  const SchedulerDecision d = schedule_darts(t, reports({300, 200}, {0, 0}));
  expect_consistent(d, t);
  EXPECT_TRUE(d.scheduled(0));
  EXPECT_TRUE(d.scheduled(1));
  EXPECT_GE(d.rounds, 2u);
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t rc : d.ue_rcs[i]) EXPECT_TRUE(used.insert(rc).second);
}

TEST(Dafs, MetricAddsAllClasses) {
  UrgencyReport u;
  u.m_vo = 100;
  u.m_vi = 200;
  u.m_d = 380;
  u.history = 500;
  EXPECT_EQ(dafs_metric(std::vector<UrgencyReport>{u}), (std::vector<std::int64_t>{1180}));
}

TEST(Dafs, BufferPressureWinsTheChunk) {
  const TrafficMatrix t = traffic_matrix_from_capacity(
      RewardMatrix::from_rows({{504}, {504}}), std::vector<std::int64_t>{504, 504});
  std::vector<UrgencyReport> u(2);
  u[1].m_d = 300;
  u[1].k_current = 0;  // single-class view ignores the data pressure
  u[1].k = 0;
  EXPECT_EQ(schedule_darts(t, u).rc_owner[0], 0u);
  EXPECT_EQ(schedule_dafs(t, u).rc_owner[0], 1u);
}

TEST(PolicyDispatch, NamesAndModes) {
  for (Policy p : {Policy::dham, Policy::darts, Policy::dafs})
    EXPECT_EQ(policy_from_string(to_string(p)), p);
  EXPECT_THROW(policy_from_string("pf"), std::invalid_argument);
  EXPECT_EQ(urgency_mode_for(Policy::dafs), UrgencyMode::mixed);
  EXPECT_EQ(urgency_mode_for(Policy::darts), UrgencyMode::single_class);
  const TrafficMatrix t = traffic_matrix_from_capacity(
      RewardMatrix::from_rows({{504}, {252}}), std::vector<std::int64_t>{504, 252});
  const std::vector<UrgencyReport> u(2);
  EXPECT_EQ(schedule(Policy::dham, t, u), schedule_dham(t));
  EXPECT_EQ(schedule(Policy::dafs, t, u), schedule_dafs(t, u));
}

TEST(HardDeadline, MoreUrgentUsersThanChunksIsInfeasible) {
  // Three users whose head-of-line packets expire unless served now, two
  // chunks: the hard-delay constraint set has no feasible point.
  const std::vector<std::int64_t> hol = {50, 50, 50};
  EXPECT_EQ(oracle::hard_deadline_feasible_points(3, 2, hol, 50, 1), 0u);
  // Same users with a third chunk, or with one user relaxed, are feasible.
  EXPECT_GT(oracle::hard_deadline_feasible_points(3, 3, hol, 50, 1), 0u);
  EXPECT_GT(oracle::hard_deadline_feasible_points(3, 2, {50, 50, 10}, 50, 1), 0u);
  // The soft formulation always returns a schedule for the same instance.
  const TrafficMatrix t = traffic_matrix_from_capacity(RewardMatrix(3, 2, 252),
                                                       std::vector<std::int64_t>{40, 40, 40});
  const SchedulerDecision d = schedule_darts(t, reports({40, 40, 40}, {0, 0, 0}));
  EXPECT_EQ(std::count_if(d.rc_owner.begin(), d.rc_owner.end(),
                          [](std::size_t o) { return o != SchedulerDecision::kNone; }),
            2);
}
