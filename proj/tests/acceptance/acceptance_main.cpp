// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "ulsched/assignment.hpp"
#include "ulsched/config.hpp"
#include "ulsched/engine.hpp"
#include "ulsched/example_replay.hpp"
#include "ulsched/schedulers.hpp"
#include "ulsched/traffic.hpp"
#include "ulsched/ue_transmitter.hpp"

using namespace ulsched;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Outcome golden_examples() {
  const auto t0 = Clock::now();
  const ExampleTrace t4 = replay_example(example_fixture(true), Policy::dham);
  const ExampleTrace t5 = replay_example(example_fixture(true), Policy::darts);
  const ExampleFixture fx = example_fixture(true);
  const auto obj = single_rc_objectives(fx);
  const auto first = replay_example(fx, Policy::darts).steps.front().scheduled;
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "dham " << t4.transmitted << "/" << t4.dropped << ", darts " << t5.transmitted << "/"
    << t5.dropped << ", objectives " << obj[0] << " " << obj[1] << " " << obj[2]
    << ", picks UE" << (first.empty() ? 0 : first[0] + 1) << ", " << secs << " s";
  const bool ok = t4.transmitted == 1010 && t4.dropped == 420 && t5.transmitted == 1192 &&
                  t5.dropped == 238 && obj == std::vector<std::int64_t>{45, -5, 102} &&
                  first == std::vector<std::size_t>{2} && secs < 1.0;
  return {ok, d.str()};
}

// Brute force by permutation enumeration, independent of the library's own.
std::int64_t permutation_max(const oracle::Matrix& m) {
  std::vector<std::size_t> perm(m.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  do {
    std::int64_t s = 0;
    for (std::size_t r = 0; r < m.size(); ++r) s += m[r][perm[r]];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Outcome assignment_optimality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240);
  std::uniform_int_distribution<std::size_t> size(2, 7);
  int bad = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = size(rng);
    const auto m = oracle::random_matrix(rng, k, k, -999, 999);
    if (solve_max_assignment(RewardMatrix::from_rows(m)).objective != permutation_max(m)) ++bad;
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << n << " matrices, " << bad << " mismatches, " << secs << " s";
  return {bad == 0 && secs < 30.0, d.str()};
}

Outcome darts_equals_ilp() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(777);
  static constexpr std::int64_t kTiers[] = {252, 504, 756};
  std::uniform_int_distribution<std::size_t> users(2, 6), chunks(1, 3);
  std::uniform_int_distribution<int> tier(0, 2);
  std::uniform_int_distribution<std::int64_t> buf(1, 1600), urg(0, 900), hist(0, 400);
  int bad = 0, done = 0;
  while (done < 1000) {
    const std::size_t n = users(rng), m = chunks(rng);
    // Fewer backlogged UEs than chunks switches to multi-round surplus
    // scheduling, which is outside the single-shot program.
    if (n < m) continue;
    RewardMatrix p(n, m);
    std::vector<std::int64_t> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) p(i, j) = kTiers[tier(rng)];
      b[i] = buf(rng);
    }
    const TrafficMatrix t = traffic_matrix_from_capacity(p, b);
    std::vector<UrgencyReport> u(n);
    oracle::DartsInstance in;
    in.w.assign(n, std::vector<std::int64_t>(m));
    for (std::size_t i = 0; i < n; ++i) {
      u[i].k_current = std::min(urg(rng), b[i]);
      u[i].history = hist(rng);
      u[i].k = u[i].k_current + u[i].history;
      in.k_current.push_back(u[i].k_current);
      in.k.push_back(u[i].k);
      for (std::size_t j = 0; j < m; ++j) in.w[i][j] = t.w(i, j);
    }
    if (schedule_darts(t, u).objective != oracle::darts_ilp_value(in)) ++bad;
    ++done;
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << done << " instances, " << bad << " mismatches, " << secs << " s";
  return {bad == 0 && secs < 30.0, d.str()};
}

Outcome knapsack_optimality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> count(1, 12);
  std::uniform_real_distribution<double> reward(0.0, 3.0);
  std::uniform_int_distribution<std::int64_t> size(1, 1500), cap(0, 10000);
  int bad = 0;
  double worst = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    std::vector<KnapsackItem> items(count(rng));
    std::vector<double> r;
    std::vector<std::int64_t> s;
    for (std::size_t k = 0; k < items.size(); ++k) {
      items[k] = {static_cast<TrafficClass>(k % 3), k, reward(rng), size(rng),
                  static_cast<std::int64_t>(k)};
      r.push_back(items[k].reward);
      s.push_back(items[k].size);
    }
    const std::int64_t c = cap(rng);
    const double got = knapsack_value(items, fractional_knapsack(items, c));
    const double lp = oracle::fractional_knapsack_lp(r, s, c);
    const double rel = std::abs(got - lp) / std::max(1.0, std::abs(lp));
    worst = std::max(worst, rel);
    if (rel > 1e-9) ++bad;
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << n << " instances, " << bad << " outside 1e-9, max rel err " << worst << ", " << secs
    << " s";
  return {bad == 0 && secs < 10.0, d.str()};
}

Outcome pareto_means() {
  const auto t0 = Clock::now();
  Rng rng(5);
  auto sample_mean = [&](double k, double a, double max) {
    double s = 0.0;
    for (int i = 0; i < 1000000; ++i) s += truncated_pareto_sample(k, a, max, rng);
    return s / 1e6;
  };
  const double size = sample_mean(40.0, 1.2, 250.0);
  const double gap = sample_mean(2.5, 1.2, 12.5);
  const double secs = seconds_since(t0);
  const bool size_ok = std::abs(size - 50.0) <= 2.0;
  const bool gap_ok = std::abs(gap - 6.0) <= 0.3;
  std::ostringstream d;
  d << "packet size mean " << size << " (target 50 +- 2, closed form "
    << truncated_pareto_mean(40.0, 1.2, 250.0) << ") " << (size_ok ? "ok" : "off")
    << "; gap mean " << gap << " ms (target 6 +- 0.3, closed form "
    << truncated_pareto_mean(2.5, 1.2, 12.5) << ") " << (gap_ok ? "ok" : "off") << ", " << secs
    << " s";
  return {size_ok && gap_ok && secs < 10.0, d.str()};
}

// The high-load operating point shared by the trend and conservation checks.
constexpr int kSeeds = 10;
const char* const kTrendPolicies[] = {"dham", "darts", "dafs", "dafs-pf"};

ScenarioConfig trend_point(const char* policy, std::uint64_t seed) {
  ScenarioConfig c;
  const PolicyPair p = policy_pair_from_string(policy);
  c.name = "trend";
  c.policy = p.policy;
  c.ue_policy = p.ue_policy;
  c.seed = seed;
  c.ue_count = 30;
  c.tti_count = 10000;
  c.load = {26.0, 1.0, 1.0};
  return c;
}

struct TrendRuns {
  // [policy][seed]
  std::vector<std::vector<MetricsSummary>> by_policy;
  double seconds = 0.0;
};

TrendRuns run_trend_point() {
  const auto t0 = Clock::now();
  std::vector<ScenarioConfig> cfgs;
  for (const char* p : kTrendPolicies)
    for (int s = 0; s < kSeeds; ++s) cfgs.push_back(trend_point(p, 1 + s));
  const std::vector<MetricsSummary> flat = run_all(cfgs, jobs());
  TrendRuns r;
  for (std::size_t p = 0; p < std::size(kTrendPolicies); ++p) {
    r.by_policy.emplace_back(flat.begin() + p * kSeeds, flat.begin() + (p + 1) * kSeeds);
  }
  r.seconds = seconds_since(t0);
  return r;
}

struct Ordering {
  std::string name;
  bool pass;
  std::string detail;
};

// Paired-by-seed comparison: mean(x) vs mean(y) plus the count of seeds where
// the pair agrees with the ordering.
Ordering paired(const std::string& name, const std::vector<MetricsSummary>& x,
                const std::vector<MetricsSummary>& y,
                const std::function<double(const MetricsSummary&)>& f, bool strict) {
  double mx = 0.0, my = 0.0;
  int agree = 0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    const double a = f(x[s]), b = f(y[s]);
    mx += a;
    my += b;
    agree += strict ? (a > b) : (a >= b);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  const bool mean_ok = strict ? mx > my : mx >= my;
  const bool ok = mean_ok && agree >= 8;
  std::ostringstream d;
  d << name << ": " << mx << " vs " << my << ", " << agree << "/" << x.size() << " seeds";
  return {name, ok, d.str()};
}

Outcome trend_properties(const TrendRuns& tr, std::vector<std::string>& lines) {
  const auto& dham = tr.by_policy[0];
  const auto& darts = tr.by_policy[1];
  const auto& dafs = tr.by_policy[2];
  const auto& pf = tr.by_policy[3];
  auto jain = [](const MetricsSummary& s) { return s.jain; };
  auto tput = [](const MetricsSummary& s) { return s.throughput_mbps; };
  auto wvoice = [](const MetricsSummary& s) {
    return static_cast<double>(s.worst_user_delivered(TrafficClass::voice));
  };
  auto wvideo = [](const MetricsSummary& s) {
    return static_cast<double>(s.worst_user_delivered(TrafficClass::video));
  };

  std::vector<Ordering> o;
  o.push_back(paired("a Jain darts > dham", darts, dham, jain, true));
  o.push_back(paired("b throughput dham >= dafs", dham, dafs, tput, false));
  o.push_back(paired("c worst-user voice darts > dham", darts, dham, wvoice, true));
  const Ordering d1 = paired("d worst-user video dafs-pf > dafs", pf, dafs, wvideo, true);
  const Ordering d2 = paired("d worst-user video dafs > dham", dafs, dham, wvideo, true);
  o.push_back({"d", d1.pass && d2.pass, d1.detail + "; " + d2.detail});
  o.push_back(paired("e worst-user voice dafs >= dafs-pf", dafs, pf, wvoice, false));

  std::int64_t voice_max = 0, video_max = 0;
  for (const auto& runs : tr.by_policy) {
    for (const MetricsSummary& s : runs) {
      voice_max = std::max(voice_max, s.delays[index_of(TrafficClass::voice)].max());
      video_max = std::max(video_max, s.delays[index_of(TrafficClass::video)].max());
    }
  }
  std::ostringstream f;
  f << "f max delay voice " << voice_max << " ms, video " << video_max << " ms";
  o.push_back({"f", voice_max <= 50 && video_max <= 150, f.str()});

  bool all = true;
  std::string failed;
  for (const Ordering& x : o) {
    lines.push_back(std::string(x.pass ? "  ok   " : "  FAIL ") + x.detail);
    all = all && x.pass;
    if (!x.pass) failed += (failed.empty() ? "" : ",") + x.name.substr(0, 1);
  }
  std::ostringstream d;
  d << "30 UEs, 8 RCs, 10000 TTIs, " << kSeeds << " seeds, load 26/1/1 Mbps, "
    << tr.seconds << " s";
  if (!failed.empty()) d << "; failing: " << failed;
  return {all, d.str()};
}

Outcome conservation(const TrendRuns& tr) {
  // The trend runs plus a few smaller runs covering PPP deployment, trace
  // replay and every scheduler/drain combination.
  std::vector<ScenarioConfig> extra;
  for (const char* p : {"dham", "darts", "dafs", "dafs-pf", "dham+flip", "darts+flip"}) {
    ScenarioConfig c = trend_point(p, 42);
    c.tti_count = 3000;
    c.deployment = DeploymentMode::ppp;
    c.load = {8.0, 4.0, 4.0};
    extra.push_back(c);
  }
  const std::vector<MetricsSummary> more = run_all(extra, jobs());
  std::size_t runs = 0, ues = 0, broken = 0;
  auto check = [&](const MetricsSummary& s) {
    ++runs;
    for (const UeCounters& u : s.per_ue) {
      ++ues;
      if (!u.conserved()) ++broken;
    }
  };
  for (const auto& by_seed : tr.by_policy)
    for (const MetricsSummary& s : by_seed) check(s);
  for (const MetricsSummary& s : more) check(s);
  std::ostringstream d;
  d << runs << " runs, " << ues << " UE ledgers, " << broken << " unbalanced";
  return {broken == 0, d.str()};
}

Outcome performance() {
  std::mt19937_64 rng(8);
  static constexpr std::int64_t kTiers[] = {252, 504, 756};
  std::uniform_int_distribution<int> tier(0, 2);
  std::uniform_int_distribution<std::int64_t> buf(1, 20000), urg(0, 2000);
  double worst_ms = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    RewardMatrix p(60, 8);
    std::vector<std::int64_t> b(60);
    std::vector<UrgencyReport> u(60);
    for (std::size_t i = 0; i < 60; ++i) {
      for (std::size_t j = 0; j < 8; ++j) p(i, j) = kTiers[tier(rng)];
      b[i] = buf(rng);
      u[i].m_vo = u[i].k_current = std::min(urg(rng), b[i]);
      u[i].history = urg(rng);
      u[i].k = u[i].k_current + u[i].history;
    }
    const TrafficMatrix t = traffic_matrix_from_capacity(p, b);
    const Policy pol = rep % 3 == 0 ? Policy::dham : rep % 3 == 1 ? Policy::darts : Policy::dafs;
    const auto t0 = Clock::now();
    const SchedulerDecision d = schedule(pol, t, u);
    worst_ms = std::max(worst_ms, seconds_since(t0) * 1e3);
    if (d.rc_owner.size() != 8) return {false, "bad decision shape"};
  }
  const auto t0 = Clock::now();
  const MetricsSummary s = run(trend_point("dafs-pf", 3));
  const double run_s = seconds_since(t0);
  std::ostringstream d;
  d << "slowest 60x8 decision " << worst_ms << " ms; 10000-TTI run at 30 UEs " << run_s
    << " s";
  return {worst_ms < 10.0 && run_s < 60.0 && s.ttis == 10000, d.str()};
}

Outcome hard_deadline_infeasible() {
  // Three UEs whose head-of-line voice packet reaches 50 ms this TTI, two
  // chunks: under the hard delay constraint no allocation is admissible.
  const std::vector<std::int64_t> hol = {50, 50, 50};
  const std::size_t tight = oracle::hard_deadline_feasible_points(3, 2, hol, 50, 1);
  const std::size_t enough = oracle::hard_deadline_feasible_points(3, 3, hol, 50, 1);
  std::ostringstream d;
  d << "N_D=3, M=2: " << tight << " feasible points; N_D=3, M=3: " << enough;
  return {tight == 0 && enough > 0, d.str()};
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](const char* id, const Outcome& o) {
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  };

  report("AC1", golden_examples());
  report("AC2", assignment_optimality());
  report("AC3", darts_equals_ilp());
  report("AC4", knapsack_optimality());
  report("AC5", pareto_means());

  const TrendRuns tr = run_trend_point();
  report("AC6", conservation(tr));
  std::vector<std::string> lines;
  const Outcome trend = trend_properties(tr, lines);
  report("AC7", trend);
  for (const std::string& l : lines) std::printf("%s\n", l.c_str());

  report("AC8", performance());
  report("AC9", hard_deadline_infeasible());
  return all ? 0 : 1;
}
