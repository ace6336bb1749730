#include "ulsched/example_replay.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ulsched {

namespace {

constexpr char kCqiTrace[] =
    "# ue1 ue2 ue3, one RC\n"
    "7 12 6\n"
    "7 12 6\n"
    "7 12 6\n"
    "7 12 6\n"
    "7 12 6\n";

constexpr char kArrivalTrace[] =
    "# tti ue class bytes\n"
    "1 0 voice 50\n1 1 voice 50\n1 2 voice 50\n"
    "2 0 voice 50\n2 1 voice 50\n2 2 voice 50\n"
    "3 0 voice 50\n3 1 voice 50\n3 2 voice 50\n"
    "4 0 voice 50\n4 1 voice 50\n4 2 voice 50\n";

std::vector<std::int64_t> arrivals_at(const ExampleFixture& fx, std::int64_t tti) {
  std::vector<std::int64_t> out(fx.initial_buffer.size(), 0);
  for (const TraceArrival& a : fx.arrivals) {
    if (a.tti == tti) out.at(a.ue) += a.size;
  }
  return out;
}

}  // namespace

ExampleFixture example_fixture(bool deadlines) {
  ExampleFixture fx;
  std::istringstream cqi(kCqiTrace);
  fx.cqi = read_cqi_trace(cqi, 3, 1);
  std::istringstream arr(kArrivalTrace);
  fx.arrivals = read_arrival_trace(arr);
  fx.initial_buffer = {400, 300, 260};
  fx.deadlines = deadlines;
  if (deadlines) {
    fx.initial_critical = {50, 100, 255};
    fx.critical_cap = 20;
  } else {
    fx.initial_critical = {0, 0, 0};
    fx.critical_cap = 0;
  }
  return fx;
}

ExampleTrace replay_example(const ExampleFixture& fx, Policy policy) {
  const std::size_t n = fx.initial_buffer.size();
  std::vector<std::int64_t> b = fx.initial_buffer;
  std::vector<std::int64_t> crit = fx.initial_critical;
  ExampleTrace trace;

  for (std::size_t t = 0; t < fx.cqi.size(); ++t) {
    ExampleStep step;
    step.buffer = b;
    step.critical = crit;

    std::vector<UrgencyReport> urgency(n);
    for (std::size_t i = 0; i < n; ++i) {
      urgency[i].b = b[i];
      urgency[i].m_vo = crit[i];
      urgency[i].k_current = crit[i];
      urgency[i].k = crit[i];
    }
    const TrafficMatrix w = build_traffic_matrix(fx.cqi[t], b);
    const SchedulerDecision d = schedule(policy, w, urgency);

    const auto incoming = arrivals_at(fx, static_cast<std::int64_t>(t) + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t sent = d.grant[i];
      const std::int64_t lost = std::max<std::int64_t>(0, crit[i] - sent);
      if (d.scheduled(i)) step.scheduled.push_back(i);
      step.transmitted += sent;
      step.dropped += lost;
      const std::int64_t carried = b[i] - sent - lost;
      crit[i] = std::min(fx.critical_cap, carried);
      b[i] = carried + incoming[i];
    }
    trace.transmitted += step.transmitted;
    trace.dropped += step.dropped;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::vector<std::int64_t> single_rc_objectives(const ExampleFixture& fx) {
  const TrafficMatrix w = build_traffic_matrix(fx.cqi.at(0), fx.initial_buffer);
  std::int64_t all_critical = 0;
  for (std::int64_t c : fx.initial_critical) all_critical += c;
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < w.ue_count(); ++i) {
    out.push_back(w.w(i, 0) - (all_critical - fx.initial_critical[i]));
  }
  return out;
}

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = {"table3", "table4", "table5",
                                                 "sec2-objective"};
  return names;
}

namespace {

void print_trace(std::ostream& out, const ExampleTrace& tr, bool show_critical) {
  const std::size_t n = tr.steps.empty() ? 0 : tr.steps.front().buffer.size();
  out << std::left << std::setw(20) << "UE";
  for (std::size_t t = 0; t < tr.steps.size(); ++t) {
    out << std::setw(10) << ("TTI(" + std::to_string(t + 1) + ")");
  }
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out << std::setw(20) << (i + 1);
    for (const ExampleStep& s : tr.steps) {
      std::string cell = std::to_string(s.buffer[i]);
      if (show_critical) cell += "/" + std::to_string(s.critical[i]);
      if (std::find(s.scheduled.begin(), s.scheduled.end(), i) != s.scheduled.end()) {
        cell += "*";
      }
      out << std::setw(10) << cell;
    }
    out << '\n';
  }
  out << std::setw(20) << "Total Transmitted";
  for (const ExampleStep& s : tr.steps) out << std::setw(10) << s.transmitted;
  out << tr.transmitted << '\n';
  if (show_critical) {
    out << std::setw(20) << "Total Drop";
    for (const ExampleStep& s : tr.steps) out << std::setw(10) << s.dropped;
    out << tr.dropped << '\n';
  }
  out << "(* = scheduled)\n";
}

ExampleOutcome totals_example(std::string name, Policy policy,
                              std::int64_t want_tx, std::int64_t want_drop) {
  const ExampleTrace tr = replay_example(example_fixture(true), policy);
  std::ostringstream out;
  print_trace(out, tr, true);
  ExampleOutcome o;
  o.name = std::move(name);
  o.matches = tr.transmitted == want_tx && tr.dropped == want_drop;
  out << "Transmitted " << tr.transmitted << " / Dropped " << tr.dropped
      << "  (expected " << want_tx << " / " << want_drop << ") "
      << (o.matches ? "OK" : "MISMATCH") << '\n';
  o.report = out.str();
  return o;
}

ExampleOutcome buffer_only_example() {
  const ExampleTrace tr = replay_example(example_fixture(false), Policy::dham);
  const std::vector<std::size_t> want_ue = {0, 1, 2, 2, 0};
  const std::vector<std::int64_t> want_tx = {400, 350, 252, 158, 200};
  std::ostringstream out;
  print_trace(out, tr, false);

  bool ok = tr.steps.size() == want_ue.size();
  for (std::size_t t = 0; ok && t < want_ue.size(); ++t) {
    ok = tr.steps[t].scheduled == std::vector<std::size_t>{want_ue[t]} &&
         tr.steps[t].transmitted == want_tx[t];
  }
  ExampleOutcome o;
  o.name = "table3";
  o.matches = ok;
  out << "Schedule";
  for (const ExampleStep& s : tr.steps) {
    out << " UE" << (s.scheduled.empty() ? 0 : s.scheduled.front() + 1);
  }
  out << "  (expected UE1 UE2 UE3 UE3 UE1) " << (ok ? "OK" : "MISMATCH") << '\n';
  o.report = out.str();
  return o;
}

ExampleOutcome objective_example() {
  const ExampleFixture fx = example_fixture(true);
  const std::vector<std::int64_t> obj = single_rc_objectives(fx);
  const std::vector<std::int64_t> want = {45, -5, 102};

  const ExampleTrace tr = replay_example(fx, Policy::darts);
  const auto& first = tr.steps.front().scheduled;
  const auto best = static_cast<std::size_t>(
      std::max_element(obj.begin(), obj.end()) - obj.begin());

  std::ostringstream out;
  for (std::size_t i = 0; i < obj.size(); ++i) {
    out << "UE" << (i + 1) << " objective " << obj[i] << '\n';
  }
  out << "Best UE" << (best + 1) << "; drop-aware scheduler picks UE"
      << (first.empty() ? 0 : first.front() + 1) << '\n';

  ExampleOutcome o;
  o.name = "sec2-objective";
  o.matches = obj == want && best == 2 && first == std::vector<std::size_t>{2};
  out << "(expected 45, -5, 102 and UE3) " << (o.matches ? "OK" : "MISMATCH") << '\n';
  o.report = out.str();
  return o;
}

}  // namespace

ExampleOutcome run_example(std::string_view name) {
  if (name == "table3") return buffer_only_example();
  if (name == "table4") return totals_example("table4", Policy::dham, 1010, 420);
  if (name == "table5") return totals_example("table5", Policy::darts, 1192, 238);
  if (name == "sec2-objective") return objective_example();
  throw std::invalid_argument("unknown example '" + std::string(name) +
                              "' (expected table3 | table4 | table5 | sec2-objective)");
}

}  // namespace ulsched
