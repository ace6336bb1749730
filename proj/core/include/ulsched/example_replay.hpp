#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ulsched/channel.hpp"
#include "ulsched/schedulers.hpp"
#include "ulsched/traffic.hpp"

namespace ulsched {

// Three UEs sharing one RC over five TTIs with fixed CQIs (7, 12, 6) and
// 50 bytes arriving per UE per TTI. Criticality is scripted rather than
// derived from packet deadlines: the first TTI uses `initial_critical`, and
// afterwards a UE's critical bytes are min(critical_cap, bytes it carried
// over from the previous TTI).
struct ExampleFixture {
  std::vector<CqiGrid> cqi;
  std::vector<TraceArrival> arrivals;
  std::vector<std::int64_t> initial_buffer;
  std::vector<std::int64_t> initial_critical;
  std::int64_t critical_cap = 0;
  bool deadlines = true;
};

ExampleFixture example_fixture(bool deadlines);

struct ExampleStep {
  std::vector<std::int64_t> buffer;    // at the start of the TTI
  std::vector<std::int64_t> critical;  // dropped unless sent this TTI
  std::vector<std::size_t> scheduled;
  std::int64_t transmitted = 0;
  std::int64_t dropped = 0;
};

struct ExampleTrace {
  std::vector<ExampleStep> steps;
  std::int64_t transmitted = 0;
  std::int64_t dropped = 0;
};

// Replays the fixture through the given scheduler. A scheduled UE sends its
// grant and loses whatever critical bytes the grant did not cover; an
// unscheduled UE loses all of them.
ExampleTrace replay_example(const ExampleFixture& fx, Policy policy);

// First-TTI objective of scheduling each UE alone: its bytes sent minus the
// critical bytes of every other UE.
std::vector<std::int64_t> single_rc_objectives(const ExampleFixture& fx);

struct ExampleOutcome {
  std::string name;
  bool matches = false;
  std::string report;  // printable trace plus the golden comparison
};

const std::vector<std::string>& example_names();

// Runs a named example (table3, table4, table5, sec2-objective) and checks it
// against its expected totals. Throws std::invalid_argument for unknown names.
ExampleOutcome run_example(std::string_view name);

}  // namespace ulsched
