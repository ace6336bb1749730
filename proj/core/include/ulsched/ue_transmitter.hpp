#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ulsched/traffic.hpp"

namespace ulsched {

// A buffered packet seen as a knapsack item; its weight is the bytes still
// waiting to be sent.
struct KnapsackItem {
  TrafficClass cls = TrafficClass::data;
  std::size_t queue_index = 0;
  double reward = 0.0;
  std::int64_t size = 0;
  std::int64_t arrival_tti = 0;
};

// Rewards grow with urgency: delay / deadline for voice and video; for data,
// (B_c - B_Th) / (B - B_Th) once occupancy passes the threshold, else 0.
std::vector<KnapsackItem> compute_rewards(const UeBuffer& buf, std::int64_t tti);

struct KnapsackPick {
  std::size_t item = 0;
  std::int64_t bytes = 0;
};

// Greedy fractional knapsack: items in descending reward density
// (ties: higher reward, older arrival, voice > video > data); only the last
// pick may be partial. Picks come back in transmission order and always sum
// to min(capacity, total size).
std::vector<KnapsackPick> fractional_knapsack(std::span<const KnapsackItem> items,
                                              std::int64_t capacity);

// Total reward with pro-rata credit for partially sent items.
double knapsack_value(std::span<const KnapsackItem> items,
                      std::span<const KnapsackPick> picks);

struct Delivery {
  TrafficClass cls = TrafficClass::data;
  std::int64_t size = 0;
  std::int64_t delay_ms = 0;  // measured at the TTI of the last byte
};

struct DrainResult {
  PerClass<std::int64_t> bytes{};
  std::vector<Delivery> delivered;

  std::int64_t total_bytes() const { return bytes[0] + bytes[1] + bytes[2]; }
};

// Priority flipping: transmits the knapsack selection for grant G.
DrainResult knapsack_flip_drain(UeBuffer& buf, std::int64_t tti,
                                std::int64_t grant);

// Voice FIFO first, then video, then data; the last packet may be cut.
DrainResult strict_priority_drain(UeBuffer& buf, std::int64_t tti,
                                  std::int64_t grant);

enum class UePolicy { strict, flip };

std::string_view to_string(UePolicy p);
UePolicy ue_policy_from_string(std::string_view name);

DrainResult drain(UePolicy policy, UeBuffer& buf, std::int64_t tti,
                  std::int64_t grant);

}  // namespace ulsched
