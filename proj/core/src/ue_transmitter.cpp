#include "ulsched/ue_transmitter.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ulsched {

std::vector<KnapsackItem> compute_rewards(const UeBuffer& buf,
                                          std::int64_t tti) {
  const BufferConfig& cfg = buf.config();
  const std::int64_t occupancy = buf.occupancy();
  const double data_reward =
      occupancy > cfg.threshold_bytes
          ? static_cast<double>(occupancy - cfg.threshold_bytes) /
                static_cast<double>(cfg.capacity_bytes - cfg.threshold_bytes)
          : 0.0;

  std::vector<KnapsackItem> items;
  for (TrafficClass c : kAllClasses) {
    const auto& q = buf.queue(c);
    for (std::size_t i = 0; i < q.size(); ++i) {
      KnapsackItem it;
      it.cls = c;
      it.queue_index = i;
      it.size = q[i].remaining;
      it.arrival_tti = q[i].arrival_tti;
      if (c == TrafficClass::data) {
        it.reward = data_reward;
      } else {
        it.reward = static_cast<double>(q[i].delay_ms(tti)) /
                    static_cast<double>(buf.deadline_ms(c));
      }
      items.push_back(it);
    }
  }
  return items;
}

std::vector<KnapsackPick> fractional_knapsack(std::span<const KnapsackItem> items,
                                              std::int64_t capacity) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const KnapsackItem& x = items[a];
    const KnapsackItem& y = items[b];
    // r_x / s_x > r_y / s_y without dividing.
    const double lhs = x.reward * static_cast<double>(y.size);
    const double rhs = y.reward * static_cast<double>(x.size);
    if (lhs != rhs) return lhs > rhs;
    if (x.reward != y.reward) return x.reward > y.reward;
    if (x.arrival_tti != y.arrival_tti) return x.arrival_tti < y.arrival_tti;
    return index_of(x.cls) < index_of(y.cls);
  });

  std::vector<KnapsackPick> picks;
  std::int64_t left = std::max<std::int64_t>(0, capacity);
  for (std::size_t idx : order) {
    if (left == 0) break;
    const std::int64_t take = std::min(left, items[idx].size);
    if (take <= 0) continue;
    picks.push_back({idx, take});
    left -= take;
  }
  return picks;
}

double knapsack_value(std::span<const KnapsackItem> items,
                      std::span<const KnapsackPick> picks) {
  double total = 0.0;
  for (const KnapsackPick& p : picks) {
    const KnapsackItem& it = items[p.item];
    total += it.reward * static_cast<double>(p.bytes) /
             static_cast<double>(it.size);
  }
  return total;
}

namespace {

void send(UeBuffer& buf, TrafficClass c, std::size_t index, std::int64_t bytes,
          std::int64_t tti, DrainResult& out) {
  Packet done;
  const std::int64_t sent = buf.transmit(c, index, bytes, &done);
  out.bytes[index_of(c)] += sent;
  if (done.remaining == 0 && done.size > 0) {
    out.delivered.push_back({c, done.size, done.delay_ms(tti)});
  }
}

}  // namespace

DrainResult knapsack_flip_drain(UeBuffer& buf, std::int64_t tti,
                                std::int64_t grant) {
  DrainResult out;
  if (grant <= 0 || buf.empty()) return out;
  const std::vector<KnapsackItem> items = compute_rewards(buf, tti);
  std::vector<KnapsackPick> picks = fractional_knapsack(items, grant);

  // Apply from the back of each queue so erasing a packet never shifts the
  // index of one still to be sent.
  std::sort(picks.begin(), picks.end(),
            [&](const KnapsackPick& a, const KnapsackPick& b) {
              const KnapsackItem& x = items[a.item];
              const KnapsackItem& y = items[b.item];
              if (x.cls != y.cls) return index_of(x.cls) < index_of(y.cls);
              return x.queue_index > y.queue_index;
            });
  for (const KnapsackPick& p : picks) {
    send(buf, items[p.item].cls, items[p.item].queue_index, p.bytes, tti, out);
  }
  return out;
}

DrainResult strict_priority_drain(UeBuffer& buf, std::int64_t tti,
                                  std::int64_t grant) {
  DrainResult out;
  std::int64_t left = std::max<std::int64_t>(0, grant);
  for (TrafficClass c : kAllClasses) {
    while (left > 0 && !buf.queue(c).empty()) {
      const std::int64_t chunk = std::min(left, buf.queue(c).front().remaining);
      send(buf, c, 0, chunk, tti, out);
      left -= chunk;
    }
  }
  return out;
}

std::string_view to_string(UePolicy p) {
  return p == UePolicy::flip ? "flip" : "strict";
}

UePolicy ue_policy_from_string(std::string_view name) {
  if (name == "strict") return UePolicy::strict;
  if (name == "flip") return UePolicy::flip;
  throw std::invalid_argument("unknown ue_policy '" + std::string(name) +
                              "' (expected strict | flip)");
}

DrainResult drain(UePolicy policy, UeBuffer& buf, std::int64_t tti,
                  std::int64_t grant) {
  return policy == UePolicy::flip ? knapsack_flip_drain(buf, tti, grant)
                                  : strict_priority_drain(buf, tti, grant);
}

}  // namespace ulsched
