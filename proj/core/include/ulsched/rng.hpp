#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ulsched {

using Rng = std::mt19937_64;

// Substream families derived from one master seed. Each (kind, id...) path
// gets an independent generator, so adding a UE never shifts another UE's
// draws.
enum class Stream : std::uint64_t {
  deployment = 1,
  shadowing = 2,
  fading = 3,
  interference = 4,
  voice = 5,
  video = 6,
  data = 7,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, Stream kind,
                          std::initializer_list<std::uint64_t> path = {});

inline Rng make_stream(std::uint64_t master, Stream kind,
                       std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(master, kind, path));
}

// Small counter-style generator for hot paths that need a fresh, independent
// stream per (tti, ue, rc) slot; seeding is a single hash, unlike mt19937.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Uniform draw in (0, 1].
template <class Gen>
double uniform_open0(Gen& gen) {
  // 53 random mantissa bits mapped onto (0, 1].
  const std::uint64_t bits = static_cast<std::uint64_t>(gen()) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace ulsched
