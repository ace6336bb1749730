#include "ulsched/rng.hpp"

namespace ulsched {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream kind,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master ^ 0x5bd1e995ULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  for (std::uint64_t p : path) h = splitmix64(h + p * 0x9e3779b97f4a7c15ULL);
  return h;
}

}  // namespace ulsched
