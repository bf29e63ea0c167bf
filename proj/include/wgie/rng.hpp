#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace wgie {

/// The library's only generator. std::mt19937_64 has a fully specified output
/// sequence, so seeded streams are reproducible across toolchains.
using Rng = std::mt19937_64;

/// Uniform double in the open interval (0, 1) from the top 53 bits.
/// std::uniform_real_distribution is implementation-defined, so it is avoided.
inline double uniform_open01(Rng& rng) {
  const std::uint64_t bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a base seed and a list of indices.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

}  // namespace wgie
