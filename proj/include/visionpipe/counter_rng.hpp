#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace visionpipe {

// Stateless generator: every draw is a pure function of (key, counter), so
// the value at a pixel never depends on evaluation order or thread count.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_key(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

// Uniform in (0, 1), 53-bit resolution.
inline double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream = 0) {
  return unit_open(mix_key(seed ^ (stream * 0xd1b54a32d192ed03ULL), counter));
}

/// Standard normal draw via Box-Muller on two keyed uniforms.
inline double counter_normal(std::uint64_t seed, std::uint64_t counter) {
  const double u1 = unit_open(mix_key(seed, 2 * counter));
  const double u2 = unit_open(mix_key(seed, 2 * counter + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// FNV-1a, used to derive per-file seeds from names.
inline constexpr std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace visionpipe
