#pragma once

#include <cstdint>

namespace deon {

/// splitmix64 finalizer. Used as a stateless counter-based generator: the
/// k-th draw of a stream is a pure function of (seed, k), so replaying a
/// prefix of a stream never depends on object state.
inline std::uint64_t split_mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return split_mix64(a ^ split_mix64(b));
}

/// Uniform draw in [0, n). Modulo bias is negligible for the small n used
/// here (symbol counts).
inline int bounded_draw(std::uint64_t seed, std::uint64_t counter, int n) {
  return static_cast<int>(mix64(seed, counter) % static_cast<std::uint64_t>(n));
}

}  // namespace deon
