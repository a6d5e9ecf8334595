#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace encdec {

/// Independent random streams used by one realization.
enum class StreamTag : std::uint64_t { gates = 1, disorder = 2, trajectory = 3, initial_state = 4 };

using RngStream = std::mt19937_64;

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter hash of (master seed, realization index, stage tag, sub-index).
/// Streams for distinct arguments are statistically independent, and the value
/// depends only on the arguments, never on execution order.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t realization, StreamTag tag,
                                           std::uint64_t sub = 0) {
  std::uint64_t h = detail::splitmix64(master);
  h = detail::splitmix64(h ^ realization);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(tag));
  h = detail::splitmix64(h ^ sub);
  return h;
}

inline RngStream make_stream(std::uint64_t master, std::uint64_t realization, StreamTag tag,
                             std::uint64_t sub = 0) {
  return RngStream(derive_seed(master, realization, tag, sub));
}

}  // namespace encdec
