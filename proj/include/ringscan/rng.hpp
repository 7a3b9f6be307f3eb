#pragma once

#include <cstdint>
#include <random>

namespace ringscan {

/// splitmix64 finalizer. Used to turn loosely structured integers into
/// well-mixed engine seeds; stable across platforms and builds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for an independent substream (dwell index, Monte-Carlo iteration, ...).
/// Derivation is pure, so substreams can be evaluated in any order and still
/// reproduce the serial result bit for bit.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream * 0xD1B54A32D192ED03ull + 0x9E3779B97F4A7C15ull));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Engine for substream `stream` of `master` (see derive_seed).
inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(master, stream));
}

}  // namespace ringscan
