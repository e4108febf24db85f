#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pairlens {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Child seed for a labeled sub-stream of a root seed. All randomness in a run
/// fans out from one root this way.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
  return splitmix64(root ^ fnv1a(label));
}

}  // namespace pairlens
