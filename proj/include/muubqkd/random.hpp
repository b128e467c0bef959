#pragma once

#include <cstdint>
#include <random>

namespace muubqkd {

// splitmix64 finalizer; used to derive independent per-round seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic uniform source. Conversion to double bypasses
// std::uniform_real_distribution so that a given seed yields the same draw
// sequence on every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for one protocol round; rounds can then be processed
  // in any order (or in parallel) without changing results.
  static RandomStream for_round(std::uint64_t seed, std::uint64_t round) {
    return RandomStream(mix_seed(seed, round));
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>(engine_() >> 63); }

  // Uniform index in [0, n). The floor conversion has O(2^-53) bias,
  // negligible for sampling purposes.
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  // Uniform angle in [0, 2*pi).
  double angle();

 private:
  std::mt19937_64 engine_;
};

}  // namespace muubqkd
