#pragma once

#include <cstdint>
#include <random>

namespace moeq {

// splitmix64 finalizer, used to spread seed bits and derive stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent sub-stream seed for (run seed, stream id).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(seed ^ mix_seed(stream));
}

// All randomness in a run flows through this wrapper. mt19937_64 output is
// pinned by the standard and the [0,1) mapping below is fixed, so a given
// (seed, call sequence) reproduces bit-identical values everywhere.
// std::uniform_*_distribution is implementation-defined and deliberately
// not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int uniform_int(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace moeq
