#pragma once

#include <cstdint>
#include <random>

namespace qkd {

// SplitMix64 finalizer; used to turn user seeds into well-mixed stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream seed for (base, stream). Used for per-party seeds, per-trial
// seeds and per-row sweep seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x51ed2701a9b3c571ULL));
}

// Deterministic random source. Every random draw in the simulator flows through
// one of these; identical seeds give identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int next_bit() { return static_cast<int>(engine_() >> 63); }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qkd
