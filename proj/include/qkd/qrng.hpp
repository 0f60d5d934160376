#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qkd/bitstring.hpp"
#include "qkd/rng.hpp"
#include "qkd/state_vector.hpp"

namespace qkd {

// Preparation circuit for the quantum random-number source: single-qubit gates
// applied to a fresh one-qubit register, plus the outcome bit whose measured
// frequency defines p.
struct PrepSpec {
  std::vector<GateSpec> gates;
  int desired = 0;

  // Single H gate, desired bit 0. The default source for all protocol values.
  static PrepSpec hadamard();
  // Bare |0>, desired bit 0. Degenerate source; p pins to 1.
  static PrepSpec identity();

  friend bool operator==(const PrepSpec&, const PrepSpec&) = default;
};

// Shot-frequency estimate of the desired-state probability. q is the
// complement of p; the pair is constructed so that p + q == 1.0 exactly and
// flipping the desired bit swaps (p, q) exactly.
struct ProbEstimate {
  double p = 0.0;
  double q = 1.0;
  std::int64_t shots = 0;
};

inline constexpr double kProbClamp = 1e-9;
inline constexpr double kSingularityGuard = 1e-6;
inline constexpr int kSingularityRetries = 8;
inline constexpr int kMaxQuantizeWidth = 65536;

// Prepares and measures `shots` fresh one-qubit registers and returns the
// desired-outcome frequency.
ProbEstimate sample_probability(const PrepSpec& prep, std::int64_t shots, Rng& rng);

// ln(p) / (2 * (1 + ln(q))) with p, q clamped to [1e-9, 1 - 1e-9]. Throws
// SingularityError when |1 + ln(q)| < kSingularityGuard. Pure.
double raw_random(const ProbEstimate& est);

// Fractional part of |raw|: the deterministic map into [0, 1). Pure.
double to_unit_interval(double raw);

// floor(u * 2^width) as a width-bit big-endian BitString, computed by exact
// binary digit extraction. Bits beyond the double's 53-bit fraction are zero.
BitString quantize(double u, int width);

// Full pipeline: quantize(to_unit_interval(raw_random(sample_probability(...))),
// width). On a singularity, retries with shots+1, ..., shots+8, then fails.
BitString random_bits(const PrepSpec& prep, std::int64_t shots, int width, Rng& rng);

// random_bits plus the intermediate values, for sweeps and reports.
struct RandomDraw {
  ProbEstimate estimate;
  double raw = 0.0;
  double unit = 0.0;
  BitString bits;
  std::int64_t shots_used = 0;
};
RandomDraw draw_random(const PrepSpec& prep, std::int64_t shots, int width, Rng& rng);

namespace detail {
// Retry core behind draw_random, parameterized over the sampler so tests can
// force singular estimates (a fair-coin source never produces one).
RandomDraw draw_with_sampler(const std::function<ProbEstimate(std::int64_t)>& sample,
                             std::int64_t shots, int width);
}  // namespace detail

}  // namespace qkd
