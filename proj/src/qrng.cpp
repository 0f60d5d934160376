#include "qkd/qrng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkd/errors.hpp"

namespace qkd {

PrepSpec PrepSpec::hadamard() {
  return PrepSpec{{GateSpec::single(Gate::H, 0)}, 0};
}

PrepSpec PrepSpec::identity() {
  return PrepSpec{{}, 0};
}

ProbEstimate sample_probability(const PrepSpec& prep, std::int64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shot count must be at least 1");
  if (prep.desired != 0 && prep.desired != 1) {
    throw std::invalid_argument("desired bit must be 0 or 1");
  }
  for (const auto& g : prep.gates) {
    if (g.arity() != 1 || g.target0 != 0) {
      throw std::invalid_argument("preparation gates must act on the single qubit");
    }
  }
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < shots; ++s) {
    StateVector sv(1);
    for (const auto& g : prep.gates) sv.apply(g);
    if (sv.measure(0, Basis::Computational, rng) == prep.desired) ++hits;
  }
  // Canonical complementary pair: flipping the desired bit swaps (p, q)
  // exactly, and p + q == 1.0 holds for every shot count.
  const std::int64_t misses = shots - hits;
  const double low = static_cast<double>(std::min(hits, misses)) / static_cast<double>(shots);
  const double high = 1.0 - low;
  ProbEstimate est;
  est.p = hits <= misses ? low : high;
  est.q = hits <= misses ? high : low;
  est.shots = shots;
  return est;
}

double raw_random(const ProbEstimate& est) {
  const double p = std::clamp(est.p, kProbClamp, 1.0 - kProbClamp);
  const double q = std::clamp(est.q, kProbClamp, 1.0 - kProbClamp);
  const double denom = 1.0 + std::log(q);
  if (std::abs(denom) < kSingularityGuard) {
    throw SingularityError("log-ratio denominator vanishes near q = 1/e");
  }
  return std::log(p) / (2.0 * denom);
}

double to_unit_interval(double raw) {
  if (!std::isfinite(raw)) throw std::invalid_argument("raw value must be finite");
  double integral = 0.0;
  return std::modf(std::abs(raw), &integral);
}

BitString quantize(double u, int width) {
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("u must lie in [0, 1)");
  if (width < 1 || width > kMaxQuantizeWidth) {
    throw std::invalid_argument("width out of range");
  }
  // Exact binary digit extraction; equal to floor(u * 2^width) bit for bit.
  BitString out;
  out.reserve(static_cast<std::size_t>(width));
  double v = u;
  for (int i = 0; i < width; ++i) {
    v *= 2.0;
    if (v >= 1.0) {
      out.push_back(1);
      v -= 1.0;
    } else {
      out.push_back(0);
    }
  }
  return out;
}

namespace detail {

RandomDraw draw_with_sampler(const std::function<ProbEstimate(std::int64_t)>& sample,
                             std::int64_t shots, int width) {
  for (int attempt = 0;; ++attempt) {
    const auto est = sample(shots + attempt);
    double raw = 0.0;
    try {
      raw = raw_random(est);
    } catch (const SingularityError&) {
      if (attempt == kSingularityRetries) {
        throw SingularityError("persistent singularity after " +
                               std::to_string(kSingularityRetries) + " retries");
      }
      continue;
    }
    RandomDraw draw;
    draw.estimate = est;
    draw.raw = raw;
    draw.unit = to_unit_interval(raw);
    draw.bits = quantize(draw.unit, width);
    draw.shots_used = shots + attempt;
    return draw;
  }
}

}  // namespace detail

RandomDraw draw_random(const PrepSpec& prep, std::int64_t shots, int width, Rng& rng) {
  return detail::draw_with_sampler(
      [&](std::int64_t s) { return sample_probability(prep, s, rng); }, shots, width);
}

BitString random_bits(const PrepSpec& prep, std::int64_t shots, int width, Rng& rng) {
  return draw_random(prep, shots, width, rng).bits;
}

}  // namespace qkd
