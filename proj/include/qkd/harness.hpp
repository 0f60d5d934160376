#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "qkd/qrng.hpp"
#include "qkd/session.hpp"

namespace qkd {

// Exit codes shared by all commands.
inline constexpr int kExitAgreed = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDetectedAbort = 2;

struct SweepOptions {
  std::int64_t n_min = 1;
  std::int64_t n_max = 100;
  PrepSpec prep = PrepSpec::hadamard();
  int width = 32;
  std::uint64_t seed = 42;
};

// One row per shot count n in [n_min, n_max]; header "n,raw,unit,hex_bits".
// Each row uses a fresh generator seeded with derive_seed(seed, n), so the
// output is byte-stable and independent of the requested range.
void write_rng_sweep_csv(std::ostream& out, const SweepOptions& opt);

struct StudyOptions {
  int trials = 100;
  SessionConfig base;
  std::uint64_t seed = 42;
  int threads = 1;
};

struct StudyStats {
  double mean_c_mismatch_rate = 0.0;
  double abort_frequency = 0.0;
  double agreement_frequency = 0.0;
};

// One session per trial with per-trial derived seeds; header
// "trial,c_mismatch_rate,aborted,agreed" plus a final aggregate comment row.
// Trials may run on several threads; rows are merged in trial order, so the
// output does not depend on the thread count.
StudyStats write_eve_study_csv(std::ostream& out, const StudyOptions& opt);

// Entry point behind the qkdsim binary; exposed for in-process testing.
int cli_main(int argc, const char* const* argv);

}  // namespace qkd
