#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qkd/bitstring.hpp"
#include "qkd/rng.hpp"
#include "qkd/state_vector.hpp"

namespace qkd {

enum class Party { Alice, Bob };
const char* to_string(Party p);
Party other(Party p);

enum class QuantumEveMode { Off, InterceptResend };
enum class EveBasisStrategy { Random, FixedComputational, FixedHadamard };
enum class ClassicalEveMode { Passive, Tamper };

struct EveConfig {
  QuantumEveMode quantum_mode = QuantumEveMode::Off;
  EveBasisStrategy basis_strategy = EveBasisStrategy::Random;
  ClassicalEveMode classical_mode = ClassicalEveMode::Passive;
  double flip_probability = 0.0;

  friend bool operator==(const EveConfig&, const EveConfig&) = default;
};

// Names one qubit of one register; appears in logs and error messages.
struct QubitRef {
  std::uint64_t register_id = 0;
  int index = 0;
};

// An entangled register shared between the two parties, with per-qubit
// holdership. Once a qubit is surrendered to the channel the previous holder
// can neither act on it nor learn anything about its amplitudes; all the
// accessors below enforce that.
class SharedRegister {
 public:
  SharedRegister(StateVector state, Party holder, std::uint64_t id);

  std::uint64_t id() const { return id_; }
  int num_qubits() const { return state_.num_qubits(); }
  Party holder(int index) const;
  bool already_sent(int index) const;

  void apply(Party who, const GateSpec& spec);
  int measure(Party who, int index, Basis basis, Rng& rng);
  double prob_of(Party who, int index, int outcome, Basis basis) const;

  // Unchecked view for tests and statistics, not reachable through protocol
  // parties.
  const StateVector& state() const { return state_; }

 private:
  friend class QuantumChannel;
  void check_index(int index) const;
  void require_holder(Party who, int index) const;

  StateVector state_;
  std::uint64_t id_;
  std::array<Party, kMaxQubits> holder_;
  std::array<bool, kMaxQubits> sent_;
};

// One interception record: which qubit, which basis, what Eve saw. Outcomes
// and basis choices are all Eve ever obtains; she has no amplitude access.
struct EveInterception {
  QubitRef qubit;
  Basis basis = Basis::Computational;
  int outcome = 0;
};

// Carries qubit halves between the parties. With an intercept-resend
// eavesdropper every transmitted qubit is measured in flight and the collapsed
// state is what the receiver gets.
class QuantumChannel {
 public:
  QuantumChannel(EveConfig eve, std::uint64_t eve_seed);

  // Hands the qubit to `to`. The sender's access is revoked; transmitting the
  // same qubit twice is a protocol violation.
  QubitRef transmit(SharedRegister& reg, int index, Party to);

  const std::vector<EveInterception>& interceptions() const { return interceptions_; }
  const EveConfig& eve() const { return eve_; }

 private:
  Basis pick_eve_basis();

  EveConfig eve_;
  Rng eve_rng_;
  std::vector<EveInterception> interceptions_;
};

// Public classical channel. Every payload is logged for Eve; in Tamper mode
// each delivered bit flips independently with the configured probability.
class ClassicalChannel {
 public:
  ClassicalChannel(EveConfig eve, std::uint64_t tamper_seed);

  BitString transmit(const BitString& payload);

  const std::vector<BitString>& eve_log() const { return eve_log_; }
  const EveConfig& eve() const { return eve_; }

 private:
  EveConfig eve_;
  Rng tamper_rng_;
  std::vector<BitString> eve_log_;
};

// There is no API that duplicates quantum state; this call documents the rule
// by failing unconditionally.
[[noreturn]] void clone_attempt(const QubitRef& half);

}  // namespace qkd
