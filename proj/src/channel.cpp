#include "qkd/channel.hpp"

#include <string>

#include "qkd/errors.hpp"

namespace qkd {

const char* to_string(Party p) {
  return p == Party::Alice ? "alice" : "bob";
}

Party other(Party p) {
  return p == Party::Alice ? Party::Bob : Party::Alice;
}

SharedRegister::SharedRegister(StateVector state, Party holder, std::uint64_t id)
    : state_(std::move(state)), id_(id) {
  holder_.fill(holder);
  sent_.fill(false);
}

void SharedRegister::check_index(int index) const {
  if (index < 0 || index >= state_.num_qubits()) {
    throw std::invalid_argument("qubit index out of range for register " + std::to_string(id_));
  }
}

void SharedRegister::require_holder(Party who, int index) const {
  check_index(index);
  if (holder_[static_cast<std::size_t>(index)] != who) {
    throw NoCloneViolation(std::string(to_string(who)) + " no longer holds qubit " +
                           std::to_string(index) + " of register " + std::to_string(id_));
  }
}

Party SharedRegister::holder(int index) const {
  check_index(index);
  return holder_[static_cast<std::size_t>(index)];
}

bool SharedRegister::already_sent(int index) const {
  check_index(index);
  return sent_[static_cast<std::size_t>(index)];
}

void SharedRegister::apply(Party who, const GateSpec& spec) {
  require_holder(who, spec.target0);
  if (spec.arity() == 2) require_holder(who, spec.target1);
  state_.apply(spec);
}

int SharedRegister::measure(Party who, int index, Basis basis, Rng& rng) {
  require_holder(who, index);
  return state_.measure(index, basis, rng);
}

double SharedRegister::prob_of(Party who, int index, int outcome, Basis basis) const {
  require_holder(who, index);
  return state_.prob_of(index, outcome, basis);
}

QuantumChannel::QuantumChannel(EveConfig eve, std::uint64_t eve_seed)
    : eve_(eve), eve_rng_(eve_seed) {}

Basis QuantumChannel::pick_eve_basis() {
  switch (eve_.basis_strategy) {
    case EveBasisStrategy::FixedComputational: return Basis::Computational;
    case EveBasisStrategy::FixedHadamard: return Basis::Hadamard;
    case EveBasisStrategy::Random: break;
  }
  return eve_rng_.next_bit() ? Basis::Hadamard : Basis::Computational;
}

QubitRef QuantumChannel::transmit(SharedRegister& reg, int index, Party to) {
  reg.check_index(index);
  if (reg.sent_[static_cast<std::size_t>(index)]) {
    throw ProtocolViolation("qubit " + std::to_string(index) + " of register " +
                            std::to_string(reg.id()) + " was already transmitted");
  }
  if (reg.holder(index) == to) {
    throw ProtocolViolation("cannot transmit a qubit to its current holder");
  }
  if (eve_.quantum_mode == QuantumEveMode::InterceptResend) {
    // Measure in flight; the collapsed state is the resent state.
    const Basis basis = pick_eve_basis();
    const int outcome = reg.state_.measure(index, basis, eve_rng_);
    interceptions_.push_back(EveInterception{{reg.id(), index}, basis, outcome});
  }
  reg.sent_[static_cast<std::size_t>(index)] = true;
  reg.holder_[static_cast<std::size_t>(index)] = to;
  return QubitRef{reg.id(), index};
}

ClassicalChannel::ClassicalChannel(EveConfig eve, std::uint64_t tamper_seed)
    : eve_(eve), tamper_rng_(tamper_seed) {}

BitString ClassicalChannel::transmit(const BitString& payload) {
  eve_log_.push_back(payload);
  if (eve_.classical_mode == ClassicalEveMode::Passive) return payload;
  BitString delivered = payload;
  for (std::size_t i = 0; i < delivered.width(); ++i) {
    if (tamper_rng_.bernoulli(eve_.flip_probability)) {
      delivered.set_bit(i, delivered.bit(i) ^ 1);
    }
  }
  return delivered;
}

void clone_attempt(const QubitRef& half) {
  throw NoCloneViolation("qubit " + std::to_string(half.index) + " of register " +
                         std::to_string(half.register_id) + " cannot be copied");
}

}  // namespace qkd
