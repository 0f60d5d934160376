#include "qkd/state_vector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
constexpr double kNormTolerance = 1e-9;

}  // namespace

const char* to_string(Gate g) {
  switch (g) {
    case Gate::H: return "h";
    case Gate::X: return "x";
    case Gate::Z: return "z";
    case Gate::CX: return "cx";
    case Gate::Swap: return "swap";
  }
  return "?";
}

const char* to_string(Basis b) {
  return b == Basis::Computational ? "computational" : "hadamard";
}

const char* to_string(BellKind k) {
  switch (k) {
    case BellKind::PhiPlus: return "phi_plus";
    case BellKind::PhiMinus: return "phi_minus";
    case BellKind::PsiPlus: return "psi_plus";
    case BellKind::PsiMinus: return "psi_minus";
  }
  return "?";
}

GateSpec GateSpec::single(Gate g, int target) {
  if (g == Gate::CX || g == Gate::Swap) {
    throw std::invalid_argument("two-qubit gate needs two targets");
  }
  return GateSpec{g, target, -1};
}

GateSpec GateSpec::two(Gate g, int first, int second) {
  if (g != Gate::CX && g != Gate::Swap) {
    throw std::invalid_argument("single-qubit gate takes one target");
  }
  if (first == second) {
    throw std::invalid_argument("two-qubit gate targets must be distinct");
  }
  return GateSpec{g, first, second};
}

int GateSpec::arity() const {
  return (gate == Gate::CX || gate == Gate::Swap) ? 2 : 1;
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("register size must be between 1 and " +
                                std::to_string(kMaxQubits) + " qubits");
  }
  amps_.assign(std::size_t{1} << num_qubits, {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

StateVector::StateVector(int num_qubits, std::vector<std::complex<double>> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("register size must be between 1 and " +
                                std::to_string(kMaxQubits) + " qubits");
  }
  if (amps_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("amplitude count must be 2^num_qubits");
  }
  if (std::abs(norm_squared() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state is not normalized");
  }
}

std::uint64_t StateVector::mask_of(int q) const {
  return std::uint64_t{1} << (num_qubits_ - 1 - q);
}

void StateVector::check_target(int index) const {
  if (index < 0 || index >= num_qubits_) {
    throw std::invalid_argument("qubit index " + std::to_string(index) +
                                " out of range for " + std::to_string(num_qubits_) +
                                "-qubit register");
  }
}

void StateVector::apply(const GateSpec& spec) {
  check_target(spec.target0);
  if (spec.arity() == 2) {
    check_target(spec.target1);
    if (spec.target0 == spec.target1) {
      throw std::invalid_argument("two-qubit gate targets must be distinct");
    }
  }
  switch (spec.gate) {
    case Gate::H: apply_h(spec.target0); break;
    case Gate::X: apply_x(spec.target0); break;
    case Gate::Z: apply_z(spec.target0); break;
    case Gate::CX: apply_cx(spec.target0, spec.target1); break;
    case Gate::Swap: apply_swap(spec.target0, spec.target1); break;
  }
}

void StateVector::apply_h(int q) {
  const std::uint64_t mask = mask_of(q);
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) continue;
    const auto a = amps_[i];
    const auto b = amps_[i | mask];
    amps_[i] = (a + b) * kInvSqrt2;
    amps_[i | mask] = (a - b) * kInvSqrt2;
  }
}

void StateVector::apply_x(int q) {
  const std::uint64_t mask = mask_of(q);
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) continue;
    std::swap(amps_[i], amps_[i | mask]);
  }
}

void StateVector::apply_z(int q) {
  const std::uint64_t mask = mask_of(q);
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) amps_[i] = -amps_[i];
  }
}

void StateVector::apply_cx(int control, int target) {
  const std::uint64_t cmask = mask_of(control);
  const std::uint64_t tmask = mask_of(target);
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
  }
}

void StateVector::apply_swap(int a, int b) {
  const std::uint64_t amask = mask_of(a);
  const std::uint64_t bmask = mask_of(b);
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if ((i & amask) && !(i & bmask)) {
      std::swap(amps_[i], amps_[(i & ~amask) | bmask]);
    }
  }
}

double StateVector::prob_of(int index, int outcome, Basis basis) const {
  check_target(index);
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("outcome must be 0 or 1");
  }
  if (basis == Basis::Hadamard) {
    StateVector rotated(*this);
    rotated.apply_h(index);
    return rotated.prob_of(index, outcome, Basis::Computational);
  }
  const std::uint64_t mask = mask_of(index);
  double match = 0.0;
  double total = 0.0;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    const double w = std::norm(amps_[i]);
    total += w;
    const int bit = (i & mask) ? 1 : 0;
    if (bit == outcome) match += w;
  }
  // Weight ratio rather than raw weight: keeps eigenstates at exactly 0/1 and
  // balanced superpositions at exactly 1/2.
  return match / total;
}

int StateVector::measure(int index, Basis basis, Rng& rng) {
  check_target(index);
  if (basis == Basis::Hadamard) {
    // Rotate into the measurement frame, project, rotate back: the register
    // ends in the corresponding Hadamard-basis eigenstate.
    apply_h(index);
    const int outcome = measure(index, Basis::Computational, rng);
    apply_h(index);
    return outcome;
  }
  const double p0 = prob_of(index, 0, Basis::Computational);
  const int outcome = rng.next_double() < p0 ? 0 : 1;
  collapse(index, outcome);
  return outcome;
}

void StateVector::collapse(int index, int outcome) {
  const std::uint64_t mask = mask_of(index);
  double kept = 0.0;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    const int bit = (i & mask) ? 1 : 0;
    if (bit == outcome) {
      kept += std::norm(amps_[i]);
    } else {
      amps_[i] = {0.0, 0.0};
    }
  }
  const double scale = std::sqrt(kept);
  for (auto& a : amps_) a /= scale;
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

StateVector make_bell_pair(BellKind kind) {
  StateVector sv(2);
  sv.apply(GateSpec::single(Gate::H, 0));
  sv.apply(GateSpec::two(Gate::CX, 0, 1));
  switch (kind) {
    case BellKind::PhiPlus:
      break;
    case BellKind::PhiMinus:
      sv.apply(GateSpec::single(Gate::Z, 1));
      break;
    case BellKind::PsiPlus:
      sv.apply(GateSpec::single(Gate::X, 1));
      break;
    case BellKind::PsiMinus:
      sv.apply(GateSpec::single(Gate::Z, 1));
      sv.apply(GateSpec::single(Gate::X, 1));
      break;
  }
  return sv;
}

}  // namespace qkd
