#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qkd/rng.hpp"

namespace qkd {

inline constexpr int kMaxQubits = 4;

enum class Gate { H, X, Z, CX, Swap };
enum class Basis { Computational, Hadamard };
enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

const char* to_string(Gate g);
const char* to_string(Basis b);
const char* to_string(BellKind k);

// One gate application: H, X, Z take a single target; CX takes (control,
// target); Swap takes two distinct targets.
struct GateSpec {
  Gate gate = Gate::H;
  int target0 = 0;
  int target1 = -1;  // unused for single-qubit gates

  static GateSpec single(Gate g, int target);
  static GateSpec two(Gate g, int first, int second);
  int arity() const;

  friend bool operator==(const GateSpec&, const GateSpec&) = default;
};

// Dense amplitude vector over the computational basis of an n-qubit register,
// 1 <= n <= 4. Qubit 0 is the most significant bit of the amplitude index: a
// two-qubit register is ordered |00>, |01>, |10>, |11>.
class StateVector {
 public:
  // |0...0>
  explicit StateVector(int num_qubits);
  // Arbitrary normalized state; the amplitude count must be exactly 2^n.
  StateVector(int num_qubits, std::vector<std::complex<double>> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }

  void apply(const GateSpec& spec);

  // Born probability of seeing `outcome` when measuring qubit `index` in
  // `basis`. Computed as the matching weight over the total weight, so exact
  // halves stay exact; the state is not modified.
  double prob_of(int index, int outcome, Basis basis) const;

  // Samples an outcome from the Born distribution, collapses the register to
  // the normalized post-measurement state, and returns the measured bit. A
  // repeated measurement of the same qubit in the same basis is guaranteed to
  // reproduce the outcome.
  int measure(int index, Basis basis, Rng& rng);

  double norm_squared() const;

 private:
  std::uint64_t mask_of(int q) const;
  void check_target(int index) const;
  void apply_h(int q);
  void apply_x(int q);
  void apply_z(int q);
  void apply_cx(int control, int target);
  void apply_swap(int a, int b);
  void collapse(int index, int outcome);

  int num_qubits_;
  std::vector<std::complex<double>> amps_;
};

// Two-qubit register in the requested Bell state, built as H on qubit 0 and
// CX(0, 1), then Z and/or X on qubit 1 to select the variant.
StateVector make_bell_pair(BellKind kind);

}  // namespace qkd
