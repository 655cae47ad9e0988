#pragma once

// Dense pure-state simulator for small qubit registers.
//
// Conventions fixed here and used everywhere else in the library:
//  * Qubit indices are 1-based and qubit 1 is the MOST significant bit of a
//    basis index, so the Pauli-string position i acts on agent i's qubit.
//  * Measurement outcomes use the encoding +1 -> 0, -1 -> 1; the parity of an
//    outcome vector is the XOR of its bits.
//  * Tolerances: 1e-12 for algebraic identities (norms, Pauli algebra),
//    1e-9 for Born/eigenvalue quantities. Doubles leave ample headroom at
//    dimension <= 4096.
//
// Registers are immutable values: every operation returns a fresh register,
// so read-only sharing across parallel workers is safe. The random stream is
// the only stateful input.

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ghznet/rng.hpp"

namespace ghznet {

using Complex = std::complex<double>;

inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kBornTol = 1e-9;

enum class Sign { plus, minus };
enum class Pauli { I, X, Y, Z };
enum class MeasureBasis { X, Y };

class QuantumRegister {
 public:
  // Takes 2^n amplitudes, qubit 1 = most significant bit. Rejects vectors
  // whose norm is off by more than 1e-9, then rescales to exact unit norm.
  QuantumRegister(int n_qubits, std::vector<Complex> amplitudes);

  static QuantumRegister computational_basis(int n_qubits, std::uint64_t basis_index);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_.at(index); }

  // Bit mask selecting 1-based `qubit` within a basis index.
  std::uint64_t qubit_mask(int qubit) const;

 private:
  int n_qubits_;
  std::vector<Complex> amps_;
};

struct MeasurementOutcome {
  std::vector<int> bits;  // one 0/1 entry per measured qubit, ascending qubit order
  int parity() const;     // XOR of bits
};

struct MeasurementResult {
  MeasurementOutcome outcome;
  QuantumRegister state;  // renormalized post-measurement state on all n qubits
};

struct ProjectionResult {
  double probability = 0.0;
  std::optional<QuantumRegister> state;  // absent when probability vanishes
};

// (|0...0> + sign |1...1>)/sqrt(2); the shared network resource. Requires odd
// n >= 3 -- even agent counts are outside this library's scope.
QuantumRegister ghz_state(int n, Sign sign);

// The two-qubit target state (|00> + |11>)/sqrt(2).
QuantumRegister bell_phi_plus();

// Single-qubit Pauli; Pauli::I is a no-op. Norm is preserved exactly.
QuantumRegister apply_pauli(const QuantumRegister& reg, int qubit, Pauli letter);

// Measures `qubits` (distinct, 1-based) in the X or Y basis, sampling from
// the Born distribution; measured qubits collapse to the observed eigenstate.
MeasurementResult measure_basis(const QuantumRegister& reg, const std::vector<int>& qubits,
                                MeasureBasis basis, SplitMix64& rng);

// Projects one qubit onto the given basis outcome without sampling.
ProjectionResult project_outcome(const QuantumRegister& reg, int qubit, MeasureBasis basis,
                                 int outcome_bit);

// Exact joint Born distribution over a measured subset. Entry j is the
// probability of the outcome pattern whose bits (ascending qubit order, first
// listed qubit = most significant) spell the integer j. Includes zeros.
std::vector<double> outcome_distribution(const QuantumRegister& reg,
                                         const std::vector<int>& qubits, MeasureBasis basis);

std::complex<double> inner_product(const QuantumRegister& a, const QuantumRegister& b);

// |<a|b>|
double fidelity(const QuantumRegister& a, const QuantumRegister& b);

// sqrt(1 - F^2); equals the trace distance for pure states.
double trace_distance_pure(const QuantumRegister& a, const QuantumRegister& b);

// Pure state held by `kept` (in the given order, kept[0] = most significant)
// after the listed qubits collapsed to X-basis outcomes. Every qubit of the
// register must appear exactly once across `kept` and `x_collapsed`.
QuantumRegister extract_kept_state(const QuantumRegister& reg, const std::vector<int>& kept,
                                   const std::vector<std::pair<int, int>>& x_collapsed);

}  // namespace ghznet
