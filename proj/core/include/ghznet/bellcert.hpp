#pragma once

// The Bell-type certification operator O = O_0 - sum_i O_i built from the
// n+1 observables
//   O_0 = X_1 X_2 ... X_n
//   O_i = X_1 ... X_{i-1} Y_i Y_{i+1} X_{i+2} ... X_n   (positions cyclic,
//         so the i = n term carries Y at positions n and 1)
// for odd n. Its expectation reaches +-(n+1) exactly on the GHZ states while
// every local-realistic assignment stays within +-(n-1), so sampled
// measurement statistics certify the shared state.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ghznet/qstate.hpp"
#include "ghznet/rng.hpp"
#include "ghznet/source.hpp"

namespace ghznet {

struct PauliString {
  std::vector<Pauli> letters;  // letters[i] acts on qubit i+1
  int sign = +1;

  int n() const { return static_cast<int>(letters.size()); }
  // sign * (P_1 x ... x P_n) |reg>
  QuantumRegister apply(const QuantumRegister& reg) const;
};

// <reg| sign * P |reg>; asserts the imaginary part is below 1e-10.
double expectation(const PauliString& term, const QuantumRegister& reg);

struct BellOperator {
  int n = 0;
  std::vector<PauliString> terms;  // n+1 entries; signs carry the +-1 coefficients
};

BellOperator build_bell_operator(int n);

double expectation(const BellOperator& op, const QuantumRegister& reg);

struct SpectrumReport {
  std::vector<double> eigenvalues;     // ascending, 2^n entries
  std::map<int, int> multiplicities;   // lattice value +-[(n+1)-4k] -> count
  bool extremal_nondegenerate = false;
  // min of F(top eigenvector, ghz+) and F(bottom eigenvector, ghz-)
  double extremal_eigenvector_fidelity_to_ghz = 0.0;
  bool lattice_ok = false;  // every eigenvalue within 1e-9 of a lattice value
};

// Dense Hermitian eigendecomposition; rejects n > 11.
SpectrumReport spectrum(const BellOperator& op);

struct LrResult {
  int max_value = 0;
  // maximizing deterministic assignment, one (x_i, y_i) pair of +-1 per agent
  std::vector<std::pair<int, int>> assignment;
};

// Brute force over all 2^(2n) deterministic +-1 assignments; rejects n > 9.
LrResult lr_max(int n);

struct SelfTestVerdict {
  double estimate = 0.0;     // estimated <O>
  double epsilon_hat = 0.0;  // (n+1) - estimate
  long rounds_used = 0;
  bool accepted = false;
  double threshold = 0.0;
};

// Statistical self-test: each round draws one copy from the source, picks one
// of the n+1 terms of O uniformly, measures every qubit in that term's local
// basis and records the +-1 outcome product times the term's sign. The
// uniform term choice makes each round an unbiased sample of <O>/(n+1), so
// estimate = (n+1) * mean. Accepts iff (n+1) - estimate <= threshold.
SelfTestVerdict self_test(const StateSource& source, int n, long rounds, double threshold,
                          SplitMix64& rng);

// The printed deficit window (epsilon/(2(n-1)), epsilon/4) for a violation
// (n+1) - epsilon. Requires 0 <= epsilon <= 2(n+1).
std::pair<double, double> fidelity_deficit_bounds(double epsilon, int n);

// --- eigenstructure helpers ---------------------------------------------
// Every eigenvector of O is (|b> +- |b_complement>)/sqrt(2); its eigenvalue
// is +-[(n+1) - 2f] where f counts cyclic anti-correlated neighbor pairs.

int cyclic_anticorrelations(int n, std::uint64_t bits);

QuantumRegister pair_eigenstate(int n, std::uint64_t bits, Sign sign);

int pair_eigenvalue(int n, std::uint64_t bits, Sign sign);

// Canonical representatives (bits < complement) of the +-eigenvectors with
// exactly f anti-correlations.
std::vector<std::uint64_t> pair_representatives(int n, int f);

}  // namespace ghznet
