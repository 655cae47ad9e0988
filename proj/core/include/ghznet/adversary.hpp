#pragma once

// Imperfect-resource construction and sender-identification attacks.
//
// Noise is always a classical mixture of pure states,
//   rho = (1-delta) |ghz+><ghz+| + delta * sigma,
// with sigma a weighted mixture of pure states orthogonal to |ghz+>. Every
// bound checked by the harness is convex in the state, so pure-state
// mixtures lose no generality.

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ghznet/bellcert.hpp"
#include "ghznet/qstate.hpp"
#include "ghznet/source.hpp"

namespace ghznet {

struct NoiseSpec {
  int n = 0;
  double delta = 0.0;
  std::vector<std::pair<double, QuantumRegister>> junk;  // (weight, state), states orthogonal to ghz+

  // Validates weights (nonnegative, sum 1 within 1e-9) and orthogonality to
  // ghz+ within 1e-10.
  static NoiseSpec from_delta(int n, double delta,
                              std::vector<std::pair<double, QuantumRegister>> junk);

  // Solves delta from a target violation deficit: epsilon = delta*((n+1) - alpha)
  // where alpha is the junk mixture's exact Bell expectation. Throws when the
  // target is unreachable with the given junk spectrum (delta outside [0,1]).
  static NoiseSpec from_target_epsilon(int n, double epsilon,
                                       std::vector<std::pair<double, QuantumRegister>> junk);

  double junk_expectation() const;   // alpha
  double exact_expectation() const;  // (1-delta)(n+1) + delta*alpha
  double epsilon() const;            // (n+1) - exact_expectation()
};

// Junk presets. mid_eigenspace is the equal mixture over the +(n-3)
// eigenspace of the Bell operator (alpha = n-3, the deficit window's upper
// edge made tight); psi_minus has alpha = -(n+1), below the window's stated
// range for orthogonal states.
std::vector<std::pair<double, QuantumRegister>> junk_psi_minus(int n);
std::vector<std::pair<double, QuantumRegister>> junk_mid_eigenspace(int n);
std::vector<std::pair<double, QuantumRegister>> junk_pair_state(int n, std::uint64_t bits,
                                                                Sign sign);
std::vector<std::pair<double, QuantumRegister>> junk_computational(int n, std::uint64_t bits);

std::vector<std::pair<double, QuantumRegister>> junk_from_name(int n, const std::string& name);

class NoisyGhzSource final : public StateSource {
 public:
  explicit NoisyGhzSource(NoiseSpec spec);
  int n_qubits() const override { return spec_.n; }
  QuantumRegister draw(SplitMix64& rng) const override;
  const NoiseSpec& spec() const { return spec_; }
  double exact_expectation() const { return spec_.exact_expectation(); }
  double epsilon() const { return spec_.epsilon(); }

 private:
  NoiseSpec spec_;
  QuantumRegister ideal_;
};

std::shared_ptr<const StateSource> make_noisy_source(NoiseSpec spec);

// Pure-state counterpart of a mixture: sqrt(1-delta)|ghz+> + sum sqrt(delta*w_i)|junk_i>,
// renormalized. Junk amplitudes are the square roots of the mixture weights.
QuantumRegister pure_perturbed_state(const NoiseSpec& spec);

struct GuessReport {
  int k = 0;
  double epsilon = 0.0;  // (n+1) - <O> on the attacked pure state
  std::optional<double> helstrom_success;  // exact optimum, k = 2 only
  double pgm_success = 0.0;                // pretty-good measurement
  std::vector<std::vector<double>> pairwise_trace_distances;  // k x k
  double guess_bound = 0.0;  // min(1, 1/k + sqrt(epsilon))
  bool within_guess_bound = false;
};

// Models the strongest adversary consistent with the security argument: it
// holds the full global state and must distinguish the k candidates
// |psi_i> = Z_i |psi| arising from agent i in `honest` acting as the sender.
// Computes the pretty-good measurement via the Gram-matrix formula
// (1/k) * sum_i [(G^{1/2})_ii]^2 and, for k = 2, the exact Helstrom optimum
// (1 + trace distance)/2.
GuessReport sender_guess_attack(int n, const QuantumRegister& psi, const std::vector<int>& honest);
GuessReport sender_guess_attack(int n, const NoiseSpec& spec, const std::vector<int>& honest);

// Printed single-round parity success window (1 - eps/4, 1 - eps/(4(n-1))).
std::pair<double, double> parity_success_bounds(int n, double epsilon);

// Closed-form non-abort probability bound
//   2^-S (1 - eps/(4(n-1)))^(S-1) / (1 - (1-2^-S)(1 - eps/(4(n-1)))^2).
double non_abort_bound(int n, int S, double epsilon);

// min(1, 1/k + sqrt(epsilon))
double guessing_bound(int k, double epsilon);

}  // namespace ghznet
