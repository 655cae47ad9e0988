#include "ghznet/adversary.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ghznet {

namespace {

void validate_junk(int n, const std::vector<std::pair<double, QuantumRegister>>& junk) {
  const QuantumRegister ideal = ghz_state(n, Sign::plus);
  double total = 0.0;
  for (const auto& [w, state] : junk) {
    if (w < 0.0) throw std::invalid_argument("NoiseSpec: junk weights must be nonnegative");
    if (state.n_qubits() != n)
      throw std::invalid_argument("NoiseSpec: junk state has the wrong qubit count");
    if (fidelity(state, ideal) > 1e-10)
      throw std::invalid_argument("NoiseSpec: junk state is not orthogonal to the ideal state");
    total += w;
  }
  if (!junk.empty() && std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("NoiseSpec: junk weights must sum to 1");
}

double junk_alpha(int n, const std::vector<std::pair<double, QuantumRegister>>& junk) {
  if (junk.empty()) return 0.0;
  const BellOperator op = build_bell_operator(n);
  double alpha = 0.0;
  for (const auto& [w, state] : junk) alpha += w * expectation(op, state);
  return alpha;
}

}  // namespace

NoiseSpec NoiseSpec::from_delta(int n, double delta,
                                std::vector<std::pair<double, QuantumRegister>> junk) {
  if (delta < 0.0 || delta > 1.0)
    throw std::invalid_argument("NoiseSpec: delta must lie in [0, 1]");
  if (delta > 0.0 && junk.empty())
    throw std::invalid_argument("NoiseSpec: positive delta needs at least one junk state");
  validate_junk(n, junk);
  NoiseSpec spec;
  spec.n = n;
  spec.delta = delta;
  spec.junk = std::move(junk);
  return spec;
}

NoiseSpec NoiseSpec::from_target_epsilon(int n, double epsilon,
                                         std::vector<std::pair<double, QuantumRegister>> junk) {
  if (epsilon < 0.0) throw std::invalid_argument("NoiseSpec: epsilon must be >= 0");
  validate_junk(n, junk);
  if (epsilon == 0.0) return from_delta(n, 0.0, std::move(junk));
  if (junk.empty())
    throw std::invalid_argument("NoiseSpec: a positive epsilon needs junk states");
  const double gap = static_cast<double>(n + 1) - junk_alpha(n, junk);
  const double delta = epsilon / gap;
  if (delta > 1.0 + 1e-12)
    throw std::invalid_argument(
        "NoiseSpec: target epsilon " + std::to_string(epsilon) +
        " is unreachable with this junk spectrum (needs delta = " + std::to_string(delta) + ")");
  return from_delta(n, std::min(delta, 1.0), std::move(junk));
}

double NoiseSpec::junk_expectation() const { return junk_alpha(n, junk); }

double NoiseSpec::exact_expectation() const {
  return (1.0 - delta) * static_cast<double>(n + 1) + delta * junk_expectation();
}

double NoiseSpec::epsilon() const { return static_cast<double>(n + 1) - exact_expectation(); }

std::vector<std::pair<double, QuantumRegister>> junk_psi_minus(int n) {
  return {{1.0, ghz_state(n, Sign::minus)}};
}

std::vector<std::pair<double, QuantumRegister>> junk_mid_eigenspace(int n) {
  const std::vector<std::uint64_t> reps = pair_representatives(n, 2);
  if (reps.empty()) throw std::invalid_argument("junk_mid_eigenspace: empty eigenspace");
  std::vector<std::pair<double, QuantumRegister>> junk;
  junk.reserve(reps.size());
  const double w = 1.0 / static_cast<double>(reps.size());
  for (std::uint64_t b : reps) junk.emplace_back(w, pair_eigenstate(n, b, Sign::plus));
  return junk;
}

std::vector<std::pair<double, QuantumRegister>> junk_pair_state(int n, std::uint64_t bits,
                                                                Sign sign) {
  return {{1.0, pair_eigenstate(n, bits, sign)}};
}

std::vector<std::pair<double, QuantumRegister>> junk_computational(int n, std::uint64_t bits) {
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  if (bits == 0 || bits == full)
    throw std::invalid_argument("junk_computational: all-equal bit strings overlap the ideal state");
  return {{1.0, QuantumRegister::computational_basis(n, bits)}};
}

std::vector<std::pair<double, QuantumRegister>> junk_from_name(int n, const std::string& name) {
  auto parse_bits = [&](const std::string& s) {
    if (s.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("junk spec: bit string must have exactly n characters");
    std::uint64_t bits = 0;
    for (char c : s) {
      if (c != '0' && c != '1') throw std::invalid_argument("junk spec: bits must be 0 or 1");
      bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return bits;
  };
  if (name == "psi-minus") return junk_psi_minus(n);
  if (name == "mid-eig") return junk_mid_eigenspace(n);
  if (name.rfind("pair:", 0) == 0) {
    const std::string rest = name.substr(5);
    const std::size_t colon = rest.find(':');
    const std::string bits = colon == std::string::npos ? rest : rest.substr(0, colon);
    Sign sign = Sign::plus;
    if (colon != std::string::npos) {
      const std::string s = rest.substr(colon + 1);
      if (s == "-")
        sign = Sign::minus;
      else if (s != "+")
        throw std::invalid_argument("junk spec: pair sign must be + or -");
    }
    return junk_pair_state(n, parse_bits(bits), sign);
  }
  if (name.rfind("comp:", 0) == 0) return junk_computational(n, parse_bits(name.substr(5)));
  throw std::invalid_argument("unknown junk spec '" + name +
                              "' (expected psi-minus, mid-eig, pair:<bits>[:+|-], comp:<bits>)");
}

NoisyGhzSource::NoisyGhzSource(NoiseSpec spec)
    : spec_(std::move(spec)), ideal_(ghz_state(spec_.n, Sign::plus)) {}

QuantumRegister NoisyGhzSource::draw(SplitMix64& rng) const {
  if (spec_.delta <= 0.0) return ideal_;
  const double u = rng.next_double();
  if (u >= spec_.delta) return ideal_;
  double v = rng.next_double();
  for (const auto& [w, state] : spec_.junk) {
    if (v < w) return state;
    v -= w;
  }
  return spec_.junk.back().second;
}

std::shared_ptr<const StateSource> make_noisy_source(NoiseSpec spec) {
  return std::make_shared<NoisyGhzSource>(std::move(spec));
}

QuantumRegister pure_perturbed_state(const NoiseSpec& spec) {
  const QuantumRegister ideal = ghz_state(spec.n, Sign::plus);
  std::vector<Complex> amps = ideal.amplitudes();
  const double root = std::sqrt(1.0 - spec.delta);
  for (Complex& a : amps) a *= root;
  for (const auto& [w, state] : spec.junk) {
    const double c = std::sqrt(spec.delta * w);
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += c * state.amplitudes()[i];
  }
  double n2 = 0.0;
  for (const Complex& a : amps) n2 += std::norm(a);
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& a : amps) a *= inv;
  return QuantumRegister(spec.n, std::move(amps));
}

GuessReport sender_guess_attack(int n, const QuantumRegister& psi,
                                const std::vector<int>& honest) {
  if (psi.n_qubits() != n)
    throw std::invalid_argument("sender_guess_attack: state size does not match n");
  if (n > 11) throw std::invalid_argument("sender_guess_attack: limited to n <= 11");
  const int k = static_cast<int>(honest.size());
  if (k < 2 || k > n)
    throw std::invalid_argument("sender_guess_attack: honest set must have 2..n agents");
  double n2 = 0.0;
  for (const Complex& a : psi.amplitudes()) n2 += std::norm(a);
  if (std::abs(n2 - 1.0) > 1e-9)
    throw std::invalid_argument("sender_guess_attack: input state is not normalized");

  std::vector<QuantumRegister> candidates;
  candidates.reserve(static_cast<std::size_t>(k));
  for (int agent : honest) candidates.push_back(apply_pauli(psi, agent, Pauli::Z));

  Eigen::MatrixXcd gram(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const Complex g = inner_product(candidates[static_cast<std::size_t>(i)],
                                      candidates[static_cast<std::size_t>(j)]);
      gram(i, j) = g;
    }

  GuessReport report;
  report.k = k;
  report.epsilon =
      std::max(0.0, static_cast<double>(n + 1) - expectation(build_bell_operator(n), psi));

  report.pairwise_trace_distances.assign(static_cast<std::size_t>(k),
                                         std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double f = std::abs(gram(i, j));
      report.pairwise_trace_distances[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          std::sqrt(std::max(0.0, 1.0 - f * f));
    }

  // Pretty-good measurement via the Gram square root. Tiny negative
  // eigenvalues from roundoff are clamped to zero.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sender_guess_attack: Gram eigendecomposition failed");
  Eigen::VectorXd vals = solver.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -1e-10)
      throw std::runtime_error("sender_guess_attack: Gram matrix is not positive semidefinite");
    // Eigenvalues at roundoff scale are rank-deficiency artifacts; their
    // square roots would put sqrt(machine-eps) noise into the measurement.
    vals(i) = vals(i) < 1e-12 ? 0.0 : std::sqrt(vals(i));
  }
  const Eigen::MatrixXcd root =
      solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().adjoint();
  double pgm = 0.0;
  for (int i = 0; i < k; ++i) {
    const double d = root(i, i).real();
    pgm += d * d;
  }
  report.pgm_success = pgm / static_cast<double>(k);

  if (k == 2)
    report.helstrom_success = 0.5 * (1.0 + report.pairwise_trace_distances[0][1]);

  report.guess_bound = guessing_bound(k, report.epsilon);
  const double strongest = std::max(report.pgm_success, report.helstrom_success.value_or(0.0));
  report.within_guess_bound = strongest <= report.guess_bound + 1e-12;
  return report;
}

GuessReport sender_guess_attack(int n, const NoiseSpec& spec, const std::vector<int>& honest) {
  return sender_guess_attack(n, pure_perturbed_state(spec), honest);
}

std::pair<double, double> parity_success_bounds(int n, double epsilon) {
  if (epsilon < 0.0) throw std::domain_error("parity_success_bounds: epsilon must be >= 0");
  return {1.0 - epsilon / 4.0, 1.0 - epsilon / (4.0 * static_cast<double>(n - 1))};
}

double non_abort_bound(int n, int S, double epsilon) {
  if (epsilon < 0.0) throw std::domain_error("non_abort_bound: epsilon must be >= 0");
  if (S < 1) throw std::domain_error("non_abort_bound: S must be >= 1");
  const double q = 1.0 - epsilon / (4.0 * static_cast<double>(n - 1));
  const double two_s = std::pow(2.0, -static_cast<double>(S));
  const double numerator = two_s * std::pow(q, static_cast<double>(S - 1));
  const double denominator = 1.0 - (1.0 - two_s) * q * q;
  if (denominator <= 0.0)
    throw std::logic_error("non_abort_bound: nonpositive denominator");  // impossible for eps >= 0
  return numerator / denominator;
}

double guessing_bound(int k, double epsilon) {
  if (k < 1) throw std::domain_error("guessing_bound: k must be >= 1");
  if (epsilon < 0.0) throw std::domain_error("guessing_bound: epsilon must be >= 0");
  return std::min(1.0, 1.0 / static_cast<double>(k) + std::sqrt(epsilon));
}

}  // namespace ghznet
