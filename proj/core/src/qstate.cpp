#include "ghznet/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ghznet {

namespace {

constexpr int kMaxQubits = 14;

double norm_squared(const std::vector<Complex>& amps) {
  double s = 0.0;
  for (const Complex& a : amps) s += std::norm(a);
  return s;
}

void check_qubit(const QuantumRegister& reg, int qubit) {
  if (qubit < 1 || qubit > reg.n_qubits())
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside [1, " +
                            std::to_string(reg.n_qubits()) + "]");
}

void check_same_dim(const QuantumRegister& a, const QuantumRegister& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("register dimension mismatch: " + std::to_string(a.n_qubits()) +
                                " vs " + std::to_string(b.n_qubits()) + " qubits");
}

// Amplitudes of (I + s*B)/2 |psi> for B in {X, Y} on one qubit, s = +1/-1.
std::vector<Complex> project_half(const std::vector<Complex>& amps, std::uint64_t mask,
                                  MeasureBasis basis, int sign) {
  std::vector<Complex> out(amps.size());
  const double s = sign > 0 ? 0.5 : -0.5;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    Complex flipped = amps[i ^ mask];
    if (basis == MeasureBasis::Y) {
      // Y|0> = i|1>, Y|1> = -i|0>
      flipped *= (i & mask) ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
    }
    out[i] = 0.5 * amps[i] + s * flipped;
  }
  return out;
}

}  // namespace

QuantumRegister::QuantumRegister(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits_ < 2) throw std::invalid_argument("QuantumRegister requires n_qubits >= 2");
  if (n_qubits_ > kMaxQubits)
    throw std::invalid_argument("QuantumRegister supports at most " +
                                std::to_string(kMaxQubits) + " qubits");
  if (amps_.size() != (std::size_t{1} << n_qubits_))
    throw std::invalid_argument("amplitude vector size must be 2^n_qubits");
  const double n2 = norm_squared(amps_);
  if (std::abs(n2 - 1.0) > 1e-9)
    throw std::invalid_argument("amplitudes are not normalized (|norm^2 - 1| = " +
                                std::to_string(std::abs(n2 - 1.0)) + ")");
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& a : amps_) a *= inv;
}

QuantumRegister QuantumRegister::computational_basis(int n_qubits, std::uint64_t basis_index) {
  std::vector<Complex> amps(std::size_t{1} << n_qubits, Complex{});
  amps.at(basis_index) = Complex{1.0, 0.0};
  return QuantumRegister(n_qubits, std::move(amps));
}

std::uint64_t QuantumRegister::qubit_mask(int qubit) const {
  check_qubit(*this, qubit);
  return std::uint64_t{1} << (n_qubits_ - qubit);
}

int MeasurementOutcome::parity() const {
  int p = 0;
  for (int b : bits) p ^= b;
  return p;
}

QuantumRegister ghz_state(int n, Sign sign) {
  if (n < 3 || n % 2 == 0)
    throw std::domain_error("ghz_state requires an odd agent count n >= 3 (got n = " +
                            std::to_string(n) + "); even n is not supported");
  std::vector<Complex> amps(std::size_t{1} << n, Complex{});
  const double r = 1.0 / std::sqrt(2.0);
  amps.front() = Complex{r, 0.0};
  amps.back() = Complex{sign == Sign::plus ? r : -r, 0.0};
  return QuantumRegister(n, std::move(amps));
}

QuantumRegister bell_phi_plus() {
  const double r = 1.0 / std::sqrt(2.0);
  return QuantumRegister(2, {Complex{r, 0.0}, {}, {}, Complex{r, 0.0}});
}

QuantumRegister apply_pauli(const QuantumRegister& reg, int qubit, Pauli letter) {
  if (letter == Pauli::I) return reg;
  check_qubit(reg, qubit);
  const std::uint64_t mask = reg.qubit_mask(qubit);
  const std::vector<Complex>& in = reg.amplitudes();
  std::vector<Complex> out(in.size());
  switch (letter) {
    case Pauli::X:
      for (std::uint64_t i = 0; i < in.size(); ++i) out[i] = in[i ^ mask];
      break;
    case Pauli::Y:
      for (std::uint64_t i = 0; i < in.size(); ++i)
        out[i] = ((i & mask) ? Complex(0.0, 1.0) : Complex(0.0, -1.0)) * in[i ^ mask];
      break;
    case Pauli::Z:
      for (std::uint64_t i = 0; i < in.size(); ++i) out[i] = (i & mask) ? -in[i] : in[i];
      break;
    case Pauli::I:
      break;
  }
  return QuantumRegister(reg.n_qubits(), std::move(out));
}

ProjectionResult project_outcome(const QuantumRegister& reg, int qubit, MeasureBasis basis,
                                 int outcome_bit) {
  check_qubit(reg, qubit);
  if (outcome_bit != 0 && outcome_bit != 1)
    throw std::invalid_argument("outcome bit must be 0 or 1");
  // outcome 0 encodes eigenvalue +1
  const int sign = outcome_bit == 0 ? +1 : -1;
  std::vector<Complex> proj =
      project_half(reg.amplitudes(), reg.qubit_mask(qubit), basis, sign);
  const double p = norm_squared(proj);
  ProjectionResult res;
  res.probability = p;
  if (p > 1e-15) {
    const double inv = 1.0 / std::sqrt(p);
    for (Complex& a : proj) a *= inv;
    res.state.emplace(reg.n_qubits(), std::move(proj));
  }
  return res;
}

MeasurementResult measure_basis(const QuantumRegister& reg, const std::vector<int>& qubits,
                                MeasureBasis basis, SplitMix64& rng) {
  if (qubits.empty()) throw std::invalid_argument("measure_basis: empty qubit set");
  std::vector<int> sorted = qubits;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("measure_basis: qubit indices must be distinct");

  MeasurementResult result{MeasurementOutcome{}, reg};
  result.outcome.bits.reserve(sorted.size());
  for (int q : sorted) {
    ProjectionResult zero = project_outcome(result.state, q, basis, 0);
    const int bit = rng.next_double() < zero.probability ? 0 : 1;
    if (bit == 0) {
      result.state = std::move(*zero.state);
    } else {
      ProjectionResult one = project_outcome(result.state, q, basis, 1);
      result.state = std::move(*one.state);
    }
    result.outcome.bits.push_back(bit);
  }
  return result;
}

std::vector<double> outcome_distribution(const QuantumRegister& reg,
                                         const std::vector<int>& qubits, MeasureBasis basis) {
  if (qubits.empty()) throw std::invalid_argument("outcome_distribution: empty qubit set");
  std::vector<int> sorted = qubits;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("outcome_distribution: qubit indices must be distinct");

  std::vector<double> probs(std::size_t{1} << sorted.size(), 0.0);
  // Depth-first over outcome bits; probabilities multiply along each branch.
  struct Frame {
    QuantumRegister state;
    double prob;
    std::size_t depth;
    std::uint64_t pattern;
  };
  std::vector<Frame> stack;
  stack.push_back({reg, 1.0, 0, 0});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.depth == sorted.size()) {
      probs[f.pattern] += f.prob;
      continue;
    }
    for (int bit : {0, 1}) {
      ProjectionResult pr = project_outcome(f.state, sorted[f.depth], basis, bit);
      const double p = f.prob * pr.probability;
      if (p <= 0.0 || !pr.state) continue;
      stack.push_back({std::move(*pr.state), p, f.depth + 1,
                       (f.pattern << 1) | static_cast<std::uint64_t>(bit)});
    }
  }
  return probs;
}

std::complex<double> inner_product(const QuantumRegister& a, const QuantumRegister& b) {
  check_same_dim(a, b);
  Complex s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  return s;
}

double fidelity(const QuantumRegister& a, const QuantumRegister& b) {
  return std::abs(inner_product(a, b));
}

double trace_distance_pure(const QuantumRegister& a, const QuantumRegister& b) {
  const double f = fidelity(a, b);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

QuantumRegister extract_kept_state(const QuantumRegister& reg, const std::vector<int>& kept,
                                   const std::vector<std::pair<int, int>>& x_collapsed) {
  const int n = reg.n_qubits();
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  auto mark = [&](int q) {
    check_qubit(reg, q);
    if (seen[static_cast<std::size_t>(q)])
      throw std::invalid_argument("extract_kept_state: qubit listed twice");
    seen[static_cast<std::size_t>(q)] = true;
  };
  for (int q : kept) mark(q);
  for (auto& [q, bit] : x_collapsed) {
    mark(q);
    if (bit != 0 && bit != 1) throw std::invalid_argument("extract_kept_state: bad outcome bit");
  }
  if (kept.size() + x_collapsed.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("extract_kept_state: every qubit must be listed exactly once");
  if (kept.size() < 2)
    throw std::invalid_argument("extract_kept_state: need at least two kept qubits");

  // Overlap with <x_o| on each collapsed qubit: <x_o|b> = (-1)^(o*b)/sqrt(2).
  const std::size_t kd = std::size_t{1} << kept.size();
  std::vector<Complex> out(kd, Complex{});
  const double scale = std::pow(2.0, -0.5 * static_cast<double>(x_collapsed.size()));
  for (std::uint64_t i = 0; i < reg.dim(); ++i) {
    const Complex& a = reg.amplitudes()[i];
    if (a == Complex{}) continue;
    int sign = 1;
    for (auto& [q, o] : x_collapsed)
      if (o == 1 && (i & reg.qubit_mask(q))) sign = -sign;
    std::uint64_t pattern = 0;
    for (int q : kept) pattern = (pattern << 1) | ((i & reg.qubit_mask(q)) ? 1u : 0u);
    out[pattern] += static_cast<double>(sign) * scale * a;
  }
  const double p = norm_squared(out);
  if (p < 1e-15)
    throw std::invalid_argument("extract_kept_state: collapsed outcomes have zero probability");
  const double inv = 1.0 / std::sqrt(p);
  for (Complex& a : out) a *= inv;
  return QuantumRegister(static_cast<int>(kept.size()), std::move(out));
}

}  // namespace ghznet
