#include "ghznet/bellcert.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghznet {

namespace {

void require_odd_n(int n, const char* what) {
  if (n < 3 || n % 2 == 0)
    throw std::domain_error(std::string(what) + " requires odd n >= 3 (got n = " +
                            std::to_string(n) + ")");
}

// Dense matrix of the operator. Every term maps |b> to a phase times
// |b_complement>, so the matrix is purely anti-diagonal-block structured.
Eigen::MatrixXcd dense_matrix(const BellOperator& op) {
  const std::size_t dim = std::size_t{1} << op.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  const std::uint64_t full = dim - 1;
  for (const PauliString& t : op.terms) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      Complex phase{static_cast<double>(t.sign), 0.0};
      for (int q = 1; q <= op.n; ++q) {
        const bool bit = col & (std::uint64_t{1} << (op.n - q));
        if (t.letters[static_cast<std::size_t>(q - 1)] == Pauli::Y)
          phase *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
      }
      m(static_cast<Eigen::Index>(col ^ full), static_cast<Eigen::Index>(col)) += phase;
    }
  }
  return m;
}

}  // namespace

QuantumRegister PauliString::apply(const QuantumRegister& reg) const {
  if (n() != reg.n_qubits())
    throw std::invalid_argument("PauliString length does not match register size");
  QuantumRegister out = reg;
  for (int q = 1; q <= n(); ++q) out = apply_pauli(out, q, letters[static_cast<std::size_t>(q - 1)]);
  if (sign == -1) {
    std::vector<Complex> amps = out.amplitudes();
    for (Complex& a : amps) a = -a;
    out = QuantumRegister(out.n_qubits(), std::move(amps));
  }
  return out;
}

double expectation(const PauliString& term, const QuantumRegister& reg) {
  const Complex v = inner_product(reg, term.apply(reg));
  if (std::abs(v.imag()) > 1e-10)
    throw std::logic_error("expectation of a Hermitian Pauli string came out complex");
  return v.real();
}

BellOperator build_bell_operator(int n) {
  require_odd_n(n, "build_bell_operator");
  BellOperator op;
  op.n = n;
  op.terms.reserve(static_cast<std::size_t>(n) + 1);
  op.terms.push_back(PauliString{std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::X), +1});
  for (int i = 1; i <= n; ++i) {
    PauliString t{std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::X), -1};
    const int next = i == n ? 1 : i + 1;  // n+1 = 1 (mod n)
    t.letters[static_cast<std::size_t>(i - 1)] = Pauli::Y;
    t.letters[static_cast<std::size_t>(next - 1)] = Pauli::Y;
    op.terms.push_back(std::move(t));
  }
  return op;
}

double expectation(const BellOperator& op, const QuantumRegister& reg) {
  if (op.n != reg.n_qubits())
    throw std::invalid_argument("Bell operator size does not match register");
  double sum = 0.0;
  for (const PauliString& t : op.terms) sum += expectation(t, reg);
  return sum;
}

SpectrumReport spectrum(const BellOperator& op) {
  if (op.n > 11)
    throw std::invalid_argument("spectrum: dense eigendecomposition limited to n <= 11");
  const Eigen::MatrixXcd m = dense_matrix(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigendecomposition failed");

  SpectrumReport report;
  const Eigen::VectorXd& vals = solver.eigenvalues();
  report.eigenvalues.assign(vals.data(), vals.data() + vals.size());

  report.lattice_ok = true;
  for (double v : report.eigenvalues) {
    const long nearest = std::lround(v);
    const bool on_lattice =
        std::abs(v - static_cast<double>(nearest)) <= kBornTol &&
        std::abs(nearest) <= op.n + 1 && (op.n + 1 - std::abs(nearest)) % 4 == 0;
    if (!on_lattice) report.lattice_ok = false;
    report.multiplicities[static_cast<int>(nearest)] += 1;
  }

  auto eigvec_register = [&](Eigen::Index col) {
    std::vector<Complex> amps(static_cast<std::size_t>(vals.size()));
    for (Eigen::Index r = 0; r < vals.size(); ++r)
      amps[static_cast<std::size_t>(r)] = solver.eigenvectors()(r, col);
    return QuantumRegister(op.n, std::move(amps));
  };
  const double f_top = fidelity(eigvec_register(vals.size() - 1), ghz_state(op.n, Sign::plus));
  const double f_bot = fidelity(eigvec_register(0), ghz_state(op.n, Sign::minus));
  report.extremal_eigenvector_fidelity_to_ghz = std::min(f_top, f_bot);

  const auto top = report.multiplicities.find(op.n + 1);
  const auto bot = report.multiplicities.find(-(op.n + 1));
  report.extremal_nondegenerate = top != report.multiplicities.end() && top->second == 1 &&
                                  bot != report.multiplicities.end() && bot->second == 1;
  return report;
}

LrResult lr_max(int n) {
  require_odd_n(n, "lr_max");
  if (n > 9) throw std::invalid_argument("lr_max: enumeration limited to n <= 9");
  const std::uint64_t combos = std::uint64_t{1} << n;
  LrResult best;
  best.max_value = -(n + 1) - 1;
  for (std::uint64_t xm = 0; xm < combos; ++xm) {
    int v0 = 1;
    for (int i = 0; i < n; ++i) v0 *= (xm >> i) & 1 ? -1 : 1;
    for (std::uint64_t ym = 0; ym < combos; ++ym) {
      // v(O_i) = v0 * x_i x_{i+1} y_i y_{i+1}; value = v0 - sum_i v(O_i).
      int value = v0;
      for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const int xi = (xm >> i) & 1 ? -1 : 1;
        const int xj = (xm >> j) & 1 ? -1 : 1;
        const int yi = (ym >> i) & 1 ? -1 : 1;
        const int yj = (ym >> j) & 1 ? -1 : 1;
        value -= v0 * xi * xj * yi * yj;
      }
      if (value > best.max_value) {
        best.max_value = value;
        best.assignment.clear();
        for (int i = 0; i < n; ++i)
          best.assignment.emplace_back((xm >> i) & 1 ? -1 : 1, (ym >> i) & 1 ? -1 : 1);
      }
    }
  }
  return best;
}

SelfTestVerdict self_test(const StateSource& source, int n, long rounds, double threshold,
                          SplitMix64& rng) {
  require_odd_n(n, "self_test");
  if (rounds < n + 1)
    throw std::invalid_argument("self_test: need at least n+1 rounds to touch every setting");
  if (threshold <= 0.0) throw std::invalid_argument("self_test: threshold must be positive");

  const BellOperator op = build_bell_operator(n);
  double sum = 0.0;
  for (long r = 0; r < rounds; ++r) {
    QuantumRegister copy = source.draw(rng);
    if (copy.n_qubits() != n)
      throw std::invalid_argument("self_test: source emitted a state of the wrong size");
    const PauliString& term = op.terms[rng.next_below(static_cast<std::uint64_t>(n) + 1)];
    int product = 1;
    for (int q = 1; q <= n; ++q) {
      const MeasureBasis basis =
          term.letters[static_cast<std::size_t>(q - 1)] == Pauli::Y ? MeasureBasis::Y
                                                                    : MeasureBasis::X;
      MeasurementResult m = measure_basis(copy, {q}, basis, rng);
      if (m.outcome.bits[0] == 1) product = -product;
      copy = std::move(m.state);
    }
    sum += static_cast<double>(term.sign * product);
  }

  SelfTestVerdict verdict;
  verdict.rounds_used = rounds;
  verdict.threshold = threshold;
  verdict.estimate = static_cast<double>(n + 1) * (sum / static_cast<double>(rounds));
  verdict.epsilon_hat = static_cast<double>(n + 1) - verdict.estimate;
  verdict.accepted = verdict.epsilon_hat <= threshold;
  return verdict;
}

std::pair<double, double> fidelity_deficit_bounds(double epsilon, int n) {
  require_odd_n(n, "fidelity_deficit_bounds");
  if (epsilon < 0.0) throw std::domain_error("fidelity_deficit_bounds: epsilon must be >= 0");
  if (epsilon > 2.0 * (n + 1))
    throw std::domain_error("fidelity_deficit_bounds: epsilon exceeds the violation range");
  return {epsilon / (2.0 * (n - 1)), epsilon / 4.0};
}

int cyclic_anticorrelations(int n, std::uint64_t bits) {
  int f = 0;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const int bi = (bits >> (n - 1 - i)) & 1;
    const int bj = (bits >> (n - 1 - j)) & 1;
    f += bi ^ bj;
  }
  return f;
}

QuantumRegister pair_eigenstate(int n, std::uint64_t bits, Sign sign) {
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  const std::uint64_t comp = bits ^ full;
  if (bits == comp) throw std::invalid_argument("pair_eigenstate: bits equal their complement");
  std::vector<Complex> amps(std::size_t{1} << n, Complex{});
  const double r = 1.0 / std::sqrt(2.0);
  amps[bits] = Complex{r, 0.0};
  amps[comp] = Complex{sign == Sign::plus ? r : -r, 0.0};
  return QuantumRegister(n, std::move(amps));
}

int pair_eigenvalue(int n, std::uint64_t bits, Sign sign) {
  const int f = cyclic_anticorrelations(n, bits);
  const int magnitude = (n + 1) - 2 * f;
  return sign == Sign::plus ? magnitude : -magnitude;
}

std::vector<std::uint64_t> pair_representatives(int n, int f) {
  std::vector<std::uint64_t> reps;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t b = 0; b <= full; ++b) {
    if (b >= (b ^ full)) continue;  // keep the lexicographically smaller of each pair
    if (cyclic_anticorrelations(n, b) == f) reps.push_back(b);
  }
  return reps;
}

}  // namespace ghznet
