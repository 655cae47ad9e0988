#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "ghznet/adversary.hpp"
#include "ghznet/bellcert.hpp"
#include "ghznet/qstate.hpp"
#include "test_support.hpp"

using namespace ghznet;
using ghznet::test::random_register;

namespace {

// sum_t sign_t P_t |psi> as raw amplitudes (the sum is not normalized).
std::vector<Complex> bell_apply(const BellOperator& op, const QuantumRegister& psi) {
  std::vector<Complex> out(psi.dim(), Complex{});
  for (const PauliString& term : op.terms) {
    const QuantumRegister applied = term.apply(psi);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += applied.amplitudes()[i];
  }
  return out;
}

Complex raw_inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Independent eigenvalue-multiset oracle: every eigenvector is a +- pair of
// complementary bit strings, and its eigenvalue is +-[(n+1) - 2f] where f
// counts cyclic neighbor disagreements. Enumerate the strings directly.
std::map<int, int> oracle_multiplicities(int n) {
  std::map<int, int> mult;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t b = 0; b <= full; ++b) {
    if (b >= (b ^ full)) continue;
    int f = 0;
    for (int i = 0; i < n; ++i) {
      const int bi = (b >> (n - 1 - i)) & 1;
      const int bj = (b >> (n - 1 - ((i + 1) % n))) & 1;
      f += bi ^ bj;
    }
    const int magnitude = (n + 1) - 2 * f;
    mult[magnitude] += 1;
    mult[-magnitude] += 1;
  }
  return mult;
}

}  // namespace

TEST_CASE("operator terms follow the cyclic construction") {
  const BellOperator op3 = build_bell_operator(3);
  REQUIRE(op3.terms.size() == 4);
  CHECK(op3.terms[0].sign == 1);
  CHECK(op3.terms[0].letters == std::vector<Pauli>{Pauli::X, Pauli::X, Pauli::X});
  CHECK(op3.terms[1].sign == -1);
  CHECK(op3.terms[1].letters == std::vector<Pauli>{Pauli::Y, Pauli::Y, Pauli::X});
  CHECK(op3.terms[2].letters == std::vector<Pauli>{Pauli::X, Pauli::Y, Pauli::Y});
  CHECK(op3.terms[3].letters == std::vector<Pauli>{Pauli::Y, Pauli::X, Pauli::Y});

  const BellOperator op5 = build_bell_operator(5);
  REQUIRE(op5.terms.size() == 6);
  CHECK(op5.terms[5].letters ==
        std::vector<Pauli>{Pauli::Y, Pauli::X, Pauli::X, Pauli::X, Pauli::Y});
  CHECK(op5.terms[5].sign == -1);

  CHECK_THROWS_AS(build_bell_operator(2), std::domain_error);
  CHECK_THROWS_AS(build_bell_operator(4), std::domain_error);
}

TEST_CASE("ghz states reach the algebraic optimum") {
  CHECK(expectation(build_bell_operator(3), ghz_state(3, Sign::plus)) ==
        doctest::Approx(4.0).epsilon(1e-10));
  CHECK(expectation(build_bell_operator(3), ghz_state(3, Sign::minus)) ==
        doctest::Approx(-4.0).epsilon(1e-10));
  CHECK(expectation(build_bell_operator(5), ghz_state(5, Sign::plus)) ==
        doctest::Approx(6.0).epsilon(1e-10));
  CHECK_THROWS_AS(expectation(build_bell_operator(3), ghz_state(5, Sign::plus)),
                  std::invalid_argument);
}

TEST_CASE("stabilizer relations hold exactly") {
  for (int n : {3, 5, 7}) {
    const BellOperator op = build_bell_operator(n);
    const QuantumRegister plus = ghz_state(n, Sign::plus);
    for (std::size_t t = 0; t < op.terms.size(); ++t) {
      PauliString raw = op.terms[t];
      raw.sign = +1;
      const double want = t == 0 ? 1.0 : -1.0;
      CHECK(expectation(raw, plus) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("operator is hermitian on random vectors") {
  SplitMix64 rng(17);
  const BellOperator op = build_bell_operator(5);
  for (int trial = 0; trial < 10; ++trial) {
    const QuantumRegister a = random_register(5, rng);
    const QuantumRegister b = random_register(5, rng);
    const Complex ab = raw_inner(a.amplitudes(), bell_apply(op, b));
    const Complex ba = raw_inner(b.amplitudes(), bell_apply(op, a));
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
  }
}

TEST_CASE("spectrum matches the pair-enumeration oracle") {
  for (int n : {3, 5, 7, 9}) {
    const SpectrumReport report = spectrum(build_bell_operator(n));
    CHECK(report.lattice_ok);
    CHECK(report.extremal_nondegenerate);
    CHECK(report.extremal_eigenvector_fidelity_to_ghz >= 1.0 - 1e-9);
    const std::map<int, int> oracle = oracle_multiplicities(n);
    CHECK(report.multiplicities == oracle);
    int total = 0;
    for (auto [value, count] : report.multiplicities) total += count;
    CHECK(total == (1 << n));
  }
}

TEST_CASE("spectrum for three agents is {4, 0 x6, -4}") {
  const SpectrumReport report = spectrum(build_bell_operator(3));
  const std::map<int, int> expected{{4, 1}, {0, 6}, {-4, 1}};
  CHECK(report.multiplicities == expected);
}

TEST_CASE("spectrum rejects oversized problems") {
  BellOperator op = build_bell_operator(11);
  op.n = 13;  // forged size only to exercise the guard
  CHECK_THROWS_AS(spectrum(op), std::invalid_argument);
}

TEST_CASE("local-realistic maximum is n-1 with a verifiable witness") {
  for (int n : {3, 5, 7}) {
    const LrResult lr = lr_max(n);
    CHECK(lr.max_value == n - 1);
    CHECK(lr.max_value < n + 1);  // strict quantum advantage
    REQUIRE(lr.assignment.size() == static_cast<std::size_t>(n));
    // Recompute the witness value independently.
    int v0 = 1;
    for (auto [x, y] : lr.assignment) v0 *= x;
    int value = v0;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      int vi = v0;
      vi *= lr.assignment[static_cast<std::size_t>(i)].first *
            lr.assignment[static_cast<std::size_t>(j)].first;
      vi *= lr.assignment[static_cast<std::size_t>(i)].second *
            lr.assignment[static_cast<std::size_t>(j)].second;
      value -= vi;
    }
    CHECK(value == lr.max_value);
  }
  CHECK_THROWS_AS(lr_max(11), std::invalid_argument);
  CHECK_THROWS_AS(lr_max(4), std::domain_error);
}

TEST_CASE("pair eigenstates are exact eigenvectors") {
  for (int n : {3, 5}) {
    const BellOperator op = build_bell_operator(n);
    for (std::uint64_t bits : pair_representatives(n, 2)) {
      for (Sign sign : {Sign::plus, Sign::minus}) {
        const QuantumRegister v = pair_eigenstate(n, bits, sign);
        const int lambda = pair_eigenvalue(n, bits, sign);
        const std::vector<Complex> applied = bell_apply(op, v);
        for (std::size_t i = 0; i < applied.size(); ++i)
          CHECK(std::abs(applied[i] - static_cast<double>(lambda) * v.amplitudes()[i]) < 1e-10);
      }
    }
  }
}

TEST_CASE("self test accepts an ideal source with a perfect score") {
  SplitMix64 rng(2024);
  const IdealGhzSource source(3);
  const SelfTestVerdict verdict = self_test(source, 3, 500, 0.1, rng);
  CHECK(verdict.estimate == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(verdict.epsilon_hat == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(verdict.accepted);
  CHECK(verdict.rounds_used == 500);
}

TEST_CASE("self test rejects a product-state source") {
  SplitMix64 rng(2025);
  const FixedStateSource source(QuantumRegister::computational_basis(3, 0));
  const SelfTestVerdict verdict = self_test(source, 3, 20000, 0.5, rng);
  // Every term of the operator flips all bits, so |000> gives expectation 0.
  CHECK(std::abs(verdict.estimate) < 0.2);
  CHECK_FALSE(verdict.accepted);
}

TEST_CASE("self test preconditions") {
  SplitMix64 rng(1);
  const IdealGhzSource source(3);
  CHECK_THROWS_AS(self_test(source, 3, 0, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(self_test(source, 3, 3, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(self_test(source, 3, 100, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(self_test(source, 5, 100, 0.1, rng), std::invalid_argument);
}

TEST_CASE("self test converges to the mixture expectation") {
  // Mixture with zero-eigenvalue junk: exact expectation 4(1-delta).
  const double delta = 0.2;
  const NoiseSpec spec = NoiseSpec::from_delta(3, delta, junk_pair_state(3, 0b001, Sign::plus));
  REQUIRE(spec.exact_expectation() == doctest::Approx(4.0 * (1.0 - delta)).epsilon(1e-12));
  NoisyGhzSource source(spec);
  SplitMix64 rng(77);
  const long rounds = 100000;
  const SelfTestVerdict verdict = self_test(source, 3, rounds, 4.0, rng);
  const double mean = verdict.estimate / 4.0;
  const double se = 4.0 * std::sqrt((1.0 - mean * mean) / static_cast<double>(rounds));
  CHECK(std::abs(verdict.estimate - 4.0 * (1.0 - delta)) < 5.0 * se);
}

TEST_CASE("fidelity deficit window") {
  const auto [lo3, hi3] = fidelity_deficit_bounds(0.4, 3);
  CHECK(lo3 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(hi3 == doctest::Approx(0.1).epsilon(1e-12));
  const auto [lo0, hi0] = fidelity_deficit_bounds(0.0, 7);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == 0.0);
  const auto [lo5, hi5] = fidelity_deficit_bounds(0.8, 5);
  CHECK(lo5 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(hi5 == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(fidelity_deficit_bounds(-0.1, 3), std::domain_error);
  CHECK_THROWS_AS(fidelity_deficit_bounds(9.0, 3), std::domain_error);
}
