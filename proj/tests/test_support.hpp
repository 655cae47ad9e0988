#pragma once

// Shared test helpers. The oracle routines recompute Born quantities from
// first principles (explicit basis-vector overlaps) and stay independent of
// the projection path inside the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ghznet/qstate.hpp"
#include "ghznet/rng.hpp"

namespace ghznet::test {

inline QuantumRegister random_register(int n, SplitMix64& rng) {
  std::vector<Complex> amps(std::size_t{1} << n);
  double norm2 = 0.0;
  for (Complex& a : amps) {
    // Box-Muller pairs give an isotropic Gaussian vector.
    const double u1 = std::max(rng.next_double(), 1e-12);
    const double u2 = rng.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    a = Complex{r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (Complex& a : amps) a *= inv;
  return QuantumRegister(n, std::move(amps));
}

// <pattern|psi> where every qubit is read in the X or Y eigenbasis and
// pattern bit 0 encodes the +1 eigenstate. Direct overlap sum.
inline Complex oracle_basis_amplitude(const QuantumRegister& psi, std::uint64_t pattern,
                                      MeasureBasis basis) {
  const int n = psi.n_qubits();
  const double root = std::pow(2.0, -0.5 * n);
  Complex total{};
  for (std::uint64_t b = 0; b < psi.dim(); ++b) {
    Complex factor{1.0, 0.0};
    for (int q = 0; q < n; ++q) {
      const int ob = (pattern >> (n - 1 - q)) & 1;
      const int bb = (b >> (n - 1 - q)) & 1;
      if (basis == MeasureBasis::X) {
        if (ob == 1 && bb == 1) factor = -factor;
      } else {
        // <y_o|0> = 1/sqrt2, <y_0|1> = -i/sqrt2, <y_1|1> = +i/sqrt2
        if (bb == 1) factor *= ob == 0 ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
      }
    }
    total += factor * psi.amplitudes()[b];
  }
  return root * total;
}

// Exact all-qubit outcome distribution computed via the overlap oracle.
inline std::vector<double> oracle_distribution(const QuantumRegister& psi, MeasureBasis basis) {
  std::vector<double> probs(psi.dim());
  for (std::uint64_t o = 0; o < psi.dim(); ++o)
    probs[o] = std::norm(oracle_basis_amplitude(psi, o, basis));
  return probs;
}

inline int popcount_parity(std::uint64_t v) {
  int p = 0;
  while (v) {
    p ^= static_cast<int>(v & 1);
    v >>= 1;
  }
  return p;
}

}  // namespace ghznet::test
