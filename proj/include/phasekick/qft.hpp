#pragma once

#include <stdexcept>

#include "phasekick/circuit.hpp"

namespace phasekick {

/// Quantum Fourier transform on m qubits, including the final swap layer, so
/// that the realized unitary equals the DFT matrix F(j,k) = w^{jk}/sqrt(2^m)
/// with w = exp(2*pi*i/2^m) under the library's bit ordering (qubit 0 = least
/// significant index bit).
///
/// Worked 3-bit example: F maps |j> to the product state
///   (|0> + e^{2 pi i j/2}|1>)_q2 (|0> + e^{2 pi i j/4}|1>)_q1
///   (|0> + e^{2 pi i j/8}|1>)_q0  (up to 1/sqrt(8)),
/// i.e. qubit t carries the phase j/2^{m-t}; reading qubits from highest to
/// lowest index spells the binary fraction of j/2^m most-significant bit
/// first.
inline Circuit fourier_transform(int m) {
  if (m < 1 || m > kMaxQubits)
    throw std::invalid_argument("qft size out of range");
  Circuit c(m, "qft");
  for (int q = m - 1; q >= 0; --q) {
    c.add(gates::h(q));
    for (int p = q - 1; p >= 0; --p)
      c.add(gates::cphase(kPi / double(std::uint64_t(1) << (q - p)), p, q));
  }
  for (int q = 0; q < m / 2; ++q) c.add(gates::swap(q, m - 1 - q));
  return c;
}

/// Adjoint of fourier_transform: equals the conjugate transpose of the DFT
/// matrix. Applied to a product Fourier state carrying an exact phase j/2^m
/// it returns the basis state |j>.
inline Circuit inverse_qft(int m) {
  Circuit c = invert(fourier_transform(m));
  c.set_label("iqft");
  return c;
}

}  // namespace phasekick
