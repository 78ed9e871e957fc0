#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "phasekick/circuit.hpp"

namespace phasekick {

/// A circuit whose action on |0...0> equals `target` (within 1e-10,
/// including phase).
///
/// Computational basis states come out as plain X gates on the set bits.
/// Anything else is completed deterministically to a dense unitary whose
/// first column is the target, as a phase times a Householder reflection:
/// with mu = t0/|t0| (1 when t0 = 0) and u = target - mu*e0,
///   W = mu * (I - 2 u u^dag / |u|^2),  W e0 = target.
inline Circuit state_prep_unitary(const StateVector& target) {
  const int n = target.num_qubits();
  Circuit c(n, "state-prep");

  int nonzero = 0;
  std::uint64_t basis = 0;
  for (std::uint64_t i = 0; i < target.size(); ++i) {
    if (std::abs(target[i]) > 1e-12) {
      ++nonzero;
      basis = i;
    }
  }
  if (nonzero == 1 && std::abs(target[basis] - Complex(1, 0)) <= 1e-12) {
    for (int q = 0; q < n; ++q)
      if (bit_of(basis, q)) c.add(gates::x(q));
    return c;
  }

  const Eigen::Index dim = Eigen::Index(1) << n;
  Eigen::Map<const Vector> t(target.amps().data(), dim);
  const Complex t0 = t(0);
  const Complex mu = std::abs(t0) == 0.0 ? Complex(1, 0) : t0 / std::abs(t0);
  Vector u = t;
  u(0) -= mu;
  const double nu2 = u.squaredNorm();
  Matrix w;
  if (nu2 < 1e-24) {
    w = mu * Matrix::Identity(dim, dim);
  } else {
    w = mu * (Matrix::Identity(dim, dim) - (2.0 / nu2) * (u * u.adjoint()));
  }
  std::vector<int> targets(n);
  std::iota(targets.begin(), targets.end(), 0);
  c.add(gates::unitary(std::move(w), std::move(targets)));
  return c;
}

}  // namespace phasekick
