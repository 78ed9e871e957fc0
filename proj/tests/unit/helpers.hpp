#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "phasekick/circuit.hpp"
#include "phasekick/kickback.hpp"

namespace testutil {

using namespace phasekick;

inline Complex randc(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return Complex(g(rng), g(rng));
}

inline StateVector random_state(int n, std::mt19937_64& rng) {
  std::vector<Complex> a(std::size_t(1) << n);
  double norm2 = 0.0;
  for (Complex& v : a) {
    v = randc(rng);
    norm2 += std::norm(v);
  }
  const double s = 1.0 / std::sqrt(norm2);
  for (Complex& v : a) v *= s;
  return StateVector(n, std::move(a));
}

/// Haar-ish random unitary via QR with phase-fixed diagonal.
inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = randc(rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex d = rr(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

/// kron with the low-bit factor second: index = iA * dimB + iB, so B lives
/// on the lower qubits.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index ra = 0; ra < a.rows(); ++ra)
    for (Eigen::Index ca = 0; ca < a.cols(); ++ca)
      out.block(ra * b.rows(), ca * b.cols(), b.rows(), b.cols()) =
          a(ra, ca) * b;
  return out;
}

/// Full-space matrix of a gate, built column by column with direct index
/// arithmetic. Independent of the simulator's gather/scatter kernel.
inline Matrix embed_oracle(const GateOp& g, int n) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  Matrix full = Matrix::Zero(dim, dim);
  const Matrix m = g.target_matrix();
  const int k = static_cast<int>(g.targets.size());
  for (Eigen::Index x = 0; x < dim; ++x) {
    bool active = true;
    for (const Control& ctl : g.controls)
      if (int((x >> ctl.qubit) & 1) != ctl.polarity) active = false;
    if (!active) {
      full(x, x) = 1.0;
      continue;
    }
    Eigen::Index in = 0;
    for (int b = 0; b < k; ++b) in |= ((x >> g.targets[b]) & 1) << b;
    for (Eigen::Index out = 0; out < (Eigen::Index(1) << k); ++out) {
      Eigen::Index y = x;
      for (int b = 0; b < k; ++b) {
        y &= ~(Eigen::Index(1) << g.targets[b]);
        y |= ((out >> b) & 1) << g.targets[b];
      }
      full(y, x) += m(out, in);
    }
  }
  return full;
}

inline Matrix circuit_matrix_oracle(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index(1) << c.num_qubits();
  Matrix m = Matrix::Identity(dim, dim);
  for (const GateOp& op : c.ops()) m = embed_oracle(op, c.num_qubits()) * m;
  return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double tvd(const std::vector<double>& p, const std::vector<double>& q) {
  REQUIRE(p.size() == q.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

inline StateVector state_from(std::vector<Complex> amps) {
  int n = 0;
  while ((std::size_t(1) << n) < amps.size()) ++n;
  return StateVector(n, std::move(amps));
}

/// 1-qubit diagonal unitary diag(e^{2 pi i phi}, e^{2 pi i theta}).
inline Circuit diagonal_unitary(double phi, double theta) {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, kTwoPi * phi);
  u(1, 1) = std::polar(1.0, kTwoPi * theta);
  Circuit c(1, "diag-u");
  c.add(gates::unitary(u, {0}));
  return c;
}

/// Multi-qubit diagonal unitary from per-index phases (fractions of a turn).
inline Circuit diagonal_unitary_n(int n, const std::vector<double>& phases) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  REQUIRE(static_cast<Eigen::Index>(phases.size()) == dim);
  Matrix u = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    u(i, i) = std::polar(1.0, kTwoPi * phases[i]);
  std::vector<int> targets;
  for (int q = 0; q < n; ++q) targets.push_back(q);
  Circuit c(n, "diag-u");
  c.add(gates::unitary(u, targets));
  return c;
}

inline Circuit x_prep(int n, std::uint64_t target_basis) {
  Circuit w(n, "prep");
  for (int q = 0; q < n; ++q)
    if (bit_of(target_basis, q)) w.add(gates::x(q));
  return w;
}

/// The canonical 1-qubit gadget input: |ref> = |0> with eigenphase phi,
/// W = X, target |1> with eigenphase theta.
inline KickbackSpec diag_kickback_spec(double theta, double phi) {
  KickbackSpec spec(1, x_prep(1, 1), diagonal_unitary(phi, theta));
  spec.reference_phase = phi;
  return spec;
}

}  // namespace testutil
