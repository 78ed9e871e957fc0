#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "phasekick/circuit.hpp"

namespace phasekick {

/// v = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta) for a 2x2 unitary v.
struct EulerZYZ {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

inline EulerZYZ euler_zyz(const Matrix& v) {
  if (v.rows() != 2 || v.cols() != 2 || !is_unitary(v))
    throw std::invalid_argument("euler_zyz needs a 2x2 unitary");
  EulerZYZ e;
  const double c = std::abs(v(0, 0));
  const double s = std::abs(v(1, 0));
  e.gamma = 2.0 * std::atan2(s, c);
  constexpr double kTiny = 1e-13;
  if (s <= kTiny) {
    // diagonal
    e.beta = std::arg(v(1, 1)) - std::arg(v(0, 0));
    e.delta = 0.0;
    e.alpha = 0.5 * (std::arg(v(0, 0)) + std::arg(v(1, 1)));
    e.gamma = 0.0;
  } else if (c <= kTiny) {
    // antidiagonal
    e.gamma = kPi;
    e.delta = 0.0;
    e.beta = std::arg(v(1, 0)) - std::arg(v(0, 1)) + kPi;
    e.alpha = 0.5 * (std::arg(v(0, 1)) + std::arg(v(1, 0)) - kPi);
  } else {
    const double a00 = std::arg(v(0, 0));
    const double a10 = std::arg(v(1, 0));
    const double a11 = std::arg(v(1, 1));
    e.alpha = 0.5 * (a00 + a11);
    e.beta = a10 - a00;
    e.delta = a11 - a10;
  }
  return e;
}

inline Matrix matrix_from_euler(const EulerZYZ& e) {
  const Complex i(0, 1);
  const double ch = std::cos(e.gamma / 2.0), sh = std::sin(e.gamma / 2.0);
  Matrix m(2, 2);
  m(0, 0) = std::exp(i * (e.alpha - (e.beta + e.delta) / 2.0)) * ch;
  m(0, 1) = -std::exp(i * (e.alpha - (e.beta - e.delta) / 2.0)) * sh;
  m(1, 0) = std::exp(i * (e.alpha + (e.beta - e.delta) / 2.0)) * sh;
  m(1, 1) = std::exp(i * (e.alpha + (e.beta + e.delta) / 2.0)) * ch;
  return m;
}

/// Principal square root of a 2x2 unitary (S with S*S = v, eigenphases
/// halved), via a complex Schur form so degenerate inputs are handled.
inline Matrix sqrt_unitary_2x2(const Matrix& v) {
  if (v.rows() != 2 || v.cols() != 2 || !is_unitary(v))
    throw std::invalid_argument("sqrt_unitary_2x2 needs a 2x2 unitary");
  Eigen::ComplexSchur<Matrix> schur(v);
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();
  const Complex s0 = std::polar(1.0, std::arg(t(0, 0)) / 2.0);
  const Complex s1 = std::polar(1.0, std::arg(t(1, 1)) / 2.0);
  Matrix r = Matrix::Zero(2, 2);
  r(0, 0) = s0;
  r(1, 1) = s1;
  // A unitary matrix is normal, so T is diagonal up to roundoff; fold any
  // residual upper entry through the triangular square-root relation.
  r(0, 1) = t(0, 1) / (s0 + s1);
  return q * r * q.adjoint();
}

namespace detail {

/// Controlled-v realized with exactly two two-qubit gates and single-qubit
/// gates, control polarity 1. Uses v = e^{i a} A X B X C with A B C = I:
/// circuit order C(t), CX, B(t), CX, A(t), Phase(a)(control).
inline void emit_controlled_1q(Circuit& out, const Matrix& v, int control,
                               int target) {
  const EulerZYZ e = euler_zyz(v);
  constexpr double kSkip = 1e-14;
  auto add_rz = [&](double angle) {
    if (std::abs(angle) > kSkip) out.add(gates::rz(angle, target));
  };
  auto add_ry = [&](double angle) {
    if (std::abs(angle) > kSkip) out.add(gates::ry(angle, target));
  };
  // C = Rz((delta-beta)/2)
  add_rz((e.delta - e.beta) / 2.0);
  out.add(gates::cx(control, target));
  // B = Ry(-gamma/2) Rz(-(delta+beta)/2)
  add_rz(-(e.delta + e.beta) / 2.0);
  add_ry(-e.gamma / 2.0);
  out.add(gates::cx(control, target));
  // A = Rz(beta) Ry(gamma/2)
  add_ry(e.gamma / 2.0);
  add_rz(e.beta);
  if (std::abs(e.alpha) > kSkip) out.add(gates::phase(e.alpha, control));
}

}  // namespace detail

/// Compiles the polarity-controlled version of a circuit down to 1- and
/// 2-qubit gates with a fixed decomposition rule:
///   - each single-qubit gate becomes exactly 2 two-qubit gates (plus
///     single-qubit gates),
///   - each two-qubit gate (a single-target gate with one control) becomes
///     exactly 6 two-qubit gates (plus single-qubit gates),
/// so the compiled two-qubit count is exactly 2*n1 + 6*n2 of the input.
///
/// The doubly-controlled construction takes S with S^2 = V and emits
/// CS(inner), CX(control,inner), CS^dag(inner), CX(control,inner), then the
/// remaining controlled-S on the new control expanded by the two-CNOT rule.
/// Open controls are normalized by X conjugation on the control wire, which
/// only adds single-qubit gates.
///
/// Two-target primitives (Swap, dense two-qubit blocks) and gates of arity
/// three or more are outside this model and must be decomposed by the caller.
inline Circuit compile_controlled(const Circuit& c, int control,
                                  int polarity) {
  if (polarity != 0 && polarity != 1)
    throw std::invalid_argument("control polarity must be 0 or 1");
  if (control < 0 || control >= c.num_qubits())
    throw std::invalid_argument(
        "control qubit must be allocated inside the circuit's register");
  for (const GateOp& op : c.ops()) {
    for (int t : op.targets)
      if (t == control) throw std::invalid_argument("control index collision");
    for (const Control& ctl : op.controls)
      if (ctl.qubit == control)
        throw std::invalid_argument("control index collision");
  }

  Circuit out(c.num_qubits(),
              c.label().empty() ? "controlled" : "controlled-" + c.label());
  if (polarity == 0) out.add(gates::x(control));
  for (const GateOp& op : c.ops()) {
    const int a = op.arity();
    if (a == 1) {
      detail::emit_controlled_1q(out, op.target_matrix(), control,
                                 op.targets[0]);
    } else if (a == 2 && op.targets.size() == 1) {
      const Control inner = op.controls[0];
      const int target = op.targets[0];
      if (inner.polarity == 0) out.add(gates::x(inner.qubit));
      const Matrix s = sqrt_unitary_2x2(op.target_matrix());
      out.add(gates::unitary(s, {target}).with_control(inner.qubit, 1));
      out.add(gates::cx(control, inner.qubit));
      out.add(gates::unitary(s.adjoint(), {target})
                  .with_control(inner.qubit, 1));
      out.add(gates::cx(control, inner.qubit));
      detail::emit_controlled_1q(out, s, control, target);
      if (inner.polarity == 0) out.add(gates::x(inner.qubit));
    } else if (a == 2) {
      throw std::invalid_argument(
          "two-target primitives must be decomposed before controlled "
          "compilation");
    } else {
      throw std::invalid_argument(
          "gates of arity >= 3 are outside the controlled-compilation model");
    }
  }
  if (polarity == 0) out.add(gates::x(control));
  return out;
}

}  // namespace phasekick
