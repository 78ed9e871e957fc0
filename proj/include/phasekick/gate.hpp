#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phasekick/core.hpp"

namespace phasekick {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Gate kinds. Everything except Unitary is a named primitive with a fixed
/// induced matrix; Unitary carries an explicit dense matrix over its targets.
enum class GateKind { H, X, Y, Z, Phase, RX, RY, RZ, Swap, Unitary };

/// A control wire with polarity: 1 conditions on |1> (the usual filled dot),
/// 0 conditions on |0> (an open control).
struct Control {
  int qubit = 0;
  int polarity = 1;
};

inline bool is_unitary(const Matrix& m, double tol = kUnitaryTol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  if (!m.allFinite()) return false;
  Matrix gram = m.adjoint() * m;
  gram -= Matrix::Identity(m.rows(), m.cols());
  return gram.cwiseAbs().maxCoeff() <= tol;
}

inline const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::Phase: return "phase";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::Swap: return "swap";
    case GateKind::Unitary: return "unitary";
  }
  return "?";
}

inline GateKind kind_from_name(std::string_view name) {
  if (name == "h") return GateKind::H;
  if (name == "x") return GateKind::X;
  if (name == "y") return GateKind::Y;
  if (name == "z") return GateKind::Z;
  if (name == "phase") return GateKind::Phase;
  if (name == "rx") return GateKind::RX;
  if (name == "ry") return GateKind::RY;
  if (name == "rz") return GateKind::RZ;
  if (name == "swap") return GateKind::Swap;
  if (name == "unitary") return GateKind::Unitary;
  throw std::invalid_argument("unknown gate kind: " + std::string(name));
}

inline int fixed_target_count(GateKind k) {
  return k == GateKind::Swap ? 2 : 1;  // Unitary handled separately
}

inline int param_count(GateKind k) {
  switch (k) {
    case GateKind::Phase:
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      return 1;
    default:
      return 0;
  }
}

/// One gate instance: a named primitive or dense unitary on `targets`,
/// conditioned on `controls`. Target order matters for multi-target gates:
/// target[b] is bit b of the induced matrix's row/column index.
struct GateOp {
  GateKind kind = GateKind::Unitary;
  std::vector<int> targets;
  std::vector<Control> controls;
  std::vector<double> params;
  Matrix matrix;  // GateKind::Unitary only

  int arity() const {
    return static_cast<int>(targets.size() + controls.size());
  }

  /// The 2^k x 2^k matrix acting on the target subspace (controls excluded).
  Matrix target_matrix() const {
    const Complex i(0.0, 1.0);
    Matrix m;
    switch (kind) {
      case GateKind::H: {
        m.resize(2, 2);
        const double s = 1.0 / std::sqrt(2.0);
        m << s, s, s, -s;
        return m;
      }
      case GateKind::X: {
        m.resize(2, 2);
        m << 0, 1, 1, 0;
        return m;
      }
      case GateKind::Y: {
        m.resize(2, 2);
        m << Complex(0, 0), -i, i, Complex(0, 0);
        return m;
      }
      case GateKind::Z: {
        m.resize(2, 2);
        m << 1, 0, 0, -1;
        return m;
      }
      case GateKind::Phase: {
        m.resize(2, 2);
        m << 1, 0, 0, std::polar(1.0, params.at(0));
        return m;
      }
      case GateKind::RX: {
        const double h = params.at(0) / 2.0;
        m.resize(2, 2);
        m << std::cos(h), -i * std::sin(h), -i * std::sin(h), std::cos(h);
        return m;
      }
      case GateKind::RY: {
        const double h = params.at(0) / 2.0;
        m.resize(2, 2);
        m << std::cos(h), -std::sin(h), std::sin(h), std::cos(h);
        return m;
      }
      case GateKind::RZ: {
        const double h = params.at(0) / 2.0;
        m.resize(2, 2);
        m << std::polar(1.0, -h), 0, 0, std::polar(1.0, h);
        return m;
      }
      case GateKind::Swap: {
        m = Matrix::Zero(4, 4);
        m(0, 0) = 1;
        m(1, 2) = 1;
        m(2, 1) = 1;
        m(3, 3) = 1;
        return m;
      }
      case GateKind::Unitary:
        return matrix;
    }
    throw std::logic_error("unreachable gate kind");
  }

  /// Inverse gate: same wires, conjugate-transposed action.
  GateOp adjoint() const {
    GateOp g = *this;
    switch (kind) {
      case GateKind::Phase:
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ:
        g.params[0] = -params[0];
        break;
      case GateKind::Unitary:
        g.matrix = matrix.adjoint();
        break;
      default:
        break;  // H, X, Y, Z, Swap are self-inverse
    }
    return g;
  }

  GateOp with_control(int qubit, int polarity) const {
    if (polarity != 0 && polarity != 1)
      throw std::invalid_argument("control polarity must be 0 or 1");
    for (int t : targets)
      if (t == qubit)
        throw std::invalid_argument("overlapping target/control qubit");
    for (const Control& c : controls)
      if (c.qubit == qubit)
        throw std::invalid_argument("duplicate control qubit");
    GateOp g = *this;
    g.controls.push_back(Control{qubit, polarity});
    return g;
  }

  /// Context-free validity: wire disjointness, parameter arity, finiteness,
  /// and unitarity of explicit matrices.
  void check_structure() const {
    if (targets.empty()) throw std::invalid_argument("gate has no targets");
    for (std::size_t a = 0; a < targets.size(); ++a) {
      if (targets[a] < 0) throw std::invalid_argument("negative qubit index");
      for (std::size_t b = a + 1; b < targets.size(); ++b)
        if (targets[a] == targets[b])
          throw std::invalid_argument("duplicate target qubit");
    }
    for (std::size_t a = 0; a < controls.size(); ++a) {
      if (controls[a].qubit < 0)
        throw std::invalid_argument("negative qubit index");
      if (controls[a].polarity != 0 && controls[a].polarity != 1)
        throw std::invalid_argument("control polarity must be 0 or 1");
      for (std::size_t b = a + 1; b < controls.size(); ++b)
        if (controls[a].qubit == controls[b].qubit)
          throw std::invalid_argument("duplicate control qubit");
      for (int t : targets)
        if (controls[a].qubit == t)
          throw std::invalid_argument("overlapping target/control qubit");
    }
    if (kind != GateKind::Unitary) {
      if (static_cast<int>(targets.size()) != fixed_target_count(kind))
        throw std::invalid_argument("wrong target count for named gate");
      if (static_cast<int>(params.size()) != param_count(kind))
        throw std::invalid_argument("wrong parameter count for named gate");
      for (double p : params)
        if (!std::isfinite(p))
          throw std::invalid_argument("non-finite gate parameter");
    } else {
      const Eigen::Index dim = Eigen::Index(1) << targets.size();
      if (matrix.rows() != dim || matrix.cols() != dim)
        throw std::invalid_argument("matrix dimension does not match targets");
      if (!is_unitary(matrix))
        throw std::invalid_argument("matrix is not unitary within tolerance");
    }
  }
};

namespace gates {

inline GateOp make_named(GateKind kind, std::vector<int> targets,
                         std::vector<double> params = {}) {
  GateOp g;
  g.kind = kind;
  g.targets = std::move(targets);
  g.params = std::move(params);
  g.check_structure();
  return g;
}

inline GateOp h(int target) { return make_named(GateKind::H, {target}); }
inline GateOp x(int target) { return make_named(GateKind::X, {target}); }
inline GateOp y(int target) { return make_named(GateKind::Y, {target}); }
inline GateOp z(int target) { return make_named(GateKind::Z, {target}); }

/// diag(1, e^{i lambda}) on `target`.
inline GateOp phase(double lambda, int target) {
  return make_named(GateKind::Phase, {target}, {lambda});
}
inline GateOp rx(double angle, int target) {
  return make_named(GateKind::RX, {target}, {angle});
}
inline GateOp ry(double angle, int target) {
  return make_named(GateKind::RY, {target}, {angle});
}
inline GateOp rz(double angle, int target) {
  return make_named(GateKind::RZ, {target}, {angle});
}
inline GateOp swap(int a, int b) {
  return make_named(GateKind::Swap, {a, b});
}

inline GateOp cx(int control, int target) {
  return x(target).with_control(control, 1);
}
inline GateOp cz(int control, int target) {
  return z(target).with_control(control, 1);
}
inline GateOp cphase(double lambda, int control, int target) {
  return phase(lambda, target).with_control(control, 1);
}

/// Explicit dense unitary over `targets` (row/column bit b <-> targets[b]).
inline GateOp unitary(Matrix m, std::vector<int> targets) {
  GateOp g;
  g.kind = GateKind::Unitary;
  g.targets = std::move(targets);
  g.matrix = std::move(m);
  g.check_structure();
  return g;
}

}  // namespace gates

}  // namespace phasekick
