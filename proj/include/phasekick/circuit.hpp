#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phasekick/gate.hpp"
#include "phasekick/statevector.hpp"

namespace phasekick {

/// An ordered gate sequence over a fixed qubit count. Circuits are plain
/// values: transformations return new circuits and never mutate their input.
class Circuit {
 public:
  explicit Circuit(int num_qubits, std::string label = "")
      : num_qubits_(num_qubits), label_(std::move(label)) {
    if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
    if (num_qubits > kMaxQubits)
      throw std::invalid_argument("qubit count exceeds the dense-simulation cap of 22");
  }

  void add(GateOp op) {
    op.check_structure();
    for (int t : op.targets)
      if (t >= num_qubits_)
        throw std::invalid_argument("qubit index out of range");
    for (const Control& c : op.controls)
      if (c.qubit >= num_qubits_)
        throw std::invalid_argument("qubit index out of range");
    ops_.push_back(std::move(op));
  }

  Circuit& operator<<(GateOp op) {
    add(std::move(op));
    return *this;
  }

  /// Appends another circuit's gates in order. The source may act on fewer
  /// qubits; its indices are taken verbatim.
  void extend(const Circuit& other) {
    if (other.num_qubits_ > num_qubits_)
      throw std::invalid_argument("circuit qubit counts do not match");
    for (const GateOp& op : other.ops_) ops_.push_back(op);
  }

  int num_qubits() const { return num_qubits_; }
  const std::vector<GateOp>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  int num_qubits_;
  std::vector<GateOp> ops_;
  std::string label_;
};

inline StateVector apply_circuit(const StateVector& sv, const Circuit& c) {
  if (c.num_qubits() != sv.num_qubits())
    throw std::invalid_argument("circuit qubit counts do not match");
  StateVector out = sv;
  for (const GateOp& op : c.ops()) out = apply_gate(out, op);
  return out;
}

/// Gate tallies by total arity (targets + controls). Only 1- and 2-qubit
/// gates are costed; anything wider lands in `rejected`.
struct GateCountReport {
  long long n1 = 0;
  long long n2 = 0;
  long long rejected = 0;
};

inline GateCountReport count_gates(const Circuit& c) {
  GateCountReport r;
  for (const GateOp& op : c.ops()) {
    const int a = op.arity();
    if (a == 1)
      ++r.n1;
    else if (a == 2)
      ++r.n2;
    else
      ++r.rejected;
  }
  return r;
}

/// The circuit repeated k times. k = 0 is rejected: an identity circuit has
/// to be requested explicitly.
inline Circuit power(const Circuit& c, long long k) {
  if (k < 1) throw std::invalid_argument("power exponent must be >= 1");
  Circuit out(c.num_qubits(), c.label());
  for (long long rep = 0; rep < k; ++rep) out.extend(c);
  return out;
}

inline Circuit invert(const Circuit& c) {
  Circuit out(c.num_qubits(), c.label().empty() ? "" : c.label() + "-dagger");
  for (auto it = c.ops().rbegin(); it != c.ops().rend(); ++it)
    out.add(it->adjoint());
  return out;
}

/// Semantic controlled version: every gate gains the extra control wire.
/// This is how controlled sub-circuits enter the simulator; the decomposed
/// form lives in compile_controlled and is used only for cost accounting.
inline Circuit with_control(const Circuit& c, int control, int polarity) {
  const int n = std::max(c.num_qubits(), control + 1);
  Circuit out(n, c.label());
  for (const GateOp& op : c.ops()) out.add(op.with_control(control, polarity));
  return out;
}

/// Rewires a circuit onto new qubit indices: old qubit q becomes map[q].
inline Circuit remap_qubits(const Circuit& c, const std::vector<int>& map,
                            int new_num_qubits) {
  if (map.size() != std::size_t(c.num_qubits()))
    throw std::invalid_argument("qubit map size does not match circuit");
  std::vector<int> seen;
  for (int q : map) {
    if (q < 0 || q >= new_num_qubits)
      throw std::invalid_argument("qubit index out of range");
    if (std::find(seen.begin(), seen.end(), q) != seen.end())
      throw std::invalid_argument("qubit map is not injective");
    seen.push_back(q);
  }
  Circuit out(new_num_qubits, c.label());
  for (GateOp op : c.ops()) {
    for (int& t : op.targets) t = map[t];
    for (Control& ctl : op.controls) ctl.qubit = map[ctl.qubit];
    out.add(std::move(op));
  }
  return out;
}

inline void append(Circuit& dst, const Circuit& src) { dst.extend(src); }

inline void append_with_control(Circuit& dst, const Circuit& src, int control,
                                int polarity) {
  for (const GateOp& op : src.ops())
    dst.add(op.with_control(control, polarity));
}

/// Full 2^n unitary realized by the circuit (column x = circuit applied to
/// basis state |x>). Desk-scale only.
inline Matrix circuit_to_matrix(const Circuit& c) {
  const std::uint64_t dim = std::uint64_t(1) << c.num_qubits();
  Matrix m(dim, dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    StateVector col =
        apply_circuit(StateVector::basis_state(c.num_qubits(), x), c);
    for (std::uint64_t y = 0; y < dim; ++y) m(y, x) = col[y];
  }
  return m;
}

}  // namespace phasekick
