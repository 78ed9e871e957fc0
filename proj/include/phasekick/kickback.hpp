#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "phasekick/circuit.hpp"

namespace phasekick {

enum class KickbackVariant { standard, uncontrolled };

/// Inputs for the single-ancilla primitives.
///
/// `prep` (W) maps the reference state to the target eigenstate; `unitary`
/// (U) is the operator whose eigenphase difference is read out. The reference
/// must be an eigenstate of U with eigenphase `reference_phase` (a fraction
/// of a full turn, in [0,1)); this is checked by simulation when a spec is
/// validated. The target eigenstate itself never needs to be written down —
/// only W does.
struct KickbackSpec {
  int system_qubits = 1;
  Circuit prep;     // W
  Circuit unitary;  // U
  std::uint64_t reference_basis = 0;
  std::optional<StateVector> reference_state;  // overrides reference_basis
  double reference_phase = 0.0;                // phi in [0,1)
  KickbackVariant variant = KickbackVariant::uncontrolled;

  KickbackSpec(int n, Circuit w, Circuit u)
      : system_qubits(n), prep(std::move(w)), unitary(std::move(u)) {}
};

inline StateVector reference_state_of(const KickbackSpec& spec) {
  if (spec.reference_state) {
    if (spec.reference_state->num_qubits() != spec.system_qubits)
      throw std::invalid_argument("reference state size mismatch");
    return *spec.reference_state;
  }
  return StateVector::basis_state(spec.system_qubits, spec.reference_basis);
}

/// Checks the spec's structural and physical preconditions, in particular
/// that the reference state is an eigenstate of U with the declared phase.
inline void validate_kickback_spec(const KickbackSpec& spec) {
  if (spec.system_qubits < 1)
    throw std::invalid_argument("need at least one system qubit");
  if (spec.prep.num_qubits() != spec.system_qubits ||
      spec.unitary.num_qubits() != spec.system_qubits)
    throw std::invalid_argument("W and U must act on the system register");
  if (spec.reference_phase < 0.0 || spec.reference_phase >= 1.0)
    throw std::invalid_argument("reference phase must lie in [0,1)");
  const StateVector ref = reference_state_of(spec);
  const StateVector evolved = apply_circuit(ref, spec.unitary);
  const Complex expected = std::polar(1.0, kTwoPi * spec.reference_phase);
  double err2 = 0.0;
  for (std::uint64_t i = 0; i < ref.size(); ++i)
    err2 += std::norm(evolved[i] - expected * ref[i]);
  if (std::sqrt(err2) > kEigenstateTol)
    throw std::invalid_argument(
        "reference state is not an eigenstate within tolerance");
}

/// Textbook phase kickback: H(a) . W . controlled-U . H(a), with the ancilla
/// allocated as the highest-index qubit. Reads out the eigenphase of W|ref>
/// directly: P(ancilla = 0) = cos^2(pi * theta).
inline Circuit build_standard_kickback(const KickbackSpec& spec) {
  validate_kickback_spec(spec);
  const int anc = spec.system_qubits;
  Circuit c(spec.system_qubits + 1, "standard-kickback");
  c.add(gates::h(anc));
  append(c, spec.prep);
  append_with_control(c, spec.unitary, anc, 1);
  c.add(gates::h(anc));
  return c;
}

/// The uncontrolled variant: H(a) . [1-controlled-W] . U . [open-controlled-W]
/// . H(a). U itself is never controlled; the ancilla branches see the two
/// eigenphases through the controlled preparations, and
/// P(ancilla = 0) = cos^2(pi * (theta - phi)).
inline Circuit build_uncontrolled_kickback(const KickbackSpec& spec) {
  validate_kickback_spec(spec);
  const int anc = spec.system_qubits;
  Circuit c(spec.system_qubits + 1, "uncontrolled-kickback");
  c.add(gates::h(anc));
  append_with_control(c, spec.prep, anc, 1);
  append(c, spec.unitary);
  append_with_control(c, spec.prep, anc, 0);
  c.add(gates::h(anc));
  return c;
}

struct KickbackResult {
  double ancilla_p0 = 0.0;
  double system_purity = 0.0;
  double system_fidelity_with_psi = 0.0;
};

/// Runs the selected gadget from |0>_ancilla (x) |ref> and reports the
/// ancilla statistics together with two diagnostics of the gadget's key
/// property: the system's reduced purity (1 when ancilla and system
/// disentangle) and the reduced-state fidelity with W|ref>.
inline KickbackResult run_kickback(const KickbackSpec& spec) {
  const Circuit c = spec.variant == KickbackVariant::standard
                        ? build_standard_kickback(spec)
                        : build_uncontrolled_kickback(spec);
  const int n = spec.system_qubits;
  const StateVector ref = reference_state_of(spec);
  StateVector initial(n + 1);
  {
    std::vector<Complex> amps(std::size_t(1) << (n + 1), Complex(0, 0));
    for (std::uint64_t i = 0; i < ref.size(); ++i) amps[i] = ref[i];
    initial = StateVector(n + 1, std::move(amps));
  }
  const StateVector final_state = apply_circuit(initial, c);

  std::vector<int> system(n);
  for (int q = 0; q < n; ++q) system[q] = q;

  KickbackResult r;
  r.ancilla_p0 = marginal_probabilities(final_state, {n})[0];
  r.system_purity = reduced_purity(final_state, system);
  const StateVector psi = apply_circuit(ref, spec.prep);
  r.system_fidelity_with_psi =
      reduced_fidelity_with_pure(final_state, system, psi);
  return r;
}

}  // namespace phasekick
