#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phasekick/kickback.hpp"
#include "phasekick/qft.hpp"
#include "phasekick/stateprep.hpp"

namespace phasekick {

/// What the last ancilla block does with the system register: an open
/// controlled preparation leaves it in the target eigenstate W|ref>, a
/// 1-controlled inverse preparation returns it to the reference state.
/// Ancilla statistics are identical either way.
enum class FinalBlockMode { open_controlled_w, controlled_w_dagger };

enum class QpeVariant { uncontrolled, standard };

/// Inputs for m-bit phase estimation. Extends the single-ancilla spec with
/// the bit count, the final-block choice and the block power order e:
/// the block applied t-th in time applies U^(2^e(t)). The default order is
/// e(t) = t, so the first block in time carries U^1.
struct QpeSpec {
  int bits = 1;
  int system_qubits = 1;
  Circuit prep;     // W
  Circuit unitary;  // U
  std::uint64_t reference_basis = 0;
  std::optional<StateVector> reference_state;
  double reference_phase = 0.0;  // phi in [0,1)
  FinalBlockMode final_block = FinalBlockMode::open_controlled_w;
  std::vector<int> power_order;  // empty means e(t) = t
  /// (theta - phi) mod 1 when known; enables success-probability accounting.
  std::optional<double> true_delta;

  QpeSpec(int m, int n, Circuit w, Circuit u)
      : bits(m), system_qubits(n), prep(std::move(w)), unitary(std::move(u)) {}

  KickbackSpec kickback_view() const {
    KickbackSpec k(system_qubits, prep, unitary);
    k.reference_basis = reference_basis;
    k.reference_state = reference_state;
    k.reference_phase = reference_phase;
    return k;
  }
};

/// Exact readout of an m-bit phase register.
struct PhaseEstimate {
  std::vector<double> distribution;  // over {0 .. 2^m - 1}
  std::uint64_t map_outcome = 0;     // argmax, ties broken to lowest index
  double map_fraction = 0.0;         // map_outcome / 2^m
  /// Mass on the grid outcome(s) carrying the true phase difference: the
  /// single nearest point when (theta-phi)*2^m is an integer, otherwise the
  /// two bracketing points. Absent when the true phase is unknown.
  std::optional<double> success_probability;
};

namespace detail {

inline std::vector<int> resolved_power_order(const QpeSpec& spec) {
  if (spec.power_order.empty()) {
    std::vector<int> e(spec.bits);
    for (int t = 0; t < spec.bits; ++t) e[t] = t;
    return e;
  }
  if (spec.power_order.size() != std::size_t(spec.bits))
    throw std::invalid_argument("power order size must equal bit count");
  std::vector<bool> seen(spec.bits, false);
  for (int v : spec.power_order) {
    if (v < 0 || v >= spec.bits || seen[v])
      throw std::invalid_argument("power order must be a permutation");
    seen[v] = true;
  }
  return spec.power_order;
}

inline std::vector<int> inverse_permutation(const std::vector<int>& e) {
  std::vector<int> inv(e.size());
  for (std::size_t t = 0; t < e.size(); ++t) inv[e[t]] = int(t);
  return inv;
}

}  // namespace detail

inline void validate_qpe_spec(const QpeSpec& spec) {
  if (spec.bits < 1) throw std::invalid_argument("need at least one bit");
  if (spec.system_qubits + spec.bits > kMaxQubits)
    throw std::invalid_argument("qubit budget exceeded");
  detail::resolved_power_order(spec);
  validate_kickback_spec(spec.kickback_view());
}

/// Ancilla qubits listed so that list position j is bit j (weight 2^j) of
/// the decoded outcome. With the default power order this is just ancilla
/// index order.
inline std::vector<int> qpe_readout_qubits(const QpeSpec& spec) {
  const std::vector<int> inv =
      detail::inverse_permutation(detail::resolved_power_order(spec));
  std::vector<int> subset(spec.bits);
  for (int j = 0; j < spec.bits; ++j) subset[j] = spec.system_qubits + inv[j];
  return subset;
}

inline StateVector qpe_initial_state(const QpeSpec& spec) {
  const StateVector ref = reference_state_of(spec.kickback_view());
  const int total = spec.system_qubits + spec.bits;
  std::vector<Complex> amps(std::size_t(1) << total, Complex(0, 0));
  for (std::uint64_t i = 0; i < ref.size(); ++i) amps[i] = ref[i];
  return StateVector(total, std::move(amps));
}

/// Everything up to (not including) the inverse QFT.
///
/// Uncontrolled variant, block t on ancilla a_t (time order):
///   H(a_t) . [1-c-W] . U^(2^e(t)) . [1-c-Wdag]      for intermediate blocks
/// with the last block per `final_block`. The inverse preparation both
/// disentangles the ancilla and returns the system to the reference state
/// for the next block. U is never controlled.
///
/// Standard variant: one uncontrolled W, then semantic controlled powers of
/// U per ancilla, each followed by a Phase(-2*pi*2^e(t)*phi) on the ancilla
/// so that both variants estimate the same reference-subtracted phase
/// (theta - phi) mod 1 and their final states agree up to a global phase.
inline Circuit build_qpe_blocks(const QpeSpec& spec, QpeVariant variant) {
  validate_qpe_spec(spec);
  const int n = spec.system_qubits;
  const int m = spec.bits;
  const std::vector<int> e = detail::resolved_power_order(spec);
  Circuit c(n + m, variant == QpeVariant::uncontrolled ? "uncontrolled-qpe"
                                                       : "standard-qpe");
  const Circuit prep_dagger = invert(spec.prep);
  if (variant == QpeVariant::standard) append(c, spec.prep);
  for (int t = 0; t < m; ++t) {
    const int anc = n + t;
    const std::uint64_t reps = std::uint64_t(1) << e[t];
    c.add(gates::h(anc));
    if (variant == QpeVariant::uncontrolled) {
      append_with_control(c, spec.prep, anc, 1);
      for (std::uint64_t r = 0; r < reps; ++r) append(c, spec.unitary);
      if (t < m - 1 || spec.final_block == FinalBlockMode::controlled_w_dagger)
        append_with_control(c, prep_dagger, anc, 1);
      else
        append_with_control(c, spec.prep, anc, 0);
    } else {
      for (std::uint64_t r = 0; r < reps; ++r)
        append_with_control(c, spec.unitary, anc, 1);
      const double comp = wrap_unit(double(reps) * spec.reference_phase);
      if (comp > 1e-15 && comp < 1.0 - 1e-15)
        c.add(gates::phase(-kTwoPi * comp, anc));
    }
  }
  return c;
}

inline Circuit build_qpe(const QpeSpec& spec, QpeVariant variant) {
  Circuit c = build_qpe_blocks(spec, variant);
  const std::vector<int> map = qpe_readout_qubits(spec);
  append(c, remap_qubits(inverse_qft(spec.bits), map, c.num_qubits()));
  return c;
}

inline Circuit build_uncontrolled_qpe(const QpeSpec& spec) {
  return build_qpe(spec, QpeVariant::uncontrolled);
}

inline Circuit build_standard_qpe(const QpeSpec& spec) {
  return build_qpe(spec, QpeVariant::standard);
}

inline PhaseEstimate estimate_phase(const QpeSpec& spec,
                                    QpeVariant variant = QpeVariant::uncontrolled) {
  const Circuit c = build_qpe(spec, variant);
  const StateVector final_state = apply_circuit(qpe_initial_state(spec), c);
  PhaseEstimate pe;
  pe.distribution = marginal_probabilities(final_state, qpe_readout_qubits(spec));
  for (std::size_t i = 1; i < pe.distribution.size(); ++i)
    if (pe.distribution[i] > pe.distribution[pe.map_outcome])
      pe.map_outcome = i;
  const double grid = double(std::uint64_t(1) << spec.bits);
  pe.map_fraction = double(pe.map_outcome) / grid;
  if (spec.true_delta) {
    const std::uint64_t size = std::uint64_t(1) << spec.bits;
    const double x = wrap_unit(*spec.true_delta) * grid;
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9) {
      pe.success_probability =
          pe.distribution[std::uint64_t(r) % size];
    } else {
      const std::uint64_t lo = std::uint64_t(std::floor(x)) % size;
      const std::uint64_t hi = (lo + 1) % size;
      pe.success_probability = pe.distribution[lo] + pe.distribution[hi];
    }
  }
  return pe;
}

/// The ancilla register's reduced state just before the inverse QFT, in
/// readout order. For eigenstate inputs this is the pure product Fourier
/// state; any residual system-ancilla entanglement beyond 1e-10 is an error.
/// The returned state absorbs the joint state's overall phase relative to
/// the dominant system component, so runs differing only by a shift of both
/// eigenphases compare by inner product.
inline StateVector pre_qft_ancilla_state(const QpeSpec& spec,
                                         QpeVariant variant = QpeVariant::uncontrolled) {
  const Circuit blocks = build_qpe_blocks(spec, variant);
  const StateVector state = apply_circuit(qpe_initial_state(spec), blocks);
  const std::vector<int> subset = qpe_readout_qubits(spec);
  if (std::abs(reduced_purity(state, subset) - 1.0) > kVerifyTol)
    throw std::runtime_error("residual entanglement");
  std::vector<int> system(spec.system_qubits);
  for (int q = 0; q < spec.system_qubits; ++q) system[q] = q;
  const Matrix m = detail::reshape(state, subset, system);
  Eigen::Index best = 0;
  double best_norm = -1.0;
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    const double cn = m.col(col).norm();
    if (cn > best_norm + 1e-15) {
      best_norm = cn;
      best = col;
    }
  }
  Vector u = m.col(best) / best_norm;
  std::vector<Complex> amps(u.data(), u.data() + u.size());
  return StateVector(spec.bits, std::move(amps));
}

struct SweepPoint {
  double delta = 0.0;
  double success_probability = 0.0;
};

/// Success probability of the ideal readout when the preparation is replaced
/// by one producing (|psi> + delta |perp>)/sqrt(1 + delta^2). The reference
/// must be a basis state and `perp` an eigenstate of U orthogonal to
/// W|ref> with an exactly representable eigenphase; the substituted
/// preparation is the deterministic dense completion of the perturbed state.
inline std::vector<SweepPoint> eigenstate_error_sweep(
    const QpeSpec& spec, const StateVector& perp,
    const std::vector<double>& deltas,
    QpeVariant variant = QpeVariant::uncontrolled) {
  validate_qpe_spec(spec);
  if (spec.reference_state)
    throw std::invalid_argument("sweep requires a basis reference state");
  if (perp.num_qubits() != spec.system_qubits)
    throw std::invalid_argument("perpendicular state size mismatch");
  const StateVector ref = reference_state_of(spec.kickback_view());
  const StateVector psi = apply_circuit(ref, spec.prep);
  if (std::abs(inner_product(psi, perp)) > kEigenstateTol)
    throw std::invalid_argument(
        "perpendicular state is not orthogonal to the target eigenstate");
  const StateVector evolved = apply_circuit(perp, spec.unitary);
  const Complex lambda = inner_product(perp, evolved);
  double err2 = 0.0;
  for (std::uint64_t i = 0; i < perp.size(); ++i)
    err2 += std::norm(evolved[i] - lambda * perp[i]);
  if (std::abs(std::abs(lambda) - 1.0) > kEigenstateTol ||
      std::sqrt(err2) > kEigenstateTol)
    throw std::invalid_argument(
        "perpendicular state is not an eigenstate within tolerance");
  const double perp_phase = wrap_unit(std::arg(lambda) / kTwoPi);
  const double grid = double(std::uint64_t(1) << spec.bits);
  if (std::abs(perp_phase * grid - std::round(perp_phase * grid)) > 1e-6)
    throw std::invalid_argument(
        "perpendicular eigenphase must be representable on the bit grid");

  const std::uint64_t ideal_map = estimate_phase(spec, variant).map_outcome;

  std::vector<SweepPoint> points;
  points.reserve(deltas.size());
  for (double delta : deltas) {
    const double scale = 1.0 / std::sqrt(1.0 + delta * delta);
    std::vector<Complex> amps(psi.size());
    for (std::uint64_t i = 0; i < psi.size(); ++i)
      amps[i] = scale * (psi[i] + delta * perp[i]);
    const StateVector perturbed(spec.system_qubits, std::move(amps));

    Circuit prep_tilde(spec.system_qubits, "state-prep-perturbed");
    for (int q = 0; q < spec.system_qubits; ++q)
      if (bit_of(spec.reference_basis, q)) prep_tilde.add(gates::x(q));
    append(prep_tilde, state_prep_unitary(perturbed));

    QpeSpec perturbed_spec = spec;
    perturbed_spec.prep = std::move(prep_tilde);
    const PhaseEstimate est = estimate_phase(perturbed_spec, variant);
    points.push_back(SweepPoint{delta, est.distribution[ideal_map]});
  }
  return points;
}

inline std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "delta,success_probability\n";
  for (const SweepPoint& p : points)
    out << format_double(p.delta) << ',' << format_double(p.success_probability)
        << '\n';
  return out.str();
}

}  // namespace phasekick
