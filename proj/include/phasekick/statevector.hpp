#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "phasekick/core.hpp"
#include "phasekick/gate.hpp"

namespace phasekick {

/// Dense complex state over n qubits.
///
/// Bit-ordering convention used everywhere in this library: qubit 0 is the
/// least significant bit of the basis index. |q2 q1 q0> = |101> therefore has
/// index 5 with q0 = 1, q1 = 0, q2 = 1.
class StateVector {
 public:
  explicit StateVector(int num_qubits)
      : num_qubits_(checked_qubits(num_qubits)),
        amps_(std::size_t(1) << num_qubits_, Complex(0, 0)) {
    amps_[0] = Complex(1, 0);
  }

  StateVector(int num_qubits, std::vector<Complex> amplitudes)
      : num_qubits_(checked_qubits(num_qubits)), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::size_t(1) << num_qubits_))
      throw std::invalid_argument("amplitude count must be 2^num_qubits");
    double n2 = 0.0;
    for (const Complex& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw std::invalid_argument("non-finite amplitude");
      n2 += std::norm(a);
    }
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-8)
      throw std::invalid_argument("state is not normalized");
  }

  static StateVector basis_state(int num_qubits, std::uint64_t index) {
    StateVector sv(num_qubits);
    if (index >= (std::uint64_t(1) << sv.num_qubits_))
      throw std::invalid_argument("basis index exceeds register");
    sv.amps_[0] = Complex(0, 0);
    sv.amps_[index] = Complex(1, 0);
    return sv;
  }

  int num_qubits() const { return num_qubits_; }
  std::uint64_t size() const { return amps_.size(); }
  const std::vector<Complex>& amps() const { return amps_; }
  const Complex& operator[](std::uint64_t i) const { return amps_[i]; }

  double norm() const {
    double n2 = 0.0;
    for (const Complex& a : amps_) n2 += std::norm(a);
    return std::sqrt(n2);
  }

 private:
  static int checked_qubits(int n) {
    if (n < 1) throw std::invalid_argument("need at least one qubit");
    if (n > kMaxQubits)
      throw std::invalid_argument("qubit count exceeds the dense-simulation cap of 22");
    return n;
  }

  int num_qubits_;
  std::vector<Complex> amps_;
};

namespace detail {

inline void check_subset(const StateVector& sv, const std::vector<int>& subset,
                         bool allow_full) {
  if (subset.empty()) throw std::invalid_argument("qubit subset is empty");
  std::vector<int> seen;
  for (int q : subset) {
    if (q < 0 || q >= sv.num_qubits())
      throw std::invalid_argument("qubit index out of range");
    if (std::find(seen.begin(), seen.end(), q) != seen.end())
      throw std::invalid_argument("duplicate qubit in subset");
    seen.push_back(q);
  }
  if (!allow_full && subset.size() == std::size_t(sv.num_qubits()))
    throw std::invalid_argument("subset must be a strict subset of the register");
}

inline std::vector<int> complement_of(const std::vector<int>& subset, int n) {
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (std::find(subset.begin(), subset.end(), q) == subset.end())
      rest.push_back(q);
  return rest;
}

inline std::uint64_t extract_bits(std::uint64_t index,
                                  const std::vector<int>& qubits) {
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < qubits.size(); ++j)
    out |= bit_of(index, qubits[j]) << j;
  return out;
}

/// Amplitudes reshaped as a 2^|rows| x 2^|cols| matrix, entry (r, c) being
/// the amplitude whose `rows` qubits spell r and `cols` qubits spell c.
inline Matrix reshape(const StateVector& sv, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  Matrix m(Eigen::Index(1) << rows.size(), Eigen::Index(1) << cols.size());
  for (std::uint64_t idx = 0; idx < sv.size(); ++idx)
    m(extract_bits(idx, rows), extract_bits(idx, cols)) = sv[idx];
  return m;
}

}  // namespace detail

/// Applies one gate. Controls act semantically: the target-subspace matrix is
/// applied only on basis states whose control bits match the polarities, and
/// everything else passes through untouched. Returns a new state.
inline StateVector apply_gate(const StateVector& sv, const GateOp& g) {
  g.check_structure();
  const int n = sv.num_qubits();
  for (int t : g.targets)
    if (t >= n) throw std::invalid_argument("qubit index out of range");
  for (const Control& c : g.controls)
    if (c.qubit >= n) throw std::invalid_argument("qubit index out of range");

  const Matrix m = g.target_matrix();
  if (!is_unitary(m))
    throw std::invalid_argument("matrix is not unitary within tolerance");

  const int k = static_cast<int>(g.targets.size());
  const std::uint64_t sub = std::uint64_t(1) << k;
  std::uint64_t tmask = 0, cmask = 0, cval = 0;
  for (int t : g.targets) tmask |= std::uint64_t(1) << t;
  for (const Control& c : g.controls) {
    cmask |= std::uint64_t(1) << c.qubit;
    if (c.polarity == 1) cval |= std::uint64_t(1) << c.qubit;
  }

  std::vector<std::uint64_t> offset(sub, 0);
  for (std::uint64_t j = 0; j < sub; ++j)
    for (int b = 0; b < k; ++b)
      if (bit_of(j, b)) offset[j] |= std::uint64_t(1) << g.targets[b];

  std::vector<Complex> out = sv.amps();
  std::vector<Complex> v(sub);
  const std::uint64_t dim = sv.size();
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & tmask) continue;
    if ((base & cmask) != cval) continue;
    for (std::uint64_t j = 0; j < sub; ++j) v[j] = sv[base | offset[j]];
    for (std::uint64_t r = 0; r < sub; ++r) {
      Complex acc(0, 0);
      for (std::uint64_t c = 0; c < sub; ++c) acc += m(r, c) * v[c];
      out[base | offset[r]] = acc;
    }
  }
  return StateVector(n, std::move(out));
}

inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("state dimensions do not match");
  Complex acc(0, 0);
  for (std::uint64_t i = 0; i < a.size(); ++i)
    acc += std::conj(a[i]) * b[i];
  return acc;
}

/// |<a|b>|^2 — the comparison metric for states that may differ by an
/// unobservable overall phase.
inline double fidelity_up_to_global_phase(const StateVector& a,
                                          const StateVector& b) {
  return std::norm(inner_product(a, b));
}

/// Tr(rho^2) of the reduced state on `subset`. For a pure joint state the
/// reduced states on a subset and its complement share a spectrum, so the
/// computation runs on the smaller side.
inline double reduced_purity(const StateVector& sv,
                             const std::vector<int>& subset) {
  detail::check_subset(sv, subset, /*allow_full=*/false);
  const int n = sv.num_qubits();
  std::vector<int> side = subset;
  if (2 * side.size() > std::size_t(n)) side = detail::complement_of(side, n);
  const std::vector<int> env = detail::complement_of(side, n);
  const Matrix m = detail::reshape(sv, side, env);
  const Matrix rho = m * m.adjoint();
  return rho.squaredNorm();
}

/// <target|rho_subset|target> for a pure `target` on the subset qubits.
inline double reduced_fidelity_with_pure(const StateVector& sv,
                                         const std::vector<int>& subset,
                                         const StateVector& target) {
  detail::check_subset(sv, subset, /*allow_full=*/true);
  if (target.num_qubits() != static_cast<int>(subset.size()))
    throw std::invalid_argument("target dimension does not match subset");
  const std::vector<int> env =
      detail::complement_of(subset, sv.num_qubits());
  if (env.empty()) return fidelity_up_to_global_phase(sv, target);
  const Matrix m = detail::reshape(sv, subset, env);
  Eigen::Map<const Vector> t(target.amps().data(), target.amps().size());
  return (t.adjoint() * m).squaredNorm();
}

/// Outcome probabilities for measuring `subset` in the computational basis.
/// Outcome bit j is the measured value of subset[j].
inline std::vector<double> marginal_probabilities(
    const StateVector& sv, const std::vector<int>& subset) {
  detail::check_subset(sv, subset, /*allow_full=*/true);
  std::vector<double> probs(std::size_t(1) << subset.size(), 0.0);
  for (std::uint64_t idx = 0; idx < sv.size(); ++idx)
    probs[detail::extract_bits(idx, subset)] += std::norm(sv[idx]);
  return probs;
}

/// Finite-shot measurement emulation. Deterministic for a fixed seed within
/// one build; the seed is the reproducibility contract, not the generator.
inline std::map<std::uint64_t, long long> sample_counts(
    const StateVector& sv, const std::vector<int>& subset, long long shots,
    std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const std::vector<double> probs = marginal_probabilities(sv, subset);
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::map<std::uint64_t, long long> counts;
  for (long long s = 0; s < shots; ++s) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::uint64_t outcome = it == cdf.end()
                                ? std::uint64_t(cdf.size() - 1)
                                : std::uint64_t(it - cdf.begin());
    ++counts[outcome];
  }
  return counts;
}

}  // namespace phasekick
