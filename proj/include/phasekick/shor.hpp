#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "phasekick/qpe.hpp"

namespace phasekick::shor {

struct OrderFindingSpec {
  long long modulus = 15;  // N
  long long base = 7;      // a, coprime to N
  int bits = 3;            // phase-register size m
  std::uint64_t seed = 0;
};

inline long long gcd_ll(long long a, long long b) {
  while (b != 0) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline int system_qubits_for(long long modulus) {
  int n = 1;
  while ((1LL << n) < modulus) ++n;
  return n;
}

inline void validate_spec(const OrderFindingSpec& spec) {
  if (spec.modulus < 3) throw std::invalid_argument("modulus must be >= 3");
  if (spec.base < 1 || spec.base >= spec.modulus)
    throw std::invalid_argument("base must lie in [1, modulus)");
  if (gcd_ll(spec.base, spec.modulus) != 1)
    throw std::invalid_argument("base not coprime");
  if (spec.bits < 1) throw std::invalid_argument("need at least one bit");
  if (system_qubits_for(spec.modulus) + spec.bits > kMaxQubits)
    throw std::invalid_argument("qubit budget exceeded");
}

/// |x> -> |a*x mod N> for x < N, identity on the padding states x >= N so
/// the operator stays a permutation of the full register.
inline GateOp modular_mult_unitary(long long base, long long modulus) {
  if (modulus < 3) throw std::invalid_argument("modulus must be >= 3");
  if (gcd_ll(((base % modulus) + modulus) % modulus, modulus) != 1)
    throw std::invalid_argument("base not coprime");
  const int n = system_qubits_for(modulus);
  const Eigen::Index dim = Eigen::Index(1) << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const Eigen::Index image =
        x < modulus ? Eigen::Index((base * x) % modulus) : x;
    m(image, x) = 1.0;
  }
  std::vector<int> targets(n);
  std::iota(targets.begin(), targets.end(), 0);
  return gates::unitary(std::move(m), std::move(targets));
}

/// Smallest positive r with a^r = 1 (mod N), by brute force. This is the
/// classical oracle the quantum path is checked against.
inline long long classical_order(long long base, long long modulus) {
  if (gcd_ll(base, modulus) != 1)
    throw std::invalid_argument("base not coprime");
  long long r = 1;
  long long v = ((base % modulus) + modulus) % modulus;
  while (v != 1) {
    v = (v * base) % modulus;
    ++r;
  }
  return r;
}

/// |psi_j> = (1/sqrt r) sum_k w_r^{-jk} |a^k mod N>, the eigenvector of the
/// modular multiplication with eigenvalue w_r^j = e^{2 pi i j / r}.
inline StateVector eigenvector_psi(long long j, long long base,
                                   long long modulus) {
  const long long r = classical_order(base, modulus);
  if (j < 0 || j >= r)
    throw std::invalid_argument("eigenvector index out of range");
  const int n = system_qubits_for(modulus);
  std::vector<Complex> amps(std::size_t(1) << n, Complex(0, 0));
  const double scale = 1.0 / std::sqrt(double(r));
  long long x = 1;
  for (long long k = 0; k < r; ++k) {
    amps[std::size_t(x)] +=
        scale * std::polar(1.0, -kTwoPi * double(j) * double(k) / double(r));
    x = (x * base) % modulus;
  }
  return StateVector(n, std::move(amps));
}

/// Order-finding circuit with the first phase block replaced by the
/// single-ancilla gadget: [1-c-X] . M_a . [open-c-X] with the system starting
/// in |0...0>, whose fixed point under M_a carries the known phase 0. The
/// remaining m-1 blocks apply semantic controlled powers of M_a exactly as
/// in the fully controlled circuit.
inline Circuit build_hybrid_order_circuit(const OrderFindingSpec& spec) {
  validate_spec(spec);
  const int n = system_qubits_for(spec.modulus);
  const int m = spec.bits;
  const GateOp mult = modular_mult_unitary(spec.base, spec.modulus);
  Circuit c(n + m, "hybrid-order-finding");
  c.add(gates::h(n));
  c.add(gates::x(0).with_control(n, 1));
  c.add(mult);
  c.add(gates::x(0).with_control(n, 0));
  for (int t = 1; t < m; ++t) {
    const int anc = n + t;
    c.add(gates::h(anc));
    for (std::uint64_t rep = 0; rep < (std::uint64_t(1) << t); ++rep)
      c.add(mult.with_control(anc, 1));
  }
  std::vector<int> map(m);
  for (int j = 0; j < m; ++j) map[j] = n + j;
  append(c, remap_qubits(inverse_qft(m), map, n + m));
  return c;
}

/// Fully controlled reference: X(0) prepares |1>, then every block controls
/// M_a^(2^t). Runs from the same all-zero initial state as the hybrid.
inline Circuit build_controlled_order_circuit(const OrderFindingSpec& spec) {
  validate_spec(spec);
  const int n = system_qubits_for(spec.modulus);
  const int m = spec.bits;
  const GateOp mult = modular_mult_unitary(spec.base, spec.modulus);
  Circuit c(n + m, "controlled-order-finding");
  c.add(gates::x(0));
  for (int t = 0; t < m; ++t) {
    const int anc = n + t;
    c.add(gates::h(anc));
    for (std::uint64_t rep = 0; rep < (std::uint64_t(1) << t); ++rep)
      c.add(mult.with_control(anc, 1));
  }
  std::vector<int> map(m);
  for (int j = 0; j < m; ++j) map[j] = n + j;
  append(c, remap_qubits(inverse_qft(m), map, n + m));
  return c;
}

/// Continued-fraction recovery: the smallest convergent denominator q <= N
/// with |y/2^m - p/q| <= 1/2^{m+1}, or nothing. y = 0 is uninformative.
inline std::optional<long long> recover_order(std::uint64_t y, int m,
                                              long long modulus) {
  if (m < 1 || m > 62) throw std::invalid_argument("bit count out of range");
  const long long two_m = 1LL << m;
  if (static_cast<long long>(y) >= two_m)
    throw std::invalid_argument("outcome exceeds the phase register");
  if (y == 0) return std::nullopt;
  long long num = static_cast<long long>(y), den = two_m;
  long long p_prev = 1, p_prev2 = 0;  // p_{-1}, p_{-2}
  long long q_prev = 0, q_prev2 = 1;  // q_{-1}, q_{-2}
  while (den != 0) {
    const long long a = num / den;
    const long long p = a * p_prev + p_prev2;
    const long long q = a * q_prev + q_prev2;
    if (q > modulus) break;
    if (q >= 1) {
      const long long diff = static_cast<long long>(y) * q - p * two_m;
      if (2 * std::llabs(diff) <= q && q > 1) return q;
    }
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    const long long rem = num % den;
    num = den;
    den = rem;
  }
  return std::nullopt;
}

inline long long pow_mod(long long base, long long exponent,
                         long long modulus) {
  long long result = 1 % modulus;
  long long b = ((base % modulus) + modulus) % modulus;
  while (exponent > 0) {
    if (exponent & 1) result = (result * b) % modulus;
    b = (b * b) % modulus;
    exponent >>= 1;
  }
  return result;
}

struct OrderResult {
  bool found = false;
  long long order = 0;
  std::map<std::uint64_t, long long> histogram;
  std::vector<long long> candidates;
  int controlled_block_count = 0;
  int runs_used = 0;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t run) {
  std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (run + 1));
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Samples the hybrid circuit, folds the recovered denominators into a
/// running lcm and stops as soon as a^L = 1 (mod N). Runs draw independent
/// per-run seeds derived from (seed, run index).
inline OrderResult find_order(const OrderFindingSpec& spec, int runs) {
  validate_spec(spec);
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  const int n = system_qubits_for(spec.modulus);
  const Circuit circuit = build_hybrid_order_circuit(spec);
  const StateVector final_state =
      apply_circuit(StateVector(n + spec.bits), circuit);
  std::vector<int> readout(spec.bits);
  for (int j = 0; j < spec.bits; ++j) readout[j] = n + j;

  OrderResult res;
  res.controlled_block_count = spec.bits - 1;
  long long running = 1;
  for (int run = 0; run < runs; ++run) {
    const auto counts =
        sample_counts(final_state, readout, 1, detail::mix_seed(spec.seed, run));
    const std::uint64_t y = counts.begin()->first;
    ++res.histogram[y];
    res.runs_used = run + 1;
    if (auto cand = recover_order(y, spec.bits, spec.modulus)) {
      res.candidates.push_back(*cand);
      const long long l = std::lcm(running, *cand);
      running = l > spec.modulus ? *cand : l;
    }
    if (pow_mod(spec.base, running, spec.modulus) == 1) {
      res.found = true;
      res.order = running;
      break;
    }
  }
  return res;
}

}  // namespace phasekick::shor
