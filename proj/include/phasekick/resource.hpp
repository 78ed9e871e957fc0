#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasekick/core.hpp"

namespace phasekick {

/// Gate tallies of the bare circuits entering the cost model: U (the
/// estimated unitary) and W (the state preparation), split into single- and
/// two-qubit counts, plus the phase-register size m.
struct CostProfile {
  long long n1_u = 0;
  long long n2_u = 0;
  long long n1_w = 0;
  long long n2_w = 0;
  int bits = 1;
};

namespace detail {

using Int128 = __int128;

inline Int128 gcd128(Int128 a, Int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline long long narrow_checked(Int128 v) {
  if (v > Int128(std::numeric_limits<long long>::max()) ||
      v < Int128(std::numeric_limits<long long>::min()))
    throw std::overflow_error("gate-count arithmetic exceeds 64 bits");
  return static_cast<long long>(v);
}

inline void check_profile(const CostProfile& p) {
  if (p.n1_u < 0 || p.n2_u < 0 || p.n1_w < 0 || p.n2_w < 0)
    throw std::invalid_argument("gate counts must be nonnegative");
  if (p.bits < 1) throw std::invalid_argument("need at least one bit");
  if (p.bits > 126) throw std::overflow_error("bit count too large for exact arithmetic");
}

inline Int128 pow2_minus_1(int m) { return (Int128(1) << m) - 1; }

}  // namespace detail

/// Exact reduced fraction with 64-bit numerator/denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational reduced(detail::Int128 n, detail::Int128 d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const detail::Int128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    return Rational{detail::narrow_checked(n), detail::narrow_checked(d)};
  }

  double value() const { return double(num) / double(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }

  Rational times(const Rational& o) const {
    return reduced(detail::Int128(num) * o.num, detail::Int128(den) * o.den);
  }
  Rational divided_by(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("zero denominator");
    return reduced(detail::Int128(num) * o.den, detail::Int128(den) * o.num);
  }
};

/// Two-qubit cost of m-bit phase estimation built from controlled powers of
/// U: every gate of U is compiled to its controlled form (2 two-qubit gates
/// per single-qubit gate, 6 per two-qubit gate), and ancilla k needs 2^k
/// sequential applications:
///   (2^m - 1) * (2*n1_u + 6*n2_u).
inline long long standard_qpe_cost(const CostProfile& p) {
  detail::check_profile(p);
  return detail::narrow_checked(
      detail::pow2_minus_1(p.bits) *
      (2 * detail::Int128(p.n1_u) + 6 * detail::Int128(p.n2_u)));
}

/// Two-qubit cost of the uncontrolled variant: each of the m blocks controls
/// W twice (the preparation and the reset, costed identically), while the
/// powers of U run bare and contribute only their own two-qubit gates:
///   m * (4*n1_w + 12*n2_w) + (2^m - 1) * n2_u.
inline long long uncontrolled_qpe_cost(const CostProfile& p) {
  detail::check_profile(p);
  return detail::narrow_checked(
      detail::Int128(p.bits) *
          (4 * detail::Int128(p.n1_w) + 12 * detail::Int128(p.n2_w)) +
      detail::pow2_minus_1(p.bits) * detail::Int128(p.n2_u));
}

/// The model's headline reduction factor: the exact rational quotient of the
/// large-m cost forms, with 2^m in place of (2^m - 1) on both sides:
///   2^m (2 n1_u + 6 n2_u)  /  [ m (4 n1_w + 12 n2_w) + 2^m n2_u ].
/// With n2 = 0 and n1_u = n1_w this is 2^m / (2m) exactly — already 1 at
/// m = 1 and doubling per added bit in the limit. The exact per-instance
/// costs sit alongside in CostRow for anyone who wants their quotient.
inline Rational reduction_ratio(const CostProfile& p) {
  detail::check_profile(p);
  const detail::Int128 two_m = detail::Int128(1) << p.bits;
  const detail::Int128 num =
      two_m * (2 * detail::Int128(p.n1_u) + 6 * detail::Int128(p.n2_u));
  const detail::Int128 den =
      detail::Int128(p.bits) *
          (4 * detail::Int128(p.n1_w) + 12 * detail::Int128(p.n2_w)) +
      two_m * detail::Int128(p.n2_u);
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational::reduced(num, den);
}

struct CostRow {
  int bits = 1;
  long long cost_standard = 0;
  long long cost_uncontrolled = 0;
  Rational ratio;
};

inline std::vector<CostRow> cost_table(CostProfile base, int m_lo, int m_hi) {
  if (m_lo < 1 || m_hi < m_lo)
    throw std::invalid_argument("bad bit range");
  std::vector<CostRow> rows;
  for (int m = m_lo; m <= m_hi; ++m) {
    base.bits = m;
    CostRow row;
    row.bits = m;
    row.cost_standard = standard_qpe_cost(base);
    row.cost_uncontrolled = uncontrolled_qpe_cost(base);
    row.ratio = reduction_ratio(base);
    rows.push_back(row);
  }
  return rows;
}

inline std::string cost_table_csv(const std::vector<CostRow>& rows) {
  std::ostringstream out;
  out << "m,cost_standard,cost_uncontrolled,ratio\n";
  for (const CostRow& r : rows)
    out << r.bits << ',' << r.cost_standard << ',' << r.cost_uncontrolled
        << ',' << format_double(r.ratio.value()) << '\n';
  return out.str();
}

}  // namespace phasekick
