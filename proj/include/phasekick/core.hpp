#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace phasekick {

using Complex = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

/// Dense simulation is capped at 22 qubits (4M amplitudes).
inline constexpr int kMaxQubits = 22;

// Numerical contracts shared across the library.
inline constexpr double kNormTol = 1e-12;       // state norm drift
inline constexpr double kUnitaryTol = 1e-10;    // gate unitarity
inline constexpr double kVerifyTol = 1e-10;     // default verification
inline constexpr double kEigenstateTol = 1e-8;  // reference-state checks

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline std::uint64_t bit_of(std::uint64_t value, int position) {
  return (value >> position) & 1ULL;
}

/// Wraps a real number into [0, 1). Phases are always reported this way.
inline double wrap_unit(double x) {
  double r = std::fmod(x, 1.0);
  return r < 0.0 ? r + 1.0 : r;
}

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

}  // namespace phasekick
