// Reads a synthetic eigenphase two ways: with the single-ancilla gadget and
// with a 4-bit phase-estimation register, printing the exact statistics.

#include <cstdio>

#include "phasekick/kickback.hpp"
#include "phasekick/qpe.hpp"
#include "phasekick/resource.hpp"

using namespace phasekick;

namespace {

Circuit diagonal_unitary(double phi, double theta) {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, kTwoPi * phi);
  u(1, 1) = std::polar(1.0, kTwoPi * theta);
  Circuit c(1, "diagonal-u");
  c.add(gates::unitary(u, {0}));
  return c;
}

Circuit pauli_x_prep() {
  Circuit w(1, "prep");
  w.add(gates::x(0));
  return w;
}

}  // namespace

int main() {
  const double phi = 0.0;
  const double theta = 0.3125;  // 5/16, exactly representable with 4 bits

  KickbackSpec gadget(1, pauli_x_prep(), diagonal_unitary(phi, theta));
  gadget.reference_phase = phi;
  const KickbackResult r = run_kickback(gadget);
  std::printf("single ancilla:  P(0) = %.12f   purity = %.12f\n",
              r.ancilla_p0, r.system_purity);

  QpeSpec qpe(4, 1, pauli_x_prep(), diagonal_unitary(phi, theta));
  qpe.reference_phase = phi;
  qpe.true_delta = theta - phi;
  const PhaseEstimate est = estimate_phase(qpe);
  std::printf("4-bit register:  outcome %llu  fraction %.6f  success %.12f\n",
              static_cast<unsigned long long>(est.map_outcome),
              est.map_fraction, *est.success_probability);

  CostProfile profile;
  profile.n1_u = 25;
  profile.n1_w = 1;
  profile.bits = 4;
  std::printf("two-qubit cost:  controlled-U %lld   uncontrolled %lld\n",
              standard_qpe_cost(profile), uncontrolled_qpe_cost(profile));
  return 0;
}
