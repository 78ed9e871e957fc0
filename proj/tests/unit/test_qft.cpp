#include "helpers.hpp"

#include "phasekick/qft.hpp"

using namespace phasekick;
using namespace testutil;

namespace {

Matrix dft_matrix(int m) {
  const Eigen::Index dim = Eigen::Index(1) << m;
  Matrix f(dim, dim);
  const double scale = 1.0 / std::sqrt(double(dim));
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index k = 0; k < dim; ++k)
      f(j, k) = std::polar(scale, kTwoPi * double(j) * double(k) / double(dim));
  return f;
}

}  // namespace

TEST_CASE("one-bit transform is a single hadamard") {
  const Circuit c = fourier_transform(1);
  REQUIRE(c.size() == 1);
  REQUIRE(c.ops()[0].kind == GateKind::H);
  const Circuit ci = inverse_qft(1);
  REQUIRE(ci.size() == 1);
  REQUIRE(ci.ops()[0].kind == GateKind::H);
}

TEST_CASE("transform and inverse compose to the identity") {
  for (int m = 1; m <= 5; ++m) {
    Circuit round(m);
    round.extend(fourier_transform(m));
    round.extend(inverse_qft(m));
    const Matrix got = circuit_to_matrix(round);
    const Matrix id = Matrix::Identity(got.rows(), got.cols());
    REQUIRE(max_abs_diff(got, id) <= 1e-12);
  }
}

TEST_CASE("realized matrices equal the DFT and its conjugate transpose") {
  for (int m = 1; m <= 5; ++m) {
    const Matrix f = dft_matrix(m);
    REQUIRE(max_abs_diff(circuit_to_matrix(fourier_transform(m)), f) <= 1e-12);
    REQUIRE(max_abs_diff(circuit_to_matrix(inverse_qft(m)),
                         Matrix(f.adjoint())) <= 1e-12);
  }
}

TEST_CASE("fourier product states decode to their index") {
  const int m = 3;
  const std::uint64_t j = 5;
  // qubit t carries phase j * 2^t / 2^m
  std::vector<Complex> amps(8, Complex(0, 0));
  const double scale = 1.0 / std::sqrt(8.0);
  for (std::uint64_t x = 0; x < 8; ++x)
    amps[x] = std::polar(scale, kTwoPi * double(j) * double(x) / 8.0);
  const StateVector fourier(3, std::move(amps));
  const StateVector decoded = apply_circuit(fourier, inverse_qft(m));
  REQUIRE(std::norm(decoded[j]) >= 1.0 - 1e-10);
}

TEST_CASE("size limits are enforced") {
  REQUIRE_THROWS_AS(fourier_transform(0), std::invalid_argument);
  REQUIRE_THROWS_AS(fourier_transform(23), std::invalid_argument);
}
