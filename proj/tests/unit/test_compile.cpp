#include "helpers.hpp"

#include "phasekick/compile.hpp"

using namespace phasekick;
using namespace testutil;
using Catch::Matchers::ContainsSubstring;

namespace {

/// Random compilable circuit: 1-qubit gates plus single-target gates with
/// one control, mixed polarities, on `n` qubits avoiding `skip`.
Circuit random_compilable(int n, int skip, int gate_count,
                          std::mt19937_64& rng) {
  Circuit c(n);
  auto pick = [&](int avoid) {
    int q = int(rng() % n);
    while (q == skip || q == avoid) q = int(rng() % n);
    return q;
  };
  for (int g = 0; g < gate_count; ++g) {
    const int t = pick(-1);
    switch (rng() % 6) {
      case 0: c.add(gates::h(t)); break;
      case 1: c.add(gates::rz(0.1 + 0.3 * double(rng() % 7), t)); break;
      case 2: c.add(gates::unitary(random_unitary(2, rng), {t})); break;
      case 3: c.add(gates::cx(pick(t), t)); break;
      case 4: c.add(gates::phase(0.9, t).with_control(pick(t), 0)); break;
      default:
        c.add(gates::unitary(random_unitary(2, rng), {t})
                  .with_control(pick(t), int(rng() % 2)));
        break;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("euler angles reconstruct arbitrary 2x2 unitaries") {
  std::mt19937_64 rng(31);
  std::vector<Matrix> cases;
  for (int rep = 0; rep < 12; ++rep) cases.push_back(random_unitary(2, rng));
  cases.push_back(gates::h(0).target_matrix());
  cases.push_back(gates::x(0).target_matrix());
  cases.push_back(gates::z(0).target_matrix());
  cases.push_back(gates::phase(2.1, 0).target_matrix());
  cases.push_back(Matrix::Identity(2, 2));
  cases.push_back(-Matrix::Identity(2, 2));
  for (const Matrix& v : cases) {
    const Matrix rebuilt = matrix_from_euler(euler_zyz(v));
    REQUIRE(max_abs_diff(rebuilt, v) <= 1e-12);
  }
}

TEST_CASE("principal square roots square back") {
  std::mt19937_64 rng(37);
  std::vector<Matrix> cases;
  for (int rep = 0; rep < 8; ++rep) cases.push_back(random_unitary(2, rng));
  cases.push_back(gates::x(0).target_matrix());
  cases.push_back(Matrix::Identity(2, 2));
  cases.push_back(-Matrix::Identity(2, 2));
  for (const Matrix& v : cases) {
    const Matrix s = sqrt_unitary_2x2(v);
    REQUIRE(is_unitary(s, 1e-12));
    REQUIRE(max_abs_diff(s * s, v) <= 1e-11);
  }
}

TEST_CASE("controlled single-qubit gates compile to two two-qubit gates") {
  Circuit c(2);
  c << gates::h(0);
  const Circuit compiled = compile_controlled(c, 1, 1);
  const GateCountReport r = count_gates(compiled);
  REQUIRE(r.n2 == 2);
  REQUIRE(r.rejected == 0);
  REQUIRE(max_abs_diff(circuit_to_matrix(compiled),
                       circuit_matrix_oracle(with_control(c, 1, 1))) <= 1e-10);
}

TEST_CASE("controlled two-qubit gates compile to six two-qubit gates") {
  Circuit c(3);
  c << gates::cx(0, 1);
  const Circuit compiled = compile_controlled(c, 2, 1);
  const GateCountReport r = count_gates(compiled);
  REQUIRE(r.n2 == 6);
  REQUIRE(r.rejected == 0);
  // doubly-controlled X against the semantic version
  REQUIRE(max_abs_diff(circuit_to_matrix(compiled),
                       circuit_matrix_oracle(with_control(c, 2, 1))) <= 1e-10);
}

TEST_CASE("compiled two-qubit count is exactly 2*n1 + 6*n2") {
  std::mt19937_64 rng(43);
  // a fixed mixed example first: n1 = 10, n2 = 4 over qubits 0..2
  Circuit mixed(4);
  for (int k = 0; k < 10; ++k) mixed.add(gates::rz(0.1 * double(k + 1), k % 3));
  mixed.add(gates::cx(0, 1));
  mixed.add(gates::cx(1, 2));
  mixed.add(gates::phase(0.4, 2).with_control(0, 1));
  mixed.add(gates::cx(2, 0));
  const Circuit compiled = compile_controlled(mixed, 3, 1);
  REQUIRE(count_gates(compiled).n2 == 2 * 10 + 6 * 4);
  REQUIRE(max_abs_diff(circuit_to_matrix(compiled),
                       circuit_matrix_oracle(with_control(mixed, 3, 1))) <=
          1e-10);

  for (int rep = 0; rep < 6; ++rep) {
    const Circuit c = random_compilable(4, 3, 6, rng);
    const GateCountReport before = count_gates(c);
    const int polarity = int(rng() % 2);
    const Circuit out = compile_controlled(c, 3, polarity);
    REQUIRE(count_gates(out).n2 == 2 * before.n1 + 6 * before.n2);
    REQUIRE(count_gates(out).rejected == 0);
    const Matrix semantic = circuit_matrix_oracle(with_control(c, 3, polarity));
    REQUIRE(max_abs_diff(circuit_to_matrix(out), semantic) <= 1e-10);
  }
}

TEST_CASE("open outer controls compile correctly") {
  std::mt19937_64 rng(47);
  Circuit c(3);
  c << gates::unitary(random_unitary(2, rng), {0})
    << gates::cx(1, 0);
  const Circuit compiled = compile_controlled(c, 2, 0);
  REQUIRE(count_gates(compiled).n2 == 2 + 6);
  REQUIRE(max_abs_diff(circuit_to_matrix(compiled),
                       circuit_matrix_oracle(with_control(c, 2, 0))) <= 1e-10);
}

TEST_CASE("preparation and its inverse compile to equal counts") {
  std::mt19937_64 rng(53);
  const Circuit w = random_compilable(3, 2, 5, rng);
  const GateCountReport a = count_gates(compile_controlled(w, 2, 1));
  const GateCountReport b = count_gates(compile_controlled(invert(w), 2, 1));
  REQUIRE(a.n2 == b.n2);
}

TEST_CASE("compilation rejects out-of-model inputs") {
  Circuit uses_control(2);
  uses_control << gates::h(1);
  REQUIRE_THROWS_WITH(compile_controlled(uses_control, 1, 1),
                      ContainsSubstring("control index collision"));

  Circuit swapper(3);
  swapper << gates::swap(0, 1);
  REQUIRE_THROWS_WITH(compile_controlled(swapper, 2, 1),
                      ContainsSubstring("decomposed before"));

  Circuit wide(4);
  wide << gates::x(0).with_control(1, 1).with_control(2, 1);
  REQUIRE_THROWS_WITH(compile_controlled(wide, 3, 1),
                      ContainsSubstring("arity"));

  Circuit fine(2);
  fine << gates::h(0);
  REQUIRE_THROWS_AS(compile_controlled(fine, 5, 1), std::invalid_argument);
}
