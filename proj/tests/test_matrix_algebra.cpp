#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "dirac8/matrix_algebra.hpp"
#include "oracle.hpp"

using namespace dirac8;
using namespace dirac8::algebra;

namespace {
constexpr complex I{0.0, 1.0};

double max_diff(const oracle::Mat& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < b.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) m = std::max(m, std::abs(a[i][j] - b(i, j)));
  }
  return m;
}
}  // namespace

TEST_CASE("Pauli matrices have the standard entries") {
  const auto x = pauli(PauliAxis::x);
  const auto y = pauli(PauliAxis::y);
  const auto z = pauli(PauliAxis::z);
  CHECK(x(0, 1) == 1.0);
  CHECK(x(1, 0) == 1.0);
  CHECK(y(0, 1) == -I);
  CHECK(y(1, 0) == I);
  CHECK(z(0, 0) == 1.0);
  CHECK(z(1, 1) == -1.0);
  CHECK(max_abs_diff(x * y, I * z) == 0.0);
}

TEST_CASE("alpha matrices: alpha_0 diagonal, spatial ones off-diagonal") {
  const auto a0 = alpha(0);
  for (int i = 0; i < 4; ++i) CHECK(a0(i, i) == (i < 2 ? 1.0 : -1.0));
  const auto a3 = alpha(3);
  CHECK(a3.topLeftCorner(2, 2).isZero());
  CHECK(max_abs_diff(a3.topRightCorner(2, 2), pauli(PauliAxis::z)) == 0.0);
  CHECK(max_abs_diff(a3.bottomLeftCorner(2, 2), pauli(PauliAxis::z)) == 0.0);
  CHECK_THROWS_AS(alpha(4), std::out_of_range);
  CHECK_THROWS_AS(alpha(-1), std::out_of_range);
}

TEST_CASE("anticommutator rejects mismatched shapes") {
  CHECK_THROWS_AS(anticommutator(identity(2), identity(4)), std::invalid_argument);
}

TEST_CASE("generalized alpha matrices: A_{0+-} are not involutions") {
  const auto am = a_matrix(ATag::zero_minus);
  const auto ap = a_matrix(ATag::zero_plus);
  CHECK(max_abs_diff(am * am, identity(8)) > 0.5);
  CHECK(max_abs_diff(ap * ap, identity(8)) > 0.5);
  // idempotent up to the block structure: (A0-^2)^2 = A0-^2
  const ComplexMatrix am2 = am * am;
  CHECK(max_abs_diff(am2 * am2, am2) == 0.0);
}

TEST_CASE("every algebra identity holds exactly") {
  const auto report = check_algebra(QuantumParams::natural(0.5));
  REQUIRE(report.checks().size() >= 30);
  for (const auto& c : report.checks()) {
    INFO(c.name);
    CHECK(c.passed);
  }
}

TEST_CASE("squared Hamiltonians against a hand multiplication") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pd(-5.0, 5.0);
  std::uniform_real_distribution<double> ed(0.05, 2.0);
  for (int i = 0; i < 20; ++i) {
    const Momentum3 p{pd(rng), pd(rng), pd(rng)};
    const auto params = QuantumParams::natural(ed(rng));
    const auto h8 = oracle::from(hamiltonian_d8(p, params));
    const auto sq = oracle::mul(h8, h8);
    const double e2 = 1.0 + p.norm_squared();
    CHECK(max_diff(sq, hamiltonian_d8_squared_closed_form(p, params)) / e2 < 1e-12);
    const auto h4 = oracle::from(hamiltonian_d4(p, params));
    CHECK(max_diff(oracle::mul(h4, h4), e2 * identity(4)) / e2 < 1e-12);
  }
}

TEST_CASE("sector matrix is the spin-up block of H_D8(p e_z)") {
  const auto params = QuantumParams::natural(0.7);
  for (double pz : {-2.0, 0.0, 0.3, 1.5}) {
    const auto h8 = hamiltonian_d8(Momentum3::along_z(pz), params);
    CHECK(max_abs_diff(extract_sector(h8, kSpinUpSlots), sector_hamiltonian(pz, params)) < 1e-15);
    // spin-up and spin-down sectors do not mix for momentum along z
    for (int u : kSpinUpSlots) {
      for (int d : kSpinDownSlots) CHECK(h8(u, d) == complex{});
    }
  }
}

TEST_CASE("sector determinant equals the dispersion polynomial") {
  const auto params = QuantumParams::natural(0.5);
  for (double pz : {0.0, 0.4, 1.0, 3.0}) {
    for (double e : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
      auto m = oracle::from(sector_hamiltonian(pz, params));
      for (int i = 0; i < 4; ++i) m[i][i] -= e;
      const double expected = (e * e - pz * pz) * (e * e - pz * pz - 1.25);
      CHECK(std::abs(oracle::determinant(m) - expected) < 1e-13);
    }
  }
}

TEST_CASE("null space of a rank-deficient matrix") {
  ComplexMatrix m(3, 3);
  m << 1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 1.0, 0.0, 1.0;
  const auto ns = null_space(m);
  REQUIRE(ns.size() == 1);
  const auto ref = oracle::null_vector(oracle::from(m));
  ComplexVector v(3);
  for (int i = 0; i < 3; ++i) v(i) = ref[static_cast<std::size_t>(i)];
  CHECK(distance_from_span(v, ns) < 1e-14);
  CHECK((m * ns[0]).norm() < 1e-14);
  CHECK(null_space(identity(4)).empty());
  CHECK(null_space(zero(3)).size() == 3);
  CHECK_THROWS_AS(null_space(ComplexMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("distance from span is zero inside and positive outside") {
  ComplexVector e0 = ComplexVector::Zero(3);
  e0(0) = 1.0;
  ComplexVector v = ComplexVector::Zero(3);
  v(0) = 2.0 * I;
  CHECK(distance_from_span(v, {e0}) < 1e-16);
  v(1) = 2.0;
  CHECK(distance_from_span(v, {e0}) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("eigen decomposition handles repeated and defective spectra") {
  const auto params = QuantumParams::natural(0.5);
  const auto dec = eigen_decompose(hamiltonian_d8(Momentum3::along_z(0.0), params));
  CHECK(dec.diagonalizable);
  const auto h = hamiltonian_d8(Momentum3::along_z(0.0), params);
  for (int i = 0; i < 8; ++i) CHECK((h * dec.vectors.col(i) - dec.values(i) * dec.vectors.col(i)).norm() < 1e-13);

  ComplexMatrix jordan(2, 2);
  jordan << 1.0, 1.0, 0.0, 1.0;
  CHECK_FALSE(eigen_decompose(jordan).diagonalizable);
  CHECK(eigen_decompose(jordan).min_gap == 0.0);
}

TEST_CASE("eigenvalues are sorted by real part") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = -1.0;
  d(2, 2) = 0.5;
  const auto ev = eigenvalues(d);
  CHECK(ev(0).real() == doctest::Approx(-1.0));
  CHECK(ev(1).real() == doctest::Approx(0.5));
  CHECK(ev(2).real() == doctest::Approx(2.0));
}

TEST_CASE("matrix exponential agrees with a Taylor series") {
  const auto params = QuantumParams::natural(0.5);
  for (double pz : {0.0, 0.8, 3.0}) {
    const ComplexMatrix a = -I * 2.3 * sector_hamiltonian(pz, params);
    CHECK(max_diff(oracle::expm_taylor(oracle::from(a)), matrix_exp(a)) < 1e-12);
  }
}

TEST_CASE("H_D8 is Hermitian only at eps = 1") {
  const Momentum3 p{0.2, -0.4, 1.1};
  CHECK(is_hermitian(hamiltonian_d8(p, QuantumParams::natural(1.0)), 1e-15));
  CHECK_FALSE(is_hermitian(hamiltonian_d8(p, QuantumParams::natural(0.5)), 1e-15));
  CHECK(is_hermitian(hamiltonian_d4(p, QuantumParams::natural(0.5)), 1e-15));
}
