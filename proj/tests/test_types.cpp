#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dirac8/types.hpp"

using namespace dirac8;

TEST_CASE("quantum parameters derive the coupling coefficients") {
  const auto p = QuantumParams::natural(0.5);
  CHECK(p.m_f() == doctest::Approx(0.5));
  CHECK(p.gap_energy() == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
  CHECK(p.mu_e() == doctest::Approx(1.0 / std::sqrt(1.25)).epsilon(1e-15));
  CHECK(p.mu_f() == doctest::Approx(0.25 / std::sqrt(1.25)).epsilon(1e-15));
  // mu_e (mu_e + mu_f) = m_e^2 c^4 and mu_f (mu_e + mu_f) = m_f^2 c^4
  CHECK(p.mu_e() * (p.mu_e() + p.mu_f()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.mu_f() * (p.mu_e() + p.mu_f()) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("eps = 0 leaves the light sector uncoupled") {
  const auto p = QuantumParams::natural(0.0);
  CHECK(p.mu_f() == 0.0);
  CHECK(p.mu_e() == 1.0);
  CHECK(p.gap_energy() == 1.0);
}

TEST_CASE("custom units scale the energies") {
  const QuantumParams p{2.0, 0.5, 3.0, 0.1};
  CHECK(p.rest_energy() == doctest::Approx(18.0));
  CHECK(p.omega_O() == doctest::Approx(180.0));
  CHECK(p.omega_A() == doctest::Approx(90.0));
}

TEST_CASE("invalid quantum parameters are rejected") {
  CHECK_THROWS_AS((QuantumParams{0.0, 0.5, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((QuantumParams{1.0, -0.1, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((QuantumParams{1.0, 0.5, 0.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((QuantumParams{1.0, 0.5, 1.0, -1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((QuantumParams{1.0, NAN, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW(QuantumParams::natural(0.0).validate());
}

TEST_CASE("branch and spin names round-trip") {
  for (const auto& b : kAllBranches) CHECK(parse_branch(to_string(b)) == b);
  CHECK(to_string(Branch::optical_minus()) == "optical-");
  CHECK(parse_spin("down") == Spin::down);
  CHECK(parse_branch_kind("optical") == BranchKind::optical);
  CHECK_THROWS_AS(parse_branch("optical"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spin("sideways"), std::invalid_argument);
}
