#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dirac8/csv.hpp"
#include "dirac8/dispersion.hpp"
#include "oracle.hpp"

using namespace dirac8;
using namespace dirac8::dispersion;

TEST_CASE("optical rest energies") {
  CHECK(branch_energy(Branch::optical_plus(), 0.0, QuantumParams::natural(0.5)) ==
        doctest::Approx(1.118033988749895).epsilon(1e-15));
  CHECK(branch_energy(Branch::optical_plus(), 0.0, QuantumParams::natural(0.0)) == 1.0);
  CHECK(branch_energy(Branch::optical_minus(), 0.0, QuantumParams::natural(0.5)) ==
        doctest::Approx(-1.118033988749895).epsilon(1e-15));
}

TEST_CASE("acoustic branches are exact light lines") {
  const auto p = QuantumParams::natural(0.5);
  for (double pz : {0.0, 0.25, 1.0, 7.5}) {
    CHECK(branch_energy(Branch::acoustic_plus(), pz, p) == pz);
    CHECK(branch_energy(Branch::acoustic_minus(), pz, p) == -pz);
  }
}

TEST_CASE("branch energies are roots of the determinant") {
  for (double eps : {0.0, 0.5, 2.0}) {
    const auto p = QuantumParams::natural(eps);
    for (double pz : {0.0, 0.3, 1.0, 4.0}) {
      for (const auto& b : kAllBranches) {
        const double e = branch_energy(b, pz, p);
        CHECK(std::abs(dirac_determinant(e, pz, p)) < 1e-12 * std::pow(1.0 + e * e + pz * pz, 2));
      }
    }
  }
}

TEST_CASE("continuum roots match the textbook quadratic") {
  const ContinuumParams cp{1.0, 0.5, 1.0, 0.5};
  for (double k : {0.2, 0.7, 2.0, 5.0}) {
    const auto ref = oracle::continuum_roots(k, cp.s_m, cp.s_M, cp.omega_O, cp.omega_A);
    const auto r = continuum_dispersion(k, cp);
    CHECK(r.omega2_acoustic == doctest::Approx(ref.first).epsilon(1e-12));
    CHECK(r.omega2_optical == doctest::Approx(ref.second).epsilon(1e-12));
  }
  const auto r0 = continuum_dispersion(0.0, cp);
  CHECK(r0.omega2_acoustic == 0.0);
  CHECK(r0.omega2_optical == doctest::Approx(1.25));
}

TEST_CASE("continuum system with equal speeds reproduces the relativistic branches") {
  const auto p = QuantumParams::natural(0.5);
  const auto cp = ContinuumParams::from_quantum(p);
  for (double k : {0.0, 0.5, 1.0, 3.0}) {
    const auto r = continuum_dispersion(k, cp);
    CHECK(r.omega2_acoustic == doctest::Approx(k * k).epsilon(1e-13));
    CHECK(r.omega2_optical == doctest::Approx(k * k + 1.25).epsilon(1e-13));
  }
}

TEST_CASE("v_p v_g = c^2 on every branch") {
  const QuantumParams p{1.0, 0.5, 2.0, 1.0};
  for (double k : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (const auto& b : kAllBranches) {
      const double prod = phase_velocity(b, k, p) * group_velocity(b, k, p);
      CHECK(prod == doctest::Approx(4.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("group velocity equals the numerical slope of Omega(k)") {
  const auto p = QuantumParams::natural(0.5);
  const double h = 1e-5;
  for (const auto& b : kAllBranches) {
    for (double k : {0.3, 1.0, 2.5}) {
      const double fd = (branch_frequency(b, k + h, p) - branch_frequency(b, k - h, p)) / (2.0 * h);
      CHECK(group_velocity(b, k, p) == doctest::Approx(fd).epsilon(1e-8));
    }
  }
  CHECK(group_velocity(Branch::optical_plus(), 1.0, p) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(group_velocity(Branch::optical_minus(), 1.0, p) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(group_velocity(Branch::optical_plus(), 0.0, p) == 0.0);
}

TEST_CASE("phase velocity is undefined at k = 0") {
  CHECK_THROWS_AS(phase_velocity(Branch::optical_plus(), 0.0, QuantumParams::natural(0.5)), std::domain_error);
  CHECK(phase_velocity(Branch::optical_plus(), 1.0, QuantumParams::natural(0.5)) == doctest::Approx(1.5));
}

TEST_CASE("momentum grid") {
  const auto g = momentum_grid(0.0, 3.0, 121);
  REQUIRE(g.size() == 121);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 3.0);
  CHECK(g[40] == doctest::Approx(1.0));
  CHECK_THROWS_AS(momentum_grid(0.0, 3.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(momentum_grid(1.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(momentum_grid(2.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("branch table and its CSV") {
  const auto g = momentum_grid(0.0, 3.0, 121);
  const auto rows = branch_table(0.5, g, QuantumParams::natural(0.5));
  REQUIRE(rows.size() == 121);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].e_optical_plus > rows[i - 1].e_optical_plus);
  CHECK(rows[0].e_optical_plus == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
  // eps argument overrides the parameter set
  const auto rows0 = branch_table(0.0, g, QuantumParams::natural(0.5));
  CHECK(rows0[0].e_optical_plus == 1.0);

  std::ostringstream os;
  write_branch_table_csv(os, rows);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == kBranchTableHeader);
  std::getline(is, line);
  CHECK(line == "0,0,-0,1.1180339887498949,-1.1180339887498949");
  int count = 1;
  while (std::getline(is, line)) ++count;
  CHECK(count == 121);
}

TEST_CASE("number formatting is fixed at 17 significant digits") {
  CHECK(csv::format_double(0.1) == "0.10000000000000001");
  CHECK(csv::format_double(1.0) == "1");
  CHECK(csv::format_double(-2.5e-20) == "-2.4999999999999999e-20");
}
