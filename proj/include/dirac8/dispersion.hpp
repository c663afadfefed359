#pragma once

// Analytic dispersion relations: the two-branch continuum system, the
// determinant of the relativistic eight-component system, branch energies,
// phase and group velocities, and tabulation of all four branches.

#include <iosfwd>
#include <span>
#include <vector>

#include "dirac8/types.hpp"

namespace dirac8::dispersion {

/// Coefficients of the coupled continuum wave system
///   u_tt = s_m^2 u_zz - omega_O^2 (u - U)
///   U_tt = s_M^2 U_zz - omega_A^2 (U - u).
struct ContinuumParams {
  double s_m = 0.0;
  double s_M = 0.0;
  double omega_O = 0.0;
  double omega_A = 0.0;

  /// s_m = s_M = c, omega_O = m_e c^2 / hbar, omega_A = m_f c^2 / hbar.
  static ContinuumParams from_quantum(const QuantumParams& params);
};

struct ContinuumRoots {
  double omega2_acoustic = 0.0;
  double omega2_optical = 0.0;
};

/// Both roots Omega^2 of
///   det[[Omega^2 - s_m^2 k^2 - omega_O^2, omega_O^2],
///       [omega_A^2, Omega^2 - s_M^2 k^2 - omega_A^2]] = 0,
/// ascending. With equal speeds c these are c^2 k^2 and c^2 k^2 + omega_O^2 + omega_A^2.
ContinuumRoots continuum_dispersion(double k, const ContinuumParams& params);

/// (E^2 - c^2 p^2) (E^2 - c^2 p^2 - (1 + eps^2) m_e^2 c^4).
double dirac_determinant(double energy, double p_z, const QuantumParams& params);

/// acoustic: +-c p_z; optical: +-sqrt(c^2 p_z^2 + m_e^2 c^4 (1 + eps^2)).
double branch_energy(Branch branch, double p_z, const QuantumParams& params);

/// Omega(k) = E(hbar k) / hbar.
double branch_frequency(Branch branch, double k_z, const QuantumParams& params);

/// Omega / k_z. Throws std::domain_error at k_z = 0.
double phase_velocity(Branch branch, double k_z, const QuantumParams& params);

/// dOmega/dk_z: +-c on the acoustic branches, c^2 k_z / Omega on the optical ones.
double group_velocity(Branch branch, double k_z, const QuantumParams& params);

struct BranchTableRow {
  double p_z = 0.0;
  double e_acoustic_plus = 0.0;
  double e_acoustic_minus = 0.0;
  double e_optical_plus = 0.0;
  double e_optical_minus = 0.0;
};

/// All four branch energies on a momentum grid. `epsilon` overrides params.epsilon.
std::vector<BranchTableRow> branch_table(double epsilon, std::span<const double> p_grid,
                                      const QuantumParams& params);

/// n evenly spaced momenta from p_min to p_max inclusive. Throws
/// std::invalid_argument if n < 2 or p_max <= p_min.
std::vector<double> momentum_grid(double p_min, double p_max, int n);

inline constexpr const char* kBranchTableHeader =
    "p_z,E_acoustic_plus,E_acoustic_minus,E_optical_plus,E_optical_minus";

/// Header line plus one row per entry, 17 significant digits.
void write_branch_table_csv(std::ostream& out, std::span<const BranchTableRow> rows);

}  // namespace dirac8::dispersion
