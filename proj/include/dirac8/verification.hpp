#pragma once

// The invariant suite behind `dirac8 verify`, plus the chain and evolution
// measurements shared with the `chain` and `evolve` subcommands.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dirac8/lattice_chain.hpp"
#include "dirac8/pde_evolution.hpp"
#include "dirac8/plane_waves.hpp"
#include "dirac8/report.hpp"
#include "dirac8/types.hpp"

namespace dirac8::verify {

/// Deliberate defects the suite must detect (test hook).
enum class Fault {
  none,
  optical_plus_amplitude,  // optical+ b3 scaled by 1.01
  acoustic_minus_sign,     // acoustic- b3 given the acoustic+ sign
  optical_gap,             // optical energies use m_e c^2 instead of m_e c^2 sqrt(1 + eps^2)
};

std::string to_string(Fault fault);
/// Throws std::invalid_argument on an unknown name.
Fault parse_fault(std::string_view name);
std::vector<std::string> fault_names();

/// Branch energy as seen by the suite, i.e. with `fault` applied.
double suite_energy(Branch branch, double p_z, const QuantumParams& params, Fault fault);
/// Catalog solution as seen by the suite, i.e. with `fault` applied.
waves::PlaneWaveSolution suite_solution(Branch branch, Spin spin, double p_z,
                                        const QuantumParams& params, Fault fault);

/// H_D4^2 and H_D8^2 closed forms over random (p, eps); p in [-5, 5]^3 m_e c,
/// eps in [0.05, 2].
VerificationReport check_squaring(int draws, std::uint64_t seed);

/// Determinant roots, rest energies, continuum mapping, v_p v_g = c^2, and the
/// single-c^2 k^2 reading of the optical branch.
VerificationReport check_dispersion(const QuantumParams& params, Fault fault = Fault::none);

/// Eigenvalues of H_D8 real and equal to the branch energies with multiplicity 2
/// for eps in {0.25, 0.5, 2} and params.epsilon; Hermiticity exactly when eps = 1.
VerificationReport check_spectrum(const QuantumParams& params, Fault fault = Fault::none);

/// Closed-form amplitudes against null spaces of H_D8 - E I over random
/// (p_z, eps), p_z in [-5, 5] m_e c, eps in [0.05, 2], plus the p_z = 0 cases.
VerificationReport check_amplitudes(int draws, std::uint64_t seed, const QuantumParams& base,
                                    Fault fault = Fault::none);

/// Residuals, spin structure and linear independence of the eight solutions.
VerificationReport check_catalog(const QuantumParams& params, double p_z, Fault fault = Fault::none);

/// Psi_1 + Psi_3 = Phi_1 + Phi_3 = 0 on acoustic- at random (t, z), and the
/// eps^2 scaling of the optical d-amplitudes.
VerificationReport check_cancellation(const QuantumParams& params, int points, std::uint64_t seed,
                                      Fault fault = Fault::none);

struct ChainRun {
  double omega_measured = 0.0;
  double omega_discrete = 0.0;
  double omega_continuum = 0.0;
  double dt = 0.0;
  long steps = 0;
  double energy_drift = 0.0;  // max |E(t) - E(0)| / E(0)
  std::vector<chain::LatticeState> trajectory;  // every step, including t = 0
};

/// Integrates a single travelling ring mode for `periods` periods with
/// velocity Verlet and measures its frequency at site 0. dt = 0 selects
/// min(0.02 / omega, 1 / omega_max). Mode 0 on the acoustic branch is static
/// and reports omega_measured = 0. Throws chain::StabilityError for an unstable dt.
ChainRun run_chain_mode(const chain::ChainParams& params, std::size_t n_sites, int mode,
                        BranchKind branch, double periods = 20.0, double dt = 0.0);

/// Convergence exponent over ka in {0.2, 0.1, 0.05, 0.025} and time-domain
/// frequencies of mode 2 (both branches) on a 128-site ring.
VerificationReport check_chain(const chain::ChainParams& params);

/// Plane-wave phases, time reversal, conserved quadratic, RK4 order and
/// packet group velocities, on grids scaled to the natural length hbar/(m_e c).
VerificationReport check_evolution(const QuantumParams& params);

struct SuiteOptions {
  QuantumParams params;
  Fault fault = Fault::none;
  std::uint64_t seed = 20240601;
  bool include_chain = true;
  bool include_evolution = true;
};

VerificationReport run_suite(const SuiteOptions& options);

/// Text recorded in every suite report about how the optical branch is read.
std::string optical_branch_reading_note();

}  // namespace dirac8::verify
