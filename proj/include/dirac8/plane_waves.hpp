#pragma once

// Plane-wave solutions of the one-dimensional eight-component first-order system.
//
// Spin-up sector (components 2 and 4 vanish), with mu_e, mu_f from QuantumParams:
//   i hbar d_t Psi_1 = -i hbar c d_z Psi_3 + mu_e (Psi_1 - Phi_1)
//   i hbar d_t Psi_3 = -i hbar c d_z Psi_1 - mu_e (Psi_3 - Phi_3)
//   i hbar d_t Phi_1 = -i hbar c d_z Phi_3 + mu_f (Phi_1 - Psi_1)
//   i hbar d_t Phi_3 = -i hbar c d_z Phi_1 - mu_f (Phi_3 - Psi_3)
// The spin-down sector is the same system with indices 1 -> 2 and 3 -> 4.
// Every solution has the form amplitudes * exp(-i (E t - p_z z) / hbar).

#include <array>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dirac8/types.hpp"

namespace dirac8::waves {

/// How the spin-sector amplitudes were obtained.
enum class AmplitudeForm {
  closed_form,   // ratios exactly as written for the branch
  rationalized,  // optical-minus: b3/b1 = -(|E| + Mc^2) / (c p_z), cancellation-free
  rest_frame,    // optical-minus at p_z = 0: b1 = d1 = 0, seed placed on b3
};

std::string to_string(AmplitudeForm form);

struct SectorAmplitudes {
  complex b1;
  complex b3;
  complex d1;
  complex d3;
  AmplitudeForm form = AmplitudeForm::closed_form;
};

/// Amplitudes (b1, b3, d1, d3) of the branch at momentum p_z for seed b1, with
/// M = m_e sqrt(1 + eps^2) and E the signed branch energy:
///   acoustic+: b1 = b3 = d1 = d3
///   acoustic-: b1 = -b3 = d1 = -d3
///   optical+:  b3 = c p_z / (E + M c^2) b1, d1 = -eps^2 b1, d3 = (b3/b1) d1
///   optical-:  b3 = -c p_z / (|E| - M c^2) b1, d1 = -eps^2 b1, d3 = (b3/b1) d1
/// The optical-minus ratio is evaluated in the rationalized form
/// -(|E| + M c^2)/(c p_z). At p_z = 0 the optical-minus mode has b1 = 0; the
/// seed is then applied to b3 and `form` is rest_frame.
/// Throws std::invalid_argument for b1 == 0.
SectorAmplitudes amplitudes(Branch branch, double p_z, const QuantumParams& params, complex b1);

/// Unit-norm spin-up sector eigenvector (Psi_a, Psi_b, Phi_a, Phi_b) that is a
/// smooth function of p_z on every branch (optical-minus is seeded on b3).
std::array<complex, 4> branch_eigenvector(Branch branch, double p_z, const QuantumParams& params);

using Amplitudes8 = std::array<complex, 8>;

struct PlaneWaveSolution {
  Branch branch;
  Spin spin = Spin::up;
  double p_z = 0.0;
  double energy = 0.0;
  Amplitudes8 amplitudes{};  // (b1, b2, b3, b4, d1, d2, d3, d4)
  AmplitudeForm form = AmplitudeForm::closed_form;

  /// amplitudes * exp(-i (E t - p_z z) / hbar)
  [[nodiscard]] Amplitudes8 field(double t, double z, const QuantumParams& params) const;
  [[nodiscard]] ComplexVector as_vector() const;
  [[nodiscard]] double max_amplitude() const;
};

/// Spin-up solutions are built directly; spin-down ones via spin_flip, so the
/// seed then sits in b2.
PlaneWaveSolution build_solution(Branch branch, Spin spin, double p_z, const QuantumParams& params,
                                 complex b1 = 1.0);

/// Swaps slots 1 <-> 2 and 3 <-> 4 in both the Psi and Phi blocks. Involution.
PlaneWaveSolution spin_flip(const PlaneWaveSolution& solution);

enum class DerivativeMode { exact, finite_difference };

struct SamplePoint {
  double t = 0.0;
  double z = 0.0;
};

/// Largest modulus of (lhs - rhs) over all eight equations (both spin sectors)
/// and all sample points. Exact mode applies d_t -> -iE/hbar and
/// d_z -> i p_z/hbar; finite-difference mode uses central differences of the
/// field with step fd_step in both t and z.
double residual(const PlaneWaveSolution& solution, std::span<const SamplePoint> points,
                const QuantumParams& params, DerivativeMode mode = DerivativeMode::exact,
                double fd_step = 1e-5);

/// residual / (m_e c^2 * max|amplitude|)
double relative_residual(const PlaneWaveSolution& solution, std::span<const SamplePoint> points,
                         const QuantumParams& params, DerivativeMode mode = DerivativeMode::exact);

/// Every combination of {acoustic, optical} x {+, -} x {up, down}; spin-up
/// entries first, each seeded with 1 (b1 for spin up, b2 for spin down, b3/b4
/// for the optical-minus rest-frame case).
std::array<PlaneWaveSolution, 8> catalog_eight(double p_z, const QuantumParams& params);

/// Catalog amplitude vectors stacked as the columns of an 8x8 matrix.
ComplexMatrix amplitude_matrix(std::span<const PlaneWaveSolution> catalog);

/// Momentum at which the eight-component Hamiltonian has this solution as an
/// eigenvector: p_z e_z for spin up, -p_z e_z for spin down (the index swap
/// maps the spin-down block of H_D8(p) onto the spin-up system at -p).
Momentum3 hamiltonian_momentum(const PlaneWaveSolution& solution);

struct NullSpaceComparison {
  double sector_deviation = 0.0;  // distance from the 1-D null space of the 4x4 spin block
  double full_deviation = 0.0;    // distance from the null space of the full 8x8 matrix
  std::size_t sector_dimension = 0;
  std::size_t full_dimension = 0;
};

/// Compares the closed-form amplitude vector with the numerical null space of
/// H_D8 - E I_8 at hamiltonian_momentum(solution).
NullSpaceComparison compare_with_null_space(const PlaneWaveSolution& solution,
                                            const QuantumParams& params, double tol = 1e-10);

nlohmann::json to_json(const PlaneWaveSolution& solution, double residual_value);

}  // namespace dirac8::waves
