#pragma once

// Pauli, Dirac alpha and the 8x8 generalized alpha matrices, momentum-space
// Hamiltonians of the four- and eight-component equations, and the small dense
// linear-algebra utilities (null space, eigen decomposition, matrix exponential)
// the rest of the library is built on.

#include <vector>

#include "dirac8/report.hpp"
#include "dirac8/types.hpp"

namespace dirac8::algebra {

enum class PauliAxis { x, y, z };

/// Tags of the five generalized alpha matrices: A_{0-}, A_{0+}, A_1, A_2, A_3.
enum class ATag { zero_minus, zero_plus, one, two, three };

ComplexMatrix identity(int n);
ComplexMatrix zero(int n);

ComplexMatrix pauli(PauliAxis axis);

/// Dirac alpha matrix; index 0 is block-diag(I_2, -I_2), 1..3 carry sigma_{x,y,z}
/// on the off-diagonal blocks. Throws std::out_of_range for index outside 0..3.
ComplexMatrix alpha(int index);

/// 8x8 generalized alpha matrix built from 4x4 alpha blocks:
///   A_{0-} = [[0, 0], [-alpha_0, alpha_0]]
///   A_{0+} = [[alpha_0, -alpha_0], [0, 0]]
///   A_j    = block-diag(alpha_j, alpha_j)
ComplexMatrix a_matrix(ATag tag);

/// A B + B A. Throws std::invalid_argument unless A and B are square and the same size.
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Assembles a 2x2 block matrix from four equally sized square blocks.
ComplexMatrix block2x2(const ComplexMatrix& a11, const ComplexMatrix& a12,
                       const ComplexMatrix& a21, const ComplexMatrix& a22);

/// Largest entry modulus of (a - b).
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Evaluates every algebraic identity of the alpha and generalized alpha
/// matrices. Entries are 0, +-1, +-i so the checks are exact equalities.
VerificationReport check_algebra(const QuantumParams& params);

/// m_e c^2 alpha_0 + c sum_j alpha_j p_j.
ComplexMatrix hamiltonian_d4(const Momentum3& p, const QuantumParams& params);

/// mu_f A_{0-} + mu_e A_{0+} + c sum_j A_j p_j. Component order is
/// (Psi_1..Psi_4, Phi_1..Phi_4).
ComplexMatrix hamiltonian_d8(const Momentum3& p, const QuantumParams& params);

/// m_f^2 c^4 A_{0-}^2 + m_e^2 c^4 A_{0+}^2 + c^2 |p|^2 I_8, the closed form of H_D8^2.
ComplexMatrix hamiltonian_d8_squared_closed_form(const Momentum3& p, const QuantumParams& params);

/// Slot indices of the spin-up (Psi_1, Psi_3, Phi_1, Phi_3) and spin-down
/// (Psi_2, Psi_4, Phi_2, Phi_4) sectors inside the eight-component vector.
inline constexpr std::array<int, 4> kSpinUpSlots = {0, 2, 4, 6};
inline constexpr std::array<int, 4> kSpinDownSlots = {1, 3, 5, 7};

/// The 4x4 momentum-space matrix of the one-dimensional first-order system for
/// one spin sector, ordered (Psi_a, Psi_b, Phi_a, Phi_b):
///   [[ mu_e,  c p, -mu_e,  0   ],
///    [ c p,  -mu_e, 0,     mu_e],
///    [-mu_f,  0,    mu_f,  c p ],
///    [ 0,     mu_f, c p,  -mu_f]]
/// It is the spin-up block of hamiltonian_d8(p e_z). The index-swapped
/// spin-down system has the same matrix.
ComplexMatrix sector_hamiltonian(double p_z, const QuantumParams& params);

/// Rows/columns `slots` of an 8x8 matrix.
ComplexMatrix extract_sector(const ComplexMatrix& m8, const std::array<int, 4>& slots);

inline constexpr double kDefaultNullTolerance = 1e-10;

/// Orthonormal basis of the numerical null space: right singular vectors whose
/// singular value is <= tol * ||M||_2. Empty when the null space is trivial.
/// Throws std::invalid_argument for non-square M or tol <= 0.
std::vector<ComplexVector> null_space(const ComplexMatrix& m, double tol = kDefaultNullTolerance);

/// Stacks vectors as columns.
ComplexMatrix columns(const std::vector<ComplexVector>& vs);

/// || v - Q Q^H v || / ||v|| for an orthonormal basis Q: zero iff v lies in span(Q).
double distance_from_span(const ComplexVector& v, const std::vector<ComplexVector>& basis);

/// Eigenvalues of a general complex square matrix, sorted by (real, imag).
ComplexVector eigenvalues(const ComplexMatrix& m);

struct EigenDecomposition {
  ComplexVector values;   // sorted by (real, imag)
  ComplexMatrix vectors;  // unit columns, vectors.col(i) belongs to values(i)
  bool diagonalizable = false;
  double min_gap = 0.0;   // smallest |lambda_i - lambda_j|, i != j
};

/// Eigen decomposition that stays well conditioned for repeated eigenvalues:
/// eigenvalues closer than cluster_tol * max(1, |lambda|max) are grouped, and a
/// group of multiplicity > 1 receives an orthonormal null-space basis of
/// (M - mean(lambda) I). `diagonalizable` is false if a group's eigenspace is
/// smaller than its multiplicity.
EigenDecomposition eigen_decompose(const ComplexMatrix& m, double cluster_tol = 1e-8);

/// exp(M) by scaling and squaring (Pade).
ComplexMatrix matrix_exp(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol);

}  // namespace dirac8::algebra
