#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace dirac8 {

using complex = std::complex<double>;

/// Dense complex matrix. Only 2x2, 4x4 and 8x8 instances are built by this library.
using ComplexMatrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<complex, Eigen::Dynamic, 1>;

/// Cartesian momentum (x, y, z).
struct Momentum3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] double norm_squared() const { return x * x + y * y + z * z; }
  [[nodiscard]] static Momentum3 along_z(double pz) { return {0.0, 0.0, pz}; }
};

/// Parameters of the eight-component relativistic model.
///
/// Everything else is derived: the light-sector mass m_f = epsilon * m_e and the
/// two coupling coefficients of the first-order system,
///   mu_e = m_e c^2 / sqrt(1 + eps^2)
///   mu_f = eps^2 m_e c^2 / sqrt(1 + eps^2).
/// The second form of mu_f equals m_f c^2 / sqrt(1 + eps^-2) for eps > 0 and
/// stays finite (zero) at eps = 0.
struct QuantumParams {
  double m_e = 1.0;
  double epsilon = 0.5;
  double c = 1.0;
  double hbar = 1.0;

  /// Throws std::invalid_argument unless m_e, c, hbar > 0 and epsilon >= 0.
  void validate() const;

  [[nodiscard]] double m_f() const { return epsilon * m_e; }
  [[nodiscard]] double rest_energy() const { return m_e * c * c; }
  /// Gap energy of the optical branch, m_e c^2 sqrt(1 + eps^2).
  [[nodiscard]] double gap_energy() const;
  [[nodiscard]] double mu_e() const;
  [[nodiscard]] double mu_f() const;
  /// m_e c^2 / hbar
  [[nodiscard]] double omega_O() const { return rest_energy() / hbar; }
  /// m_f c^2 / hbar
  [[nodiscard]] double omega_A() const { return m_f() * c * c / hbar; }

  static QuantumParams natural(double epsilon) { return {1.0, epsilon, 1.0, 1.0}; }
};

enum class BranchKind { acoustic, optical };
enum class EnergySign { plus, minus };
enum class Spin { up, down };

struct Branch {
  BranchKind kind = BranchKind::acoustic;
  EnergySign sign = EnergySign::plus;

  friend bool operator==(const Branch&, const Branch&) = default;

  [[nodiscard]] double sign_factor() const { return sign == EnergySign::plus ? 1.0 : -1.0; }

  static constexpr Branch acoustic_plus() { return {BranchKind::acoustic, EnergySign::plus}; }
  static constexpr Branch acoustic_minus() { return {BranchKind::acoustic, EnergySign::minus}; }
  static constexpr Branch optical_plus() { return {BranchKind::optical, EnergySign::plus}; }
  static constexpr Branch optical_minus() { return {BranchKind::optical, EnergySign::minus}; }
};

inline constexpr std::array<Branch, 4> kAllBranches = {
    Branch::acoustic_plus(), Branch::acoustic_minus(), Branch::optical_plus(),
    Branch::optical_minus()};

/// "acoustic+", "acoustic-", "optical+", "optical-".
std::string to_string(Branch branch);
std::string to_string(Spin spin);
std::string to_string(BranchKind kind);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
Branch parse_branch(std::string_view name);
Spin parse_spin(std::string_view name);
BranchKind parse_branch_kind(std::string_view name);

}  // namespace dirac8
