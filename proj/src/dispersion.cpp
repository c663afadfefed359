#include "dirac8/dispersion.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dirac8/csv.hpp"

namespace dirac8::dispersion {

ContinuumParams ContinuumParams::from_quantum(const QuantumParams& params) {
  params.validate();
  return {params.c, params.c, params.omega_O(), params.omega_A()};
}

ContinuumRoots continuum_dispersion(double k, const ContinuumParams& params) {
  const double wo2 = params.omega_O * params.omega_O;
  const double wa2 = params.omega_A * params.omega_A;
  const double xm = params.s_m * params.s_m * k * k;
  const double xM = params.s_M * params.s_M * k * k;
  const double a = xm + wo2;
  const double b = xM + wa2;
  const double diff = a - b;
  const double large = 0.5 * (a + b + std::sqrt(diff * diff + 4.0 * wo2 * wa2));
  // Product of the roots, expanded so that the k -> 0 zero is exact.
  const double product = xm * xM + xm * wa2 + xM * wo2;
  const double small = large > 0.0 ? product / large : 0.0;
  return {small, large};
}

double dirac_determinant(double energy, double p_z, const QuantumParams& params) {
  params.validate();
  const double cp2 = params.c * params.c * p_z * p_z;
  const double e2 = energy * energy;
  const double gap = params.gap_energy();
  return (e2 - cp2) * (e2 - cp2 - gap * gap);
}

double branch_energy(Branch branch, double p_z, const QuantumParams& params) {
  params.validate();
  const double s = branch.sign_factor();
  const double cp = params.c * p_z;
  if (branch.kind == BranchKind::acoustic) return s * cp;
  return s * std::hypot(cp, params.gap_energy());
}

double branch_frequency(Branch branch, double k_z, const QuantumParams& params) {
  return branch_energy(branch, params.hbar * k_z, params) / params.hbar;
}

double phase_velocity(Branch branch, double k_z, const QuantumParams& params) {
  if (k_z == 0.0) throw std::domain_error("phase_velocity: undefined at k_z = 0");
  if (branch.kind == BranchKind::acoustic) return branch.sign_factor() * params.c;
  return branch_frequency(branch, k_z, params) / k_z;
}

double group_velocity(Branch branch, double k_z, const QuantumParams& params) {
  params.validate();
  if (branch.kind == BranchKind::acoustic) return branch.sign_factor() * params.c;
  return params.c * params.c * k_z / branch_frequency(branch, k_z, params);
}

std::vector<BranchTableRow> branch_table(double epsilon, std::span<const double> p_grid,
                                      const QuantumParams& params) {
  QuantumParams q = params;
  q.epsilon = epsilon;
  q.validate();
  std::vector<BranchTableRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    rows.push_back({p, branch_energy(Branch::acoustic_plus(), p, q),
                    branch_energy(Branch::acoustic_minus(), p, q),
                    branch_energy(Branch::optical_plus(), p, q),
                    branch_energy(Branch::optical_minus(), p, q)});
  }
  return rows;
}

std::vector<double> momentum_grid(double p_min, double p_max, int n) {
  if (n < 2) throw std::invalid_argument("momentum_grid: need at least 2 points");
  if (!(p_max > p_min)) throw std::invalid_argument("momentum_grid: require p_max > p_min");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double step = (p_max - p_min) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = p_min + step * i;
  grid.back() = p_max;
  return grid;
}

void write_branch_table_csv(std::ostream& out, std::span<const BranchTableRow> rows) {
  out << kBranchTableHeader << '\n';
  for (const auto& r : rows) {
    csv::write_row(out, {r.p_z, r.e_acoustic_plus, r.e_acoustic_minus, r.e_optical_plus,
                         r.e_optical_minus});
  }
}

}  // namespace dirac8::dispersion
