#include "dirac8/types.hpp"

#include <cmath>
#include <stdexcept>

namespace dirac8 {

void QuantumParams::validate() const {
  if (!(m_e > 0.0) || !(c > 0.0) || !(hbar > 0.0) || !(epsilon >= 0.0) ||
      !std::isfinite(m_e) || !std::isfinite(c) || !std::isfinite(hbar) ||
      !std::isfinite(epsilon)) {
    throw std::invalid_argument("QuantumParams: require m_e, c, hbar > 0 and epsilon >= 0");
  }
}

double QuantumParams::gap_energy() const {
  return rest_energy() * std::sqrt(1.0 + epsilon * epsilon);
}

double QuantumParams::mu_e() const {
  return rest_energy() / std::sqrt(1.0 + epsilon * epsilon);
}

double QuantumParams::mu_f() const {
  return epsilon * epsilon * rest_energy() / std::sqrt(1.0 + epsilon * epsilon);
}

std::string to_string(Branch branch) {
  std::string name = to_string(branch.kind);
  name += branch.sign == EnergySign::plus ? '+' : '-';
  return name;
}

std::string to_string(Spin spin) { return spin == Spin::up ? "up" : "down"; }

std::string to_string(BranchKind kind) {
  return kind == BranchKind::acoustic ? "acoustic" : "optical";
}

Branch parse_branch(std::string_view name) {
  for (const auto& b : kAllBranches) {
    if (to_string(b) == name) return b;
  }
  throw std::invalid_argument("unknown branch '" + std::string(name) +
                              "' (expected acoustic+, acoustic-, optical+ or optical-)");
}

Spin parse_spin(std::string_view name) {
  if (name == "up") return Spin::up;
  if (name == "down") return Spin::down;
  throw std::invalid_argument("unknown spin '" + std::string(name) + "' (expected up or down)");
}

BranchKind parse_branch_kind(std::string_view name) {
  if (name == "acoustic") return BranchKind::acoustic;
  if (name == "optical") return BranchKind::optical;
  throw std::invalid_argument("unknown branch kind '" + std::string(name) + "'");
}

}  // namespace dirac8
