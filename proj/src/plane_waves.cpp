#include "dirac8/plane_waves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dirac8/dispersion.hpp"
#include "dirac8/matrix_algebra.hpp"

namespace dirac8::waves {

namespace {

constexpr complex kI{0.0, 1.0};

// Ratio b3/b1 of an optical branch at p_z != 0.
double optical_ratio(Branch branch, double p_z, const QuantumParams& params) {
  const double cp = params.c * p_z;
  const double gap = params.gap_energy();
  const double e_abs = std::hypot(cp, gap);
  if (branch.sign == EnergySign::plus) return cp / (e_abs + gap);
  return -(e_abs + gap) / cp;
}

std::array<int, 4> slots_of(Spin spin) {
  return spin == Spin::up ? algebra::kSpinUpSlots : algebra::kSpinDownSlots;
}

}  // namespace

std::string to_string(AmplitudeForm form) {
  switch (form) {
    case AmplitudeForm::closed_form:
      return "closed_form";
    case AmplitudeForm::rationalized:
      return "rationalized";
    case AmplitudeForm::rest_frame:
      return "rest_frame";
  }
  return "unknown";
}

SectorAmplitudes amplitudes(Branch branch, double p_z, const QuantumParams& params, complex b1) {
  params.validate();
  if (b1 == complex{0.0, 0.0}) throw std::invalid_argument("amplitudes: seed b1 must be nonzero");
  const double eps2 = params.epsilon * params.epsilon;

  if (branch.kind == BranchKind::acoustic) {
    if (branch.sign == EnergySign::plus) return {b1, b1, b1, b1, AmplitudeForm::closed_form};
    return {b1, -b1, b1, -b1, AmplitudeForm::closed_form};
  }
  if (branch.sign == EnergySign::minus && p_z == 0.0) {
    // Negative-energy rest solution lives entirely in the third components.
    return {0.0, b1, 0.0, -eps2 * b1, AmplitudeForm::rest_frame};
  }
  const double ratio = optical_ratio(branch, p_z, params);
  const complex d1 = -eps2 * b1;
  const auto form = branch.sign == EnergySign::plus ? AmplitudeForm::closed_form
                                                    : AmplitudeForm::rationalized;
  return {b1, ratio * b1, d1, ratio * d1, form};
}

std::array<complex, 4> branch_eigenvector(Branch branch, double p_z, const QuantumParams& params) {
  params.validate();
  std::array<complex, 4> v{};
  const double eps2 = params.epsilon * params.epsilon;
  if (branch.kind == BranchKind::optical && branch.sign == EnergySign::minus) {
    // b1/b3 = -c p / (|E| + M c^2) is smooth through p = 0.
    const double cp = params.c * p_z;
    const double gap = params.gap_energy();
    const double inv_ratio = -cp / (std::hypot(cp, gap) + gap);
    v = {inv_ratio, 1.0, -eps2 * inv_ratio, -eps2};
  } else {
    const auto a = amplitudes(branch, p_z, params, 1.0);
    v = {a.b1, a.b3, a.d1, a.d3};
  }
  double norm = 0.0;
  for (const auto& x : v) norm += std::norm(x);
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

Amplitudes8 PlaneWaveSolution::field(double t, double z, const QuantumParams& params) const {
  const complex phase = std::exp(-kI * (energy * t - p_z * z) / params.hbar);
  Amplitudes8 out{};
  for (std::size_t i = 0; i < 8; ++i) out[i] = amplitudes[i] * phase;
  return out;
}

ComplexVector PlaneWaveSolution::as_vector() const {
  ComplexVector v(8);
  for (int i = 0; i < 8; ++i) v(i) = amplitudes[static_cast<std::size_t>(i)];
  return v;
}

double PlaneWaveSolution::max_amplitude() const {
  double m = 0.0;
  for (const auto& a : amplitudes) m = std::max(m, std::abs(a));
  return m;
}

PlaneWaveSolution build_solution(Branch branch, Spin spin, double p_z, const QuantumParams& params,
                                 complex b1) {
  const auto a = amplitudes(branch, p_z, params, b1);
  PlaneWaveSolution s;
  s.branch = branch;
  s.spin = Spin::up;
  s.p_z = p_z;
  s.energy = dispersion::branch_energy(branch, p_z, params);
  s.form = a.form;
  s.amplitudes = {a.b1, 0.0, a.b3, 0.0, a.d1, 0.0, a.d3, 0.0};
  return spin == Spin::up ? s : spin_flip(s);
}

PlaneWaveSolution spin_flip(const PlaneWaveSolution& solution) {
  PlaneWaveSolution out = solution;
  auto& a = out.amplitudes;
  std::swap(a[0], a[1]);
  std::swap(a[2], a[3]);
  std::swap(a[4], a[5]);
  std::swap(a[6], a[7]);
  out.spin = solution.spin == Spin::up ? Spin::down : Spin::up;
  return out;
}

double residual(const PlaneWaveSolution& solution, std::span<const SamplePoint> points,
                const QuantumParams& params, DerivativeMode mode, double fd_step) {
  params.validate();
  const double hbar = params.hbar;
  const double c = params.c;
  const double mu_e = params.mu_e();
  const double mu_f = params.mu_f();
  const double h_t = fd_step * hbar / params.rest_energy();
  const double h_z = fd_step * hbar / (params.m_e * c);

  double worst = 0.0;
  for (const auto& pt : points) {
    const auto f = solution.field(pt.t, pt.z, params);
    Amplitudes8 ft{};
    Amplitudes8 fz{};
    if (mode == DerivativeMode::exact) {
      for (std::size_t i = 0; i < 8; ++i) {
        ft[i] = -kI * solution.energy / hbar * f[i];
        fz[i] = kI * solution.p_z / hbar * f[i];
      }
    } else {
      const auto tp = solution.field(pt.t + h_t, pt.z, params);
      const auto tm = solution.field(pt.t - h_t, pt.z, params);
      const auto zp = solution.field(pt.t, pt.z + h_z, params);
      const auto zm = solution.field(pt.t, pt.z - h_z, params);
      for (std::size_t i = 0; i < 8; ++i) {
        ft[i] = (tp[i] - tm[i]) / (2.0 * h_t);
        fz[i] = (zp[i] - zm[i]) / (2.0 * h_z);
      }
    }
    for (Spin spin : {Spin::up, Spin::down}) {
      const auto s = slots_of(spin);
      const auto pa = static_cast<std::size_t>(s[0]);
      const auto pb = static_cast<std::size_t>(s[1]);
      const auto fa = static_cast<std::size_t>(s[2]);
      const auto fb = static_cast<std::size_t>(s[3]);
      const complex ih = kI * hbar;
      const complex r[4] = {
          ih * ft[pa] - (-ih * c * fz[pb] + mu_e * (f[pa] - f[fa])),
          ih * ft[pb] - (-ih * c * fz[pa] - mu_e * (f[pb] - f[fb])),
          ih * ft[fa] - (-ih * c * fz[fb] + mu_f * (f[fa] - f[pa])),
          ih * ft[fb] - (-ih * c * fz[fa] - mu_f * (f[fb] - f[pb])),
      };
      for (const auto& x : r) worst = std::max(worst, std::abs(x));
    }
  }
  return worst;
}

double relative_residual(const PlaneWaveSolution& solution, std::span<const SamplePoint> points,
                         const QuantumParams& params, DerivativeMode mode) {
  return residual(solution, points, params, mode) /
         (params.rest_energy() * solution.max_amplitude());
}

std::array<PlaneWaveSolution, 8> catalog_eight(double p_z, const QuantumParams& params) {
  std::array<PlaneWaveSolution, 8> out;
  std::size_t i = 0;
  for (Spin spin : {Spin::up, Spin::down}) {
    for (const auto& b : kAllBranches) out[i++] = build_solution(b, spin, p_z, params, 1.0);
  }
  return out;
}

ComplexMatrix amplitude_matrix(std::span<const PlaneWaveSolution> catalog) {
  ComplexMatrix m(8, static_cast<Eigen::Index>(catalog.size()));
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    m.col(static_cast<Eigen::Index>(j)) = catalog[j].as_vector();
  }
  return m;
}

Momentum3 hamiltonian_momentum(const PlaneWaveSolution& solution) {
  return Momentum3::along_z(solution.spin == Spin::up ? solution.p_z : -solution.p_z);
}

NullSpaceComparison compare_with_null_space(const PlaneWaveSolution& solution,
                                            const QuantumParams& params, double tol) {
  const auto h = algebra::hamiltonian_d8(hamiltonian_momentum(solution), params);
  const ComplexMatrix shifted = h - solution.energy * algebra::identity(8);
  const auto v = solution.as_vector();

  NullSpaceComparison out;
  const auto full = algebra::null_space(shifted, tol);
  out.full_dimension = full.size();
  out.full_deviation = full.empty() ? 1.0 : algebra::distance_from_span(v, full);

  const auto slots = slots_of(solution.spin);
  const auto block = algebra::extract_sector(shifted, slots);
  ComplexVector vs(4);
  for (int i = 0; i < 4; ++i) vs(i) = v(slots[static_cast<std::size_t>(i)]);
  const auto sector = algebra::null_space(block, tol);
  out.sector_dimension = sector.size();
  out.sector_deviation = sector.empty() ? 1.0 : algebra::distance_from_span(vs, sector);
  return out;
}

nlohmann::json to_json(const PlaneWaveSolution& solution, double residual_value) {
  nlohmann::json j;
  j["branch"] = to_string(solution.branch);
  j["spin"] = to_string(solution.spin);
  j["p_z"] = solution.p_z;
  j["E"] = solution.energy;
  j["amplitude_form"] = to_string(solution.form);
  auto amps = nlohmann::json::array();
  for (const auto& a : solution.amplitudes) amps.push_back({a.real(), a.imag()});
  j["amplitudes"] = amps;
  j["residual"] = residual_value;
  return j;
}

}  // namespace dirac8::waves
