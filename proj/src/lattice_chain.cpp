#include "dirac8/lattice_chain.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "dirac8/csv.hpp"
#include "dirac8/dispersion.hpp"
#include "dirac8/spectrum.hpp"

namespace dirac8::chain {

void ChainParams::validate() const {
  const bool finite = std::isfinite(m) && std::isfinite(M) && std::isfinite(K) &&
                      std::isfinite(I) && std::isfinite(J) && std::isfinite(a);
  if (!finite || !(m > 0.0) || !(M > 0.0) || !(K > 0.0) || !(a > 0.0) || !(I >= 0.0) ||
      !(J >= 0.0)) {
    throw std::invalid_argument("ChainParams: require m, M, K, a > 0 and I, J >= 0");
  }
}

CharacteristicScales characteristic_scales(const ChainParams& params) {
  params.validate();
  CharacteristicScales s;
  s.omega_O = std::sqrt(params.K / params.m);
  s.omega_A = std::sqrt(params.K / params.M);
  s.omega_m = std::sqrt(params.I / params.m);
  s.omega_M = std::sqrt(params.J / params.M);
  s.s_m = params.a * s.omega_m;
  s.s_M = params.a * s.omega_M;
  s.epsilon = std::sqrt(params.m / params.M);
  return s;
}

namespace {

Eigen::Vector2d branch_vector(double a11, double a22, double wo2, double wa2, double lambda) {
  // Two candidate null vectors of (A - lambda); keep the better conditioned one.
  Eigen::Vector2d from_row1(wo2, a11 - lambda);
  Eigen::Vector2d from_row2(a22 - lambda, wa2);
  Eigen::Vector2d v = from_row1.norm() >= from_row2.norm() ? from_row1 : from_row2;
  v.normalize();
  if (v(0) < 0.0 || (v(0) == 0.0 && v(1) < 0.0)) v = -v;
  return v;
}

}  // namespace

DiscreteModes discrete_dispersion(double k, const ChainParams& params) {
  const auto sc = characteristic_scales(params);
  const double s = std::sin(0.5 * k * params.a);
  const double s2 = s * s;
  const double wo2 = sc.omega_O * sc.omega_O;
  const double wa2 = sc.omega_A * sc.omega_A;
  const double xm = 4.0 * sc.omega_m * sc.omega_m * s2;
  const double xM = 4.0 * sc.omega_M * sc.omega_M * s2;
  const double a11 = wo2 + xm;
  const double a22 = wa2 + xM;
  const double diff = a11 - a22;
  const double lambda_opt = 0.5 * (a11 + a22 + std::sqrt(diff * diff + 4.0 * wo2 * wa2));
  const double det = wo2 * xM + xm * wa2 + xm * xM;
  const double lambda_ac = det / lambda_opt;

  DiscreteModes modes;
  modes.omega_acoustic = std::sqrt(lambda_ac);
  modes.omega_optical = std::sqrt(lambda_opt);
  modes.eigvec_acoustic = branch_vector(a11, a22, wo2, wa2, lambda_ac);
  modes.eigvec_optical = branch_vector(a11, a22, wo2, wa2, lambda_opt);
  return modes;
}

double max_frequency(const ChainParams& params) {
  return discrete_dispersion(std::numbers::pi / params.a, params).omega_optical;
}

LatticeState::LatticeState(std::size_t n_sites)
    : u(n_sites, 0.0), U(n_sites, 0.0), du_dt(n_sites, 0.0), dU_dt(n_sites, 0.0) {}

void LatticeState::validate() const {
  const auto n = u.size();
  if (U.size() != n || du_dt.size() != n || dU_dt.size() != n) {
    throw std::invalid_argument("LatticeState: arrays must share one length");
  }
}

double mode_wavenumber(std::size_t n_sites, int mode_index, const ChainParams& params) {
  return 2.0 * std::numbers::pi * mode_index / (static_cast<double>(n_sites) * params.a);
}

LatticeState init_mode(std::size_t n_sites, int mode_index, double amplitude, BranchKind branch,
                       const ChainParams& params) {
  params.validate();
  if (n_sites < 2) throw std::invalid_argument("init_mode: need at least 2 sites");
  if (mode_index < 0 || static_cast<std::size_t>(mode_index) >= n_sites) {
    throw std::invalid_argument("init_mode: mode index out of range");
  }
  const double k = mode_wavenumber(n_sites, mode_index, params);
  const auto modes = discrete_dispersion(k, params);
  const bool acoustic = branch == BranchKind::acoustic;
  const Eigen::Vector2d v = acoustic ? modes.eigvec_acoustic : modes.eigvec_optical;
  const double omega = acoustic ? modes.omega_acoustic : modes.omega_optical;

  LatticeState s(n_sites);
  for (std::size_t n = 0; n < n_sites; ++n) {
    // Reduce the phase index modulo n_sites so large mode indices stay exact.
    const auto idx = (static_cast<std::size_t>(mode_index) * n) % n_sites;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(idx) /
                         static_cast<double>(n_sites);
    const double c = std::cos(phase);
    const double sn = std::sin(phase);
    s.u[n] = amplitude * v(0) * c;
    s.U[n] = amplitude * v(1) * c;
    s.du_dt[n] = amplitude * v(0) * omega * sn;
    s.dU_dt[n] = amplitude * v(1) * omega * sn;
  }
  return s;
}

namespace detail {

void accelerations(const LatticeState& s, const ChainParams& p, std::vector<double>& acc_u,
                   std::vector<double>& acc_U) {
  const std::size_t n = s.n_sites();
  acc_u.resize(n);
  acc_U.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = i == 0 ? n - 1 : i - 1;
    const std::size_t next = i + 1 == n ? 0 : i + 1;
    const double coupling = p.K * (s.U[i] - s.u[i]);
    acc_u[i] = (coupling + p.I * (s.u[prev] + s.u[next] - 2.0 * s.u[i])) / p.m;
    acc_U[i] = (-coupling + p.J * (s.U[prev] + s.U[next] - 2.0 * s.U[i])) / p.M;
  }
}

void check_stability(double dt, const ChainParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("chain step: dt must be positive");
  const double bound = dt * max_frequency(params);
  if (!(bound < 2.0)) {
    throw StabilityError("chain step: dt * omega_max = " + csv::format_double(bound) +
                         " violates the velocity-Verlet bound 2");
  }
}

void verlet_step_in_place(LatticeState& s, double dt, const ChainParams& params,
                          std::vector<double>& acc_u, std::vector<double>& acc_U) {
  const std::size_t n = s.n_sites();
  const double half = 0.5 * dt;
  for (std::size_t i = 0; i < n; ++i) {
    s.du_dt[i] += half * acc_u[i];
    s.dU_dt[i] += half * acc_U[i];
    s.u[i] += dt * s.du_dt[i];
    s.U[i] += dt * s.dU_dt[i];
  }
  accelerations(s, params, acc_u, acc_U);
  for (std::size_t i = 0; i < n; ++i) {
    s.du_dt[i] += half * acc_u[i];
    s.dU_dt[i] += half * acc_U[i];
  }
  s.t += dt;
}

}  // namespace detail

LatticeState step(const LatticeState& state, double dt, const ChainParams& params) {
  params.validate();
  state.validate();
  detail::check_stability(dt, params);
  LatticeState next = state;
  std::vector<double> acc_u;
  std::vector<double> acc_U;
  detail::accelerations(next, params, acc_u, acc_U);
  detail::verlet_step_in_place(next, dt, params, acc_u, acc_U);
  return next;
}

void integrate(LatticeState& state, double dt, long n_steps, const ChainParams& params) {
  integrate(state, dt, n_steps, params, 0, [](const LatticeState&) {});
}

double total_energy(const LatticeState& s, const ChainParams& p) {
  s.validate();
  const std::size_t n = s.n_sites();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = i + 1 == n ? 0 : i + 1;
    const double inner = s.U[i] - s.u[i];
    const double du = s.u[next] - s.u[i];
    const double dU = s.U[next] - s.U[i];
    e += 0.5 * p.m * s.du_dt[i] * s.du_dt[i] + 0.5 * p.M * s.dU_dt[i] * s.dU_dt[i] +
         0.5 * p.K * inner * inner + 0.5 * p.I * du * du + 0.5 * p.J * dU * dU;
  }
  return e;
}

double measure_mode_frequency(std::span<const LatticeState> trajectory, std::size_t site) {
  if (trajectory.size() < 8) throw std::invalid_argument("measure_mode_frequency: trajectory too short");
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> v;
  t.reserve(trajectory.size());
  x.reserve(trajectory.size());
  v.reserve(trajectory.size());
  for (const auto& s : trajectory) {
    if (site >= s.n_sites()) throw std::invalid_argument("measure_mode_frequency: site out of range");
    t.push_back(s.t);
    x.push_back(s.u[site]);
    v.push_back(s.du_dt[site]);
  }
  const double omega_zc = spectrum::zero_crossing_frequency(t, x, v);
  const double omega_sp = spectrum::spectral_peak_frequency(t, x);
  const double bin = spectrum::frequency_resolution(t);
  return std::abs(omega_zc - omega_sp) <= 2.0 * bin ? omega_zc : omega_sp;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: bad input");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceStudy convergence_study(const ChainParams& params, std::span<const double> ka_values) {
  const auto sc = characteristic_scales(params);
  const dispersion::ContinuumParams cp{sc.s_m, sc.s_M, sc.omega_O, sc.omega_A};
  ConvergenceStudy study;
  std::vector<double> kas;
  std::vector<double> err_ac;
  std::vector<double> err_op;
  for (double ka : ka_values) {
    const double k = ka / params.a;
    const auto d = discrete_dispersion(k, params);
    const auto c = dispersion::continuum_dispersion(k, cp);
    const double wa2 = d.omega_acoustic * d.omega_acoustic;
    const double wo2 = d.omega_optical * d.omega_optical;
    ConvergencePoint ac{ka, wa2, c.omega2_acoustic,
                        std::abs(wa2 - c.omega2_acoustic) / c.omega2_acoustic};
    ConvergencePoint op{ka, wo2, c.omega2_optical,
                        std::abs(wo2 - c.omega2_optical) / c.omega2_optical};
    study.acoustic.push_back(ac);
    study.optical.push_back(op);
    kas.push_back(ka);
    err_ac.push_back(ac.relative_error);
    err_op.push_back(op.relative_error);
  }
  if (kas.size() >= 2) {
    study.acoustic_exponent = loglog_slope(kas, err_ac);
    study.optical_exponent = loglog_slope(kas, err_op);
  }
  return study;
}

void write_trajectory_csv(std::ostream& out, std::span<const LatticeState> trajectory) {
  out << "t,site,u,U,du_dt,dU_dt\n";
  for (const auto& s : trajectory) {
    for (std::size_t i = 0; i < s.n_sites(); ++i) {
      csv::write_row(out, {s.t, static_cast<double>(i), s.u[i], s.U[i], s.du_dt[i], s.dU_dt[i]});
    }
  }
}

}  // namespace dirac8::chain
