#include "dirac8/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dirac8/csv.hpp"
#include "dirac8/dispersion.hpp"
#include "dirac8/matrix_algebra.hpp"
#include "dirac8/spectrum.hpp"

namespace dirac8::verify {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

QuantumParams with_epsilon(const QuantumParams& base, double eps) {
  QuantumParams p = base;
  p.epsilon = eps;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(double x) { return csv::format_double(x); }

double max_abs_vec_diff(const evolution::DiracField& a, const evolution::DiracField& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t j = 0; j < a.components[c].size(); ++j) {
      m = std::max(m, std::abs(a.components[c][j] - b.components[c][j]));
    }
  }
  return m;
}

double max_abs_field(const evolution::DiracField& a) {
  double m = 0.0;
  for (const auto& comp : a.components) {
    for (const auto& x : comp) m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace

std::string to_string(Fault fault) {
  switch (fault) {
    case Fault::none:
      return "none";
    case Fault::optical_plus_amplitude:
      return "optical-plus-amplitude";
    case Fault::acoustic_minus_sign:
      return "acoustic-minus-sign";
    case Fault::optical_gap:
      return "optical-gap";
  }
  return "none";
}

std::vector<std::string> fault_names() {
  return {"none", "optical-plus-amplitude", "acoustic-minus-sign", "optical-gap"};
}

Fault parse_fault(std::string_view name) {
  for (Fault f : {Fault::none, Fault::optical_plus_amplitude, Fault::acoustic_minus_sign,
                  Fault::optical_gap}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown fault '" + std::string(name) + "'");
}

double suite_energy(Branch branch, double p_z, const QuantumParams& params, Fault fault) {
  if (fault == Fault::optical_gap && branch.kind == BranchKind::optical) {
    return branch.sign_factor() * std::hypot(params.c * p_z, params.rest_energy());
  }
  return dispersion::branch_energy(branch, p_z, params);
}

waves::PlaneWaveSolution suite_solution(Branch branch, Spin spin, double p_z,
                                        const QuantumParams& params, Fault fault) {
  auto s = waves::build_solution(branch, spin, p_z, params, 1.0);
  const std::size_t slot_b = spin == Spin::up ? 2 : 3;
  if (fault == Fault::optical_plus_amplitude && branch == Branch::optical_plus()) {
    s.amplitudes[slot_b] *= 1.01;
  }
  if (fault == Fault::acoustic_minus_sign && branch == Branch::acoustic_minus()) {
    s.amplitudes[slot_b] = -s.amplitudes[slot_b];
  }
  s.energy = suite_energy(branch, p_z, params, fault);
  return s;
}

VerificationReport check_squaring(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pd(-5.0, 5.0);
  std::uniform_real_distribution<double> ed(0.05, 2.0);
  double d4 = 0.0;
  double d8 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Momentum3 p{pd(rng), pd(rng), pd(rng)};
    const auto params = QuantumParams::natural(ed(rng));
    const double e2 = params.rest_energy() * params.rest_energy() + params.c * params.c * p.norm_squared();
    const auto h4 = algebra::hamiltonian_d4(p, params);
    d4 = std::max(d4, algebra::max_abs_diff(h4 * h4, e2 * algebra::identity(4)) / e2);
    const auto h8 = algebra::hamiltonian_d8(p, params);
    d8 = std::max(d8, algebra::max_abs_diff(h8 * h8, algebra::hamiltonian_d8_squared_closed_form(p, params)) / e2);
  }
  VerificationReport r;
  const std::string note = std::to_string(draws) + " random (p, eps) draws, error relative to m_e^2 c^4 + c^2 |p|^2";
  r.add("squaring_d4_random", "H_D4(p)^2 = (m_e^2 c^4 + c^2 |p|^2) I4", d4, 1e-12, note);
  r.add("squaring_d8_random", "H_D8(p)^2 = m_f^2 c^4 A_{0-}^2 + m_e^2 c^4 A_{0+}^2 + c^2 |p|^2 I8", d8,
        1e-12, note);
  return r;
}

VerificationReport check_dispersion(const QuantumParams& params, Fault fault) {
  params.validate();
  VerificationReport r;
  const double pc = params.m_e * params.c;
  const double gap2 = params.gap_energy() * params.gap_energy();

  double det_err = 0.0;
  for (double pf : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double p = pf * pc;
    for (const auto& b : kAllBranches) {
      const double e = suite_energy(b, p, params, fault);
      const double cp2 = params.c * params.c * p * p;
      const double scale = (e * e + cp2 + gap2) * (e * e + cp2 + gap2);
      det_err = std::max(det_err, std::abs(dispersion::dirac_determinant(e, p, params)) / scale);
    }
  }
  r.add("determinant_roots", "(E^2 - c^2 p^2)(E^2 - c^2 p^2 - (1+eps^2) m_e^2 c^4) = 0 on all branches",
        det_err, 1e-12, "relative to (E^2 + c^2 p^2 + M^2 c^4)^2");

  r.add("optical_rest_energy", "E_O+(0) = m_e c^2 sqrt(1 + eps^2)",
        rel(suite_energy(Branch::optical_plus(), 0.0, params, fault), params.gap_energy()), 1e-12);

  {
    const auto grid = dispersion::momentum_grid(0.0, 3.0, 121);
    const auto t05 = dispersion::branch_table(0.5, grid, QuantumParams::natural(0.5));
    const auto t0 = dispersion::branch_table(0.0, grid, QuantumParams::natural(0.0));
    r.add("table_rest_energy_eps_0.5", "E_O+(0) = sqrt(1.25) at eps = 0.5",
          std::abs(t05.front().e_optical_plus - std::sqrt(1.25)), 1e-12, "natural units");
    r.add("table_rest_energy_eps_0", "E_O+(0) = 1 at eps = 0", std::abs(t0.front().e_optical_plus - 1.0),
          1e-12, "natural units");
    bool lines = true;
    bool monotone = true;
    for (const auto* t : {&t05, &t0}) {
      for (std::size_t i = 0; i < t->size(); ++i) {
        const auto& row = (*t)[i];
        lines = lines && row.e_acoustic_plus == row.p_z && row.e_acoustic_minus == -row.p_z;
        if (i > 0) monotone = monotone && row.e_optical_plus > (*t)[i - 1].e_optical_plus;
      }
    }
    r.add_flag("table_acoustic_lines", "E_A+- = +-c p_z exactly", lines);
    r.add_flag("table_optical_monotone", "E_O+ increasing in p_z >= 0", monotone);
  }

  {
    const auto cp = dispersion::ContinuumParams::from_quantum(params);
    double err = 0.0;
    for (double kf : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double k = kf * pc / params.hbar;
      const auto roots = dispersion::continuum_dispersion(k, cp);
      const double wa = suite_energy(Branch::acoustic_plus(), params.hbar * k, params, fault) / params.hbar;
      const double wo = suite_energy(Branch::optical_plus(), params.hbar * k, params, fault) / params.hbar;
      const double scale = wo * wo;
      err = std::max(err, std::abs(roots.omega2_acoustic - wa * wa) / scale);
      err = std::max(err, std::abs(roots.omega2_optical - wo * wo) / scale);
    }
    r.add("continuum_mapping", "continuum roots with s = c, omega_O = m_e c^2/hbar, omega_A = m_f c^2/hbar equal E^2/hbar^2",
          err, 1e-12, "relative to Omega_O+^2");
  }

  {
    double err = 0.0;
    for (double kf : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double k = kf * pc / params.hbar;
      for (const auto& b : kAllBranches) {
        const double e_true = dispersion::branch_energy(b, params.hbar * k, params);
        const double skew = suite_energy(b, params.hbar * k, params, fault) / e_true;
        const double vp = dispersion::phase_velocity(b, k, params) * skew;
        const double vg = dispersion::group_velocity(b, k, params);
        err = std::max(err, rel(vp * vg, params.c * params.c));
      }
    }
    r.add("phase_group_product", "v_p v_g = c^2 on all four branches", err, 1e-12,
          "k_z in {0.1, 0.5, 1, 2, 5} m_e c / hbar");
  }

  {
    // The optical branch carries a single c^2 k^2 term; a doubled term is not a root.
    const double p = pc;
    const double e_doubled = std::sqrt(2.0 * params.c * params.c * p * p + gap2);
    const double cp2 = params.c * params.c * p * p;
    const double scale = (e_doubled * e_doubled + cp2 + gap2) * (e_doubled * e_doubled + cp2 + gap2);
    const double doubled = std::abs(dispersion::dirac_determinant(e_doubled, p, params)) / scale;
    r.add_flag("optical_branch_reading", "Omega_O^2 = c^2 k^2 + omega_O^2 + omega_A^2 (single c^2 k^2 term)",
               doubled > 1e-3, "doubled-term reading leaves determinant residual " + fmt(doubled));
  }
  return r;
}

VerificationReport check_spectrum(const QuantumParams& params, Fault fault) {
  params.validate();
  VerificationReport r;
  const double pc = params.m_e * params.c;
  const double e0 = params.rest_energy();
  std::vector<double> eps_values = {0.25, 0.5, 2.0};
  if (std::find(eps_values.begin(), eps_values.end(), params.epsilon) == eps_values.end()) {
    eps_values.push_back(params.epsilon);
  }
  const Momentum3 probes[] = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.7 * pc}, {0.3 * pc, -1.2 * pc, 0.5 * pc},
                              {2.0 * pc, 1.0 * pc, -1.0 * pc}};
  double imag = 0.0;
  double match = 0.0;
  for (double eps : eps_values) {
    const auto p_eps = with_epsilon(params, eps);
    for (const auto& p : probes) {
      const auto ev = algebra::eigenvalues(algebra::hamiltonian_d8(p, p_eps));
      const double pn = std::sqrt(p.norm_squared());
      std::vector<double> expected;
      for (const auto& b : kAllBranches) {
        const double e = suite_energy(b, pn, p_eps, fault);
        expected.push_back(e);
        expected.push_back(e);
      }
      std::sort(expected.begin(), expected.end());
      const double scale = std::max(e0, std::abs(expected.back()));
      for (int i = 0; i < 8; ++i) {
        imag = std::max(imag, std::abs(ev(i).imag()) / e0);
        match = std::max(match, std::abs(ev(i).real() - expected[static_cast<std::size_t>(i)]) / scale);
      }
    }
  }
  r.add("spectrum_real", "Im(eig H_D8(p)) = 0", imag, 1e-10, "relative to m_e c^2");
  r.add("spectrum_branch_match", "eig H_D8(p) = {E_A+-, E_O+-} each with multiplicity 2", match, 1e-10,
        "eps in {0.25, 0.5, 2} and the run value");

  const Momentum3 probe{0.3 * pc, -1.2 * pc, 0.5 * pc};
  const auto h1 = algebra::hamiltonian_d8(probe, with_epsilon(params, 1.0));
  r.add_flag("hermitian_at_eps_1", "H_D8 = H_D8^dagger at eps = 1", algebra::is_hermitian(h1, 1e-14 * e0));
  if (params.epsilon != 1.0) {
    const auto h = algebra::hamiltonian_d8(probe, params);
    r.add_flag("non_hermitian_off_eps_1", "H_D8 != H_D8^dagger for eps != 1 (spectrum still real)",
               !algebra::is_hermitian(h, 1e-14 * e0));
  }
  return r;
}

VerificationReport check_amplitudes(int draws, std::uint64_t seed, const QuantumParams& base,
                                    Fault fault) {
  base.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pd(-5.0, 5.0);
  std::uniform_real_distribution<double> ed(0.05, 2.0);
  double sector = 0.0;
  double full = 0.0;
  auto compare = [&](double p_z, const QuantumParams& params) {
    for (Spin spin : {Spin::up, Spin::down}) {
      for (const auto& b : kAllBranches) {
        const auto sol = suite_solution(b, spin, p_z, params, fault);
        const auto cmp = waves::compare_with_null_space(sol, params);
        sector = std::max(sector, cmp.sector_deviation);
        full = std::max(full, cmp.full_deviation);
      }
    }
  };
  for (int i = 0; i < draws; ++i) {
    const double p = pd(rng) * base.m_e * base.c;
    compare(p, with_epsilon(base, ed(rng)));
  }
  compare(0.0, base);
  const std::string note = std::to_string(draws) + " random (p_z, eps) draws plus p_z = 0, both spins";
  VerificationReport r;
  r.add("amplitudes_vs_sector_null_space", "closed-form (b1, b3, d1, d3) in ker(H_sector - E I4)", sector,
        1e-10, note);
  r.add("amplitudes_vs_full_null_space", "closed-form amplitude vector in ker(H_D8(p) - E I8)", full, 1e-10,
        note);
  return r;
}

VerificationReport check_catalog(const QuantumParams& params, double p_z, Fault fault) {
  params.validate();
  VerificationReport r;
  const double tn = params.hbar / params.rest_energy();
  const double ln = params.hbar / (params.m_e * params.c);
  const std::vector<waves::SamplePoint> pts = {{0.0, 0.0}, {0.7 * tn, -1.3 * ln}, {2.5 * tn, 4.1 * ln},
                                               {-3.2 * tn, 0.4 * ln}};
  std::array<waves::PlaneWaveSolution, 8> cat;
  std::size_t i = 0;
  for (Spin spin : {Spin::up, Spin::down}) {
    for (const auto& b : kAllBranches) cat[i++] = suite_solution(b, spin, p_z, params, fault);
  }
  double res = 0.0;
  double fd = 0.0;
  bool structure = true;
  for (const auto& s : cat) {
    res = std::max(res, waves::relative_residual(s, pts, params, waves::DerivativeMode::exact));
    fd = std::max(fd, waves::relative_residual(s, pts, params, waves::DerivativeMode::finite_difference));
    const auto& zero_slots = s.spin == Spin::up ? algebra::kSpinDownSlots : algebra::kSpinUpSlots;
    for (int z : zero_slots) structure = structure && s.amplitudes[static_cast<std::size_t>(z)] == complex{};
  }
  r.add("catalog_residual", "plane waves satisfy the first-order system (both spin sectors)", res, 1e-10,
        "exact derivatives, relative to m_e c^2 max|amplitude|");
  r.add("catalog_residual_finite_difference", "same, central differences with h = 1e-5", fd, 1e-8);
  r.add_flag("catalog_spin_structure", "spin up: slots 2, 4 zero; spin down: slots 1, 3 zero", structure);
  const double det = std::abs(waves::amplitude_matrix(cat).determinant());
  r.add("catalog_independence", "|det[eight amplitude vectors]| > 1e-8", 1e-8 / std::max(det, 1e-300), 1.0,
        "|det| = " + fmt(det));
  return r;
}

VerificationReport check_cancellation(const QuantumParams& params, int points, std::uint64_t seed,
                                      Fault fault) {
  params.validate();
  VerificationReport r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  const double tn = params.hbar / params.rest_energy();
  const double ln = params.hbar / (params.m_e * params.c);
  double worst = 0.0;
  for (Spin spin : {Spin::up, Spin::down}) {
    const auto sol = suite_solution(Branch::acoustic_minus(), spin, 1.3 * params.m_e * params.c, params, fault);
    const double scale = sol.max_amplitude();
    const auto s = spin == Spin::up ? algebra::kSpinUpSlots : algebra::kSpinDownSlots;
    for (int i = 0; i < points; ++i) {
      const auto f = sol.field(u(rng) * tn, u(rng) * ln, params);
      const auto at = [&](int k) { return f[static_cast<std::size_t>(s[static_cast<std::size_t>(k)])]; };
      worst = std::max({worst, std::abs(at(0) + at(1)) / scale, std::abs(at(2) + at(3)) / scale});
    }
  }
  r.add("acoustic_minus_cancellation", "Psi_a + Psi_b = 0 and Phi_a + Phi_b = 0 on acoustic-", worst, 1e-14,
        std::to_string(points) + " random (t, z) per spin, relative to amplitude scale");

  std::vector<double> eps = {0.05, 0.1, 0.2, 0.4, 0.8};
  std::vector<double> ratio;
  for (double e : eps) {
    const auto a = waves::amplitudes(Branch::optical_plus(), params.m_e * params.c, with_epsilon(params, e), 1.0);
    ratio.push_back(std::abs(a.d1 / a.b1));
  }
  r.add("optical_d_scaling", "|d1 / b1| = eps^2 on the optical branches",
        std::abs(chain::loglog_slope(eps, ratio) - 2.0), 1e-6, "fitted log-log exponent minus 2");
  return r;
}

ChainRun run_chain_mode(const chain::ChainParams& params, std::size_t n_sites, int mode,
                        BranchKind branch, double periods, double dt) {
  params.validate();
  const double k = chain::mode_wavenumber(n_sites, mode, params);
  const auto modes = chain::discrete_dispersion(k, params);
  const auto sc = chain::characteristic_scales(params);
  const auto roots = dispersion::continuum_dispersion(k, {sc.s_m, sc.s_M, sc.omega_O, sc.omega_A});
  const bool acoustic = branch == BranchKind::acoustic;

  ChainRun run;
  run.omega_discrete = acoustic ? modes.omega_acoustic : modes.omega_optical;
  run.omega_continuum = std::sqrt(acoustic ? roots.omega2_acoustic : roots.omega2_optical);
  const double w_max = chain::max_frequency(params);
  const double w = run.omega_discrete;
  run.dt = dt > 0.0 ? dt : (w > 0.0 ? std::min(0.02 / w, 1.0 / w_max) : 1.0 / w_max);
  chain::detail::check_stability(run.dt, params);

  auto state = chain::init_mode(n_sites, mode, 1.0, branch, params);
  if (!(w > 0.0)) {
    run.trajectory.push_back(state);
    run.omega_measured = 0.0;
    return run;
  }
  run.steps = static_cast<long>(std::ceil(periods * kTwoPi / w / run.dt));
  run.trajectory.reserve(static_cast<std::size_t>(run.steps) + 1);
  const double e0 = chain::total_energy(state, params);
  chain::integrate(state, run.dt, run.steps, params, 1, [&](const chain::LatticeState& s) {
    run.trajectory.push_back(s);
    run.energy_drift = std::max(run.energy_drift, std::abs(chain::total_energy(s, params) - e0) / e0);
  });
  run.omega_measured = chain::measure_mode_frequency(run.trajectory, 0);
  return run;
}

VerificationReport check_chain(const chain::ChainParams& params) {
  VerificationReport r;
  const std::vector<double> kas = {0.2, 0.1, 0.05, 0.025};
  const auto study = chain::convergence_study(params, kas);
  r.add("chain_convergence_exponent", "|omega_d^2 - omega_c^2| / omega_c^2 ~ (ka)^2 on the acoustic branch",
        std::abs(study.acoustic_exponent - 2.0), 0.2,
        "fitted exponent " + fmt(study.acoustic_exponent) + " (optical branch: " +
            fmt(study.optical_exponent) + ")");
  for (BranchKind b : {BranchKind::acoustic, BranchKind::optical}) {
    const auto run = run_chain_mode(params, 128, 2, b);
    const std::string name = to_string(b);
    r.add("chain_mode_frequency_" + name, "measured omega of ring mode 2 = discrete dispersion",
          rel(run.omega_measured, run.omega_discrete), 1e-4,
          "omega_meas = " + fmt(run.omega_measured) + ", omega_disc = " + fmt(run.omega_discrete));
    r.add("chain_energy_" + name, "velocity-Verlet energy of a travelling mode stays constant",
          run.energy_drift, 1e-6);
  }
  return r;
}

VerificationReport check_evolution(const QuantumParams& params) {
  params.validate();
  using namespace evolution;
  VerificationReport r;
  const double ln = params.hbar / (params.m_e * params.c);
  const double tn = params.hbar / params.rest_energy();
  const double pc = params.m_e * params.c;

  {
    const Grid grid{64, kTwoPi * 10.0 * ln};
    double err = 0.0;
    for (Spin spin : {Spin::up, Spin::down}) {
      for (const auto& b : kAllBranches) {
        const auto sol = waves::build_solution(b, spin, pc, params);
        const auto start = sample_plane_wave(sol, grid, 0.0, params);
        const auto end = evolve(start, 0.37 * tn, 10, params);
        const auto exact = sample_plane_wave(sol, grid, 3.7 * tn, params);
        err = std::max(err, max_abs_vec_diff(end, exact) / sol.max_amplitude());
      }
    }
    r.add("evolution_plane_wave_phase", "exact propagation multiplies plane waves by e^{-i E t / hbar}", err,
          1e-10, "all eight catalog solutions, p_z = m_e c");
  }

  const Grid small{256, 100.0 * ln};
  PacketSpec spec;
  spec.k0 = 1.0 / ln;
  spec.sigma = 5.0 * ln;
  spec.center = 50.0 * ln;
  const auto packet = init_packet(spec, small, params);
  {
    const auto fwd = evolve(packet, 10.0 * tn, 1, params);
    const auto back = evolve(fwd, -10.0 * tn, 1, params);
    r.add("evolution_time_reversal", "U(-t) U(t) psi = psi", max_abs_vec_diff(back, packet), 1e-10,
          "optical+ packet, unit peak");
    const double q0 = conserved_quadratic(packet, params);
    r.add("evolution_conserved_quadratic", "sum_k |c_k|^2 constant under exact evolution",
          rel(conserved_quadratic(fwd, params), q0), 1e-12);
  }
  {
    const auto p1 = with_epsilon(params, 1.0);
    const auto pk = init_packet(spec, small, p1);
    double drift = 0.0;
    const double n0 = l2_norm_squared(pk);
    for (int i = 1; i <= 4; ++i) drift = std::max(drift, rel(l2_norm_squared(evolve(pk, 2.5 * tn, i, p1)), n0));
    r.add("evolution_l2_norm_eps_1", "plain L2 norm constant when H is Hermitian (eps = 1)", drift, 1e-10);
  }
  {
    const double t_total = 1.0 * tn;
    const long n1 = static_cast<long>(std::ceil(t_total / (small.dz() / (8.0 * params.c))));
    const auto ref = evolve(packet, t_total, 1, params);
    const double e1 = max_abs_vec_diff(evolve(packet, t_total / n1, n1, params, Method::rk4), ref);
    const double e2 = max_abs_vec_diff(evolve(packet, t_total / (2 * n1), 2 * n1, params, Method::rk4), ref);
    r.add("evolution_rk4_order", "RK4 error ratio under dt halving = 16 +- 3", std::abs(e1 / e2 - 16.0), 3.0,
          "ratio " + fmt(e1 / e2) + " (errors " + fmt(e1) + ", " + fmt(e2) + ")");
  }
  {
    // Acoustic packets translate rigidly: one lap of the domain returns the initial state.
    auto ac = spec;
    ac.branch = Branch::acoustic_plus();
    const auto pk = init_packet(ac, small, params);
    const auto lap = evolve(pk, small.length / params.c, 1, params);
    r.add("evolution_acoustic_rigid", "acoustic+ packet unchanged after one lap", max_abs_vec_diff(lap, pk) /
          max_abs_field(pk), 1e-8);
  }

  {
    EvolutionConfig cfg;
    cfg.grid = Grid{1024, 200.0 * ln};
    cfg.t_end = 30.0 * tn;
    cfg.n_samples = 41;
    struct Case {
      Branch branch;
      double tol;
    };
    for (const Case& cs : {Case{Branch::optical_plus(), 0.01}, Case{Branch::optical_minus(), 0.01},
                           Case{Branch::acoustic_plus(), 0.001}}) {
      PacketSpec ps;
      ps.k0 = 1.0 / ln;
      ps.sigma = 10.0 * ln;
      ps.branch = cs.branch;
      ps.center = 100.0 * ln;
      const double expected = dispersion::group_velocity(cs.branch, ps.k0, params);
      const auto m = measure_group_velocity(ps, cfg, params);
      r.add("group_velocity_" + to_string(cs.branch), "centroid velocity = dOmega/dk at k0 = m_e c / hbar",
            rel(m.velocity, expected), cs.tol, "measured " + fmt(m.velocity) + ", expected " + fmt(expected));
      if (cs.branch.kind == BranchKind::optical) {
        r.add_flag("packet_spreading_" + to_string(cs.branch), "optical packet width grows",
                   m.track.width.back() > m.track.width.front());
      }
    }
  }

  {
    // Second-order system fed with (Psi_a, Phi_a) of a first-order solution
    // oscillates at the first-order branch frequency.
    const Grid g{16, kTwoPi * 2.0 * ln};
    const int n_samples = 256;
    const double dt = 0.2 * tn;
    double worst = 0.0;
    for (const auto& b : kAllBranches) {
      const auto sol = waves::build_solution(b, Spin::up, pc, params);
      const auto kgf0 = kgf_from_dirac(sample_plane_wave(sol, g, 0.0, params), params);
      std::vector<double> t(n_samples);
      std::vector<complex> psi(n_samples);
      for (int i = 0; i < n_samples; ++i) {
        t[static_cast<std::size_t>(i)] = dt * i;
        const auto s = i == 0 ? kgf0 : evolve(kgf0, dt, i, params);
        psi[static_cast<std::size_t>(i)] = s.psi[0];
      }
      const double bin = spectrum::frequency_resolution(t);
      const double omega = sol.energy / params.hbar;
      const double meas = spectrum::spectral_peak_frequency(t, psi);
      worst = std::max(worst, std::abs(meas - omega) / bin);
    }
    r.add("kgf_spectral_peak", "second-order evolution peaks at E/hbar of the first-order branch", worst, 1.0,
          "distance in frequency bins, all four branches");
  }
  return r;
}

std::string optical_branch_reading_note() {
  return "Optical branch read as Omega^2 = c^2 k^2 + omega_O^2 + omega_A^2 with a single c^2 k^2 term; "
         "a doubled c^2 k^2 term would not be a root of the determinant (see check optical_branch_reading).";
}

VerificationReport run_suite(const SuiteOptions& options) {
  const auto& p = options.params;
  p.validate();
  VerificationReport r = algebra::check_algebra(p);
  r.append(check_squaring(100, options.seed));
  r.append(check_dispersion(p, options.fault));
  r.append(check_spectrum(p, options.fault));
  r.append(check_amplitudes(50, options.seed + 1, p, options.fault));
  r.append(check_catalog(p, p.m_e * p.c, options.fault));
  r.append(check_cancellation(p, 100, options.seed + 2, options.fault));
  if (options.include_chain) r.append(check_chain(chain::ChainParams{}));
  if (options.include_evolution) r.append(check_evolution(p));
  r.add_note(optical_branch_reading_note());
  if (options.fault != Fault::none) r.add_note("fault injected: " + to_string(options.fault));
  return r;
}

}  // namespace dirac8::verify
