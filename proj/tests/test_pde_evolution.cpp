#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dirac8/dispersion.hpp"
#include "dirac8/matrix_algebra.hpp"
#include "dirac8/pde_evolution.hpp"
#include "dirac8/plane_waves.hpp"
#include "dirac8/spectrum.hpp"
#include "oracle.hpp"

using namespace dirac8;
using namespace dirac8::evolution;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_diff(const DiracField& a, const DiracField& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t j = 0; j < a.components[c].size(); ++j) {
      m = std::max(m, std::abs(a.components[c][j] - b.components[c][j]));
    }
  }
  return m;
}

PacketSpec small_packet(Branch b = Branch::optical_plus()) {
  PacketSpec s;
  s.k0 = 1.0;
  s.sigma = 5.0;
  s.center = 50.0;
  s.branch = b;
  return s;
}

const Grid kSmall{256, 100.0};

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW((Grid{1024, 200.0}.validate()));
  CHECK_THROWS_AS((Grid{1000, 200.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Grid{2, 200.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Grid{64, 0.0}.validate()), std::invalid_argument);
  CHECK(Grid{1024, 200.0}.dz() == doctest::Approx(0.1953125));
}

TEST_CASE("field arrays must match the grid") {
  DiracField f(Grid{16, 1.0}, Spin::up);
  CHECK_NOTHROW(f.validate());
  f.components[2].resize(8);
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
}

TEST_CASE("under-resolved packets are rejected") {
  const auto p = QuantumParams::natural(0.5);
  PacketSpec s;
  s.sigma = 0.5;
  CHECK_THROWS_AS(init_packet(s, Grid{1024, 200.0}, p), std::invalid_argument);
  s.sigma = 4.0 * Grid{1024, 200.0}.dz();
  CHECK_NOTHROW(init_packet(s, Grid{1024, 200.0}, p));
}

TEST_CASE("packet has unit peak, sits at its centre and is branch-pure") {
  const auto p = QuantumParams::natural(0.5);
  const auto f = init_packet(small_packet(), kSmall, p);
  double peak = 0.0;
  for (const auto& c : f.components) {
    for (const auto& x : c) peak = std::max(peak, std::abs(x));
  }
  CHECK(peak == doctest::Approx(1.0));
  CHECK(packet_centroid(f) == doctest::Approx(50.0).epsilon(1e-9));

  // k-independent eigenvector: the intensity envelope is exactly Gaussian
  const auto ac = init_packet(small_packet(Branch::acoustic_plus()), kSmall, p);
  CHECK(packet_width(ac) == doctest::Approx(5.0).epsilon(1e-9));
  for (std::size_t j = 0; j < kSmall.n; ++j) {
    CHECK(std::abs(ac.components[0][j] - ac.components[1][j]) < 1e-14);
    CHECK(std::abs(ac.components[0][j] - ac.components[3][j]) < 1e-14);
  }
}

TEST_CASE("centroid is translation equivariant and wraps") {
  const auto p = QuantumParams::natural(0.5);
  auto s = small_packet();
  const double c0 = packet_centroid(init_packet(s, kSmall, p));
  s.center = 50.0 + 7.3;
  CHECK(packet_centroid(init_packet(s, kSmall, p)) - c0 == doctest::Approx(7.3).epsilon(1e-9));
  s.center = 99.0;  // straddles the boundary
  CHECK(packet_centroid(init_packet(s, kSmall, p)) == doctest::Approx(99.0).epsilon(1e-9));
  DiracField zero(kSmall, Spin::up);
  CHECK_THROWS_AS(packet_centroid(zero), std::invalid_argument);
}

TEST_CASE("large-sigma packet equals the catalog plane wave") {
  const auto p = QuantumParams::natural(0.5);
  const Grid g{256, kTwoPi * 20.0};  // k0 = 1 is a grid wavenumber
  PacketSpec s;
  s.k0 = 1.0;
  s.sigma = 1e4;
  s.center = 0.0;
  for (const auto& b : kAllBranches) {
    s.branch = b;
    const auto packet = init_packet(s, g, p);
    auto sol = waves::build_solution(b, Spin::up, 1.0, p);
    const auto wave = sample_plane_wave(sol, g, 0.0, p);
    // align overall scale and phase on the largest component at z = 0
    std::size_t ref = 0;
    for (std::size_t c = 1; c < 4; ++c) {
      if (std::abs(wave.components[c][0]) > std::abs(wave.components[ref][0])) ref = c;
    }
    const complex scale = packet.components[ref][0] / wave.components[ref][0];
    double err = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t j = 0; j < g.n; ++j) {
        err = std::max(err, std::abs(packet.components[c][j] - scale * wave.components[c][j]));
      }
    }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("plane waves pick up exactly exp(-i E t / hbar)") {
  for (const QuantumParams& p : {QuantumParams::natural(0.5), QuantumParams{2.0, 0.3, 3.0, 0.5}}) {
    const double ln = p.hbar / (p.m_e * p.c);
    const Grid g{64, kTwoPi * 10.0 * ln};
    for (Spin spin : {Spin::up, Spin::down}) {
      for (const auto& b : kAllBranches) {
        const auto sol = waves::build_solution(b, spin, p.m_e * p.c, p);
        const auto start = sample_plane_wave(sol, g, 0.0, p);
        const double t = 3.7 * p.hbar / p.rest_energy();
        const auto end = evolve(start, t / 10.0, 10, p);
        const complex phase = std::exp(complex{0.0, -sol.energy * t / p.hbar});
        double err = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
          for (std::size_t j = 0; j < g.n; ++j) err = std::max(err, std::abs(end.components[c][j] - phase * start.components[c][j]));
        }
        CHECK(err / sol.max_amplitude() < 1e-10);
        CHECK(end.t == doctest::Approx(t));
      }
    }
  }
}

TEST_CASE("plane wave off the grid is rejected") {
  const auto p = QuantumParams::natural(0.5);
  const auto sol = waves::build_solution(Branch::optical_plus(), Spin::up, 1.05, p);
  CHECK_THROWS_AS(sample_plane_wave(sol, Grid{64, kTwoPi * 10.0}, 0.0, p), std::invalid_argument);
}

TEST_CASE("exact evolution is time reversible and keeps the mode coefficients") {
  const auto p = QuantumParams::natural(0.5);
  const auto f0 = init_packet(small_packet(), kSmall, p);
  const auto f1 = evolve(f0, 0.5, 20, p);
  const auto back = evolve(f1, -0.5, 20, p);
  CHECK(max_diff(back, f0) < 1e-10);
  const double q0 = conserved_quadratic(f0, p);
  CHECK(std::abs(conserved_quadratic(f1, p) - q0) / q0 < 1e-12);
}

TEST_CASE("plain L2 norm: constant at eps = 1, oscillates otherwise") {
  auto spec = small_packet();
  spec.k0 = 0.3;
  {
    const auto p = QuantumParams::natural(1.0);
    const auto f0 = init_packet(spec, kSmall, p);
    const double n0 = l2_norm_squared(f0);
    for (double t : {0.7, 3.1, 11.0}) CHECK(std::abs(l2_norm_squared(evolve(f0, t, 1, p)) - n0) / n0 < 1e-10);
  }
  {
    // mixed-branch data makes the non-orthogonal eigenvectors interfere
    const auto p = QuantumParams::natural(0.3);
    auto f0 = init_packet(spec, kSmall, p);
    spec.branch = Branch::acoustic_plus();
    const auto other = init_packet(spec, kSmall, p);
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t j = 0; j < kSmall.n; ++j) f0.components[c][j] += other.components[c][j];
    }
    const double n0 = l2_norm_squared(f0);
    const double q0 = conserved_quadratic(f0, p);
    double worst_norm = 0.0;
    double worst_q = 0.0;
    for (double t : {0.7, 1.9, 3.1}) {
      const auto f = evolve(f0, t, 1, p);
      worst_norm = std::max(worst_norm, std::abs(l2_norm_squared(f) - n0) / n0);
      worst_q = std::max(worst_q, std::abs(conserved_quadratic(f, p) - q0) / q0);
    }
    CHECK(worst_norm > 1e-6);
    CHECK(worst_q < 1e-12);
  }
}

TEST_CASE("rk4 converges at fourth order to the exact propagator") {
  const auto p = QuantumParams::natural(0.5);
  const auto f0 = init_packet(small_packet(), kSmall, p);
  const double t = 1.0;
  const auto ref = evolve(f0, t, 1, p);
  const long n1 = static_cast<long>(std::ceil(t / (kSmall.dz() / 8.0)));
  const double e1 = max_diff(evolve(f0, t / n1, n1, p, Method::rk4), ref);
  const double e2 = max_diff(evolve(f0, t / (2 * n1), 2 * n1, p, Method::rk4), ref);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(3.0 / 16.0));
  // rk4 keeps the diagnostic to O(dt^4)
  const double q0 = conserved_quadratic(f0, p);
  CHECK(std::abs(conserved_quadratic(evolve(f0, t / n1, n1, p, Method::rk4), p) - q0) / q0 < 1e-6);
}

TEST_CASE("rk4 enforces the step bound") {
  const auto p = QuantumParams::natural(0.5);
  const auto f0 = init_packet(small_packet(), kSmall, p);
  CHECK_THROWS_AS(evolve(f0, kSmall.dz() / 3.0, 1, p, Method::rk4), std::invalid_argument);
  CHECK_THROWS_AS(evolve(f0, 0.0, 1, p), std::invalid_argument);
  CHECK_THROWS_AS(evolve(f0, 0.1, -1, p), std::invalid_argument);
}

TEST_CASE("per-mode propagator agrees with a Taylor series, including at k = 0") {
  for (double eps : {0.0, 0.5, 1.0}) {
    const auto p = QuantumParams::natural(eps);
    for (double pz : {0.0, 1e-10, 0.4, 2.0}) {
      const auto h = algebra::sector_hamiltonian(pz, p);
      const auto u = sector_propagator(h, 1.3, 1.0);
      const auto ref = oracle::expm_taylor(oracle::from(ComplexMatrix(complex{0.0, -1.3} * h)));
      double err = 0.0;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) err = std::max(err, std::abs(u(i, j) - ref[i][j]));
      }
      CHECK(err < 1e-12);
    }
  }
}

TEST_CASE("second-order generator has the expected entries") {
  const auto p = QuantumParams::natural(0.5);
  const auto g = kgf_generator(2.0, p);
  CHECK(g(0, 2) == 1.0);
  CHECK(g(1, 3) == 1.0);
  CHECK(g(2, 0) == -(4.0 + 1.0));
  CHECK(g(2, 1) == 1.0);
  CHECK(g(3, 0) == 0.25);
  CHECK(g(3, 1) == -(4.0 + 0.25));
  // eigenvalues +-i Omega on both branches
  const auto ev = algebra::eigenvalues(g);
  for (int i = 0; i < 4; ++i) {
    const double w = std::abs(ev(i).imag());
    CHECK(std::abs(ev(i).real()) < 1e-12);
    CHECK((std::abs(w - 2.0) < 1e-12 || std::abs(w - std::sqrt(5.25)) < 1e-12));
  }
}

TEST_CASE("second-order system fed from a first-order solution oscillates at its branch frequency") {
  const auto p = QuantumParams::natural(0.5);
  const Grid g{16, kTwoPi * 2.0};
  for (const auto& b : kAllBranches) {
    const auto sol = waves::build_solution(b, Spin::up, 1.0, p);
    const auto start = kgf_from_dirac(sample_plane_wave(sol, g, 0.0, p), p);
    std::vector<double> t;
    std::vector<complex> psi;
    for (int i = 0; i < 256; ++i) {
      t.push_back(0.2 * i);
      psi.push_back(i == 0 ? start.psi[3] : evolve(start, 0.2, i, p).psi[3]);
    }
    const double bin = spectrum::frequency_resolution(t);
    CHECK(std::abs(spectrum::spectral_peak_frequency(t, psi) - sol.energy) < bin);
    // the data is an exact mode, so the field is just the phase factor
    const auto later = evolve(start, 2.0, 1, p);
    CHECK(std::abs(later.psi[5] - std::exp(complex{0.0, -2.0 * sol.energy}) * start.psi[5]) < 1e-12);
  }
}

TEST_CASE("second-order evolution: time reversal and rk4 order") {
  const auto p = QuantumParams::natural(0.5);
  const auto k0 = kgf_from_dirac(init_packet(small_packet(), kSmall, p), p);
  const auto fwd = evolve(k0, 3.0, 1, p);
  const auto back = evolve(fwd, -3.0, 1, p);
  double err = 0.0;
  for (std::size_t j = 0; j < kSmall.n; ++j) {
    err = std::max({err, std::abs(back.psi[j] - k0.psi[j]), std::abs(back.dphi_dt[j] - k0.dphi_dt[j])});
  }
  CHECK(err < 1e-10);

  const auto ref = evolve(k0, 1.0, 1, p);
  const long n1 = static_cast<long>(std::ceil(1.0 / (kSmall.dz() / 8.0)));
  auto diff = [&](const KgfField& a) {
    double m = 0.0;
    for (std::size_t j = 0; j < kSmall.n; ++j) m = std::max({m, std::abs(a.psi[j] - ref.psi[j]), std::abs(a.phi[j] - ref.phi[j])});
    return m;
  };
  const double e1 = diff(evolve(k0, 1.0 / n1, n1, p, Method::rk4));
  const double e2 = diff(evolve(k0, 1.0 / (2 * n1), 2 * n1, p, Method::rk4));
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(3.0 / 16.0));
}

TEST_CASE("group velocities across k0 and eps") {
  EvolutionConfig cfg;
  for (double eps : {0.0, 0.5, 1.0}) {
    const auto p = QuantumParams::natural(eps);
    for (double k0 : {0.5, 1.0, 2.0}) {
      for (const auto& b : {Branch::optical_plus(), Branch::optical_minus(), Branch::acoustic_plus()}) {
        PacketSpec s;
        s.k0 = k0;
        s.sigma = 10.0;
        s.branch = b;
        s.center = 100.0;
        const auto m = measure_group_velocity(s, cfg, p);
        const double expected = dispersion::group_velocity(b, k0, p);
        INFO("eps=" << eps << " k0=" << k0 << " branch=" << to_string(b));
        const double tol = b.kind == BranchKind::acoustic ? 1e-3 : 1e-2;
        CHECK(std::abs(m.velocity - expected) <= tol * std::abs(expected));
      }
    }
  }
}

TEST_CASE("packet at rest stays put; optical packets spread; acoustic packets do not") {
  const auto p = QuantumParams::natural(0.5);
  EvolutionConfig cfg;
  PacketSpec s;
  s.k0 = 0.0;
  s.center = 100.0;
  const auto rest = track_packet(s, cfg, p);
  CHECK(std::abs(fit_velocity(rest)) < 0.01);
  CHECK(rest.width.back() > rest.width.front());

  s.k0 = 1.0;
  const auto moving = track_packet(s, cfg, p);
  CHECK(moving.width.back() > moving.width.front());

  s.branch = Branch::acoustic_plus();
  const auto f0 = init_packet(s, cfg.grid, p);
  const auto lap = evolve(f0, cfg.grid.length, 1, p);
  CHECK(max_diff(lap, f0) < 1e-8);
  const auto half = evolve(f0, 37.0, 1, p);
  CHECK(packet_width(half) == doctest::Approx(packet_width(f0)).epsilon(1e-8));
}

TEST_CASE("group velocity measurement enforces the displacement window") {
  const auto p = QuantumParams::natural(0.5);
  EvolutionConfig cfg;
  PacketSpec s;
  s.center = 100.0;
  s.branch = Branch::acoustic_plus();
  cfg.t_end = 80.0;  // 80 > L/4
  CHECK_THROWS_AS(measure_group_velocity(s, cfg, p), std::invalid_argument);
  cfg.t_end = 1.0;  // below 10 dz
  CHECK_THROWS_AS(measure_group_velocity(s, cfg, p), std::invalid_argument);
  cfg.t_end = 30.0;
  cfg.n_samples = 10;
  CHECK_THROWS_AS(measure_group_velocity(s, cfg, p), std::invalid_argument);
}

TEST_CASE("rk4 tracking agrees with exact tracking") {
  const auto p = QuantumParams::natural(0.5);
  EvolutionConfig cfg;
  cfg.grid = Grid{256, 100.0};
  cfg.t_end = 15.0;
  cfg.n_samples = 21;
  auto s = small_packet();
  const auto exact = track_packet(s, cfg, p);
  cfg.method = Method::rk4;
  const auto coarse = track_packet(s, cfg, p);
  cfg.rk4_dt = cfg.grid.dz() / 16.0;
  const auto fine = track_packet(s, cfg, p);
  double e_coarse = 0.0;
  double e_fine = 0.0;
  for (std::size_t i = 0; i < exact.t.size(); ++i) {
    e_coarse = std::max(e_coarse, std::abs(exact.centroid[i] - coarse.centroid[i]));
    e_fine = std::max(e_fine, std::abs(exact.centroid[i] - fine.centroid[i]));
  }
  CHECK(e_coarse < 1e-3 * cfg.grid.dz());
  CHECK(e_coarse / e_fine == doctest::Approx(16.0).epsilon(3.0 / 16.0));
}

TEST_CASE("snapshot and time-series CSV layout") {
  const auto p = QuantumParams::natural(0.5);
  std::ostringstream up;
  write_snapshot_csv(up, DiracField(Grid{4, 1.0}, Spin::up));
  CHECK(up.str().substr(0, up.str().find('\n')) == "z,|Psi_1|^2,|Psi_3|^2,|Phi_1|^2,|Phi_3|^2");
  std::ostringstream down;
  write_snapshot_csv(down, DiracField(Grid{4, 1.0}, Spin::down));
  CHECK(down.str().substr(0, down.str().find('\n')) == "z,|Psi_2|^2,|Psi_4|^2,|Phi_2|^2,|Phi_4|^2");
  std::ostringstream kg;
  write_snapshot_csv(kg, KgfField(Grid{4, 1.0}));
  CHECK(kg.str() == "z,|Psi|^2,|Phi|^2\n0,0,0\n0.25,0,0\n0.5,0,0\n0.75,0,0\n");
  std::ostringstream ts;
  write_timeseries_csv(ts, CentroidTrack{{0.0, 1.0}, {2.0, 3.0}, {0.5, 0.5}});
  CHECK(ts.str() == "t,centroid,width\n0,2,0.5\n1,3,0.5\n");
}

TEST_CASE("thread cap from the environment") {
  setenv("DIRAC8_THREADS", "3", 1);
  CHECK(worker_threads() == 3);
  setenv("DIRAC8_THREADS", "zero", 1);
  CHECK(worker_threads() >= 1);
  setenv("DIRAC8_THREADS", "1", 1);
  // a single worker gives the same answer as many
  const auto p = QuantumParams::natural(0.5);
  const auto f0 = init_packet(small_packet(), kSmall, p);
  const auto one = evolve(f0, 2.0, 1, p);
  setenv("DIRAC8_THREADS", "4", 1);
  const auto four = evolve(f0, 2.0, 1, p);
  CHECK(max_diff(one, four) == 0.0);
  unsetenv("DIRAC8_THREADS");
}
