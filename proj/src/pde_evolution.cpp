#include "dirac8/pde_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "dirac8/csv.hpp"
#include "dirac8/fft.hpp"
#include "dirac8/matrix_algebra.hpp"

namespace dirac8::evolution {

namespace {

constexpr complex kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGapTolerance = 1e-8;

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = std::min<unsigned>(worker_threads(), static_cast<unsigned>(n / 64 + 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// exp(A t) for a fixed 4x4 A, reusable across many t.
class ModePropagator {
 public:
  ModePropagator() = default;
  explicit ModePropagator(ComplexMatrix a) : a_(std::move(a)) {
    const auto dec = algebra::eigen_decompose(a_);
    double scale = 0.0;
    for (Eigen::Index i = 0; i < dec.values.size(); ++i) scale = std::max(scale, std::abs(dec.values(i)));
    use_exp_ = !(scale > 0.0) || !dec.diagonalizable || dec.min_gap < kGapTolerance * scale;
    if (!use_exp_) {
      values_ = dec.values;
      vectors_ = dec.vectors;
      inverse_ = Eigen::MatrixXcd(dec.vectors).inverse();
    }
  }

  [[nodiscard]] ComplexMatrix at(double t) const {
    if (use_exp_) return algebra::matrix_exp(a_ * t);
    ComplexMatrix d = ComplexMatrix::Zero(values_.size(), values_.size());
    for (Eigen::Index i = 0; i < values_.size(); ++i) d(i, i) = std::exp(values_(i) * t);
    return vectors_ * d * inverse_;
  }

  [[nodiscard]] bool uses_matrix_exp() const { return use_exp_; }

 private:
  ComplexMatrix a_;
  bool use_exp_ = true;
  ComplexVector values_;
  ComplexMatrix vectors_;
  ComplexMatrix inverse_;
};

using ModeArrays = std::array<std::vector<complex>, 4>;

ModeArrays to_modes(const std::array<std::vector<complex>, 4>& fields, Fft& fft) {
  ModeArrays out;
  for (std::size_t c = 0; c < 4; ++c) out[c] = fft.forward(fields[c]);
  return out;
}

std::array<std::vector<complex>, 4> from_modes(const ModeArrays& modes, Fft& fft) {
  std::array<std::vector<complex>, 4> out;
  for (std::size_t c = 0; c < 4; ++c) out[c] = fft.inverse(modes[c]);
  return out;
}

ModeArrays apply_per_mode(const ModeArrays& in, const std::vector<ModePropagator>& props, double t) {
  const std::size_t n = in[0].size();
  ModeArrays out;
  for (auto& v : out) v.assign(n, complex{0.0, 0.0});
  parallel_for(n, [&](std::size_t j) {
    const ComplexMatrix u = props[j].at(t);
    for (int r = 0; r < 4; ++r) {
      complex acc{0.0, 0.0};
      for (int c = 0; c < 4; ++c) acc += u(r, c) * in[static_cast<std::size_t>(c)][j];
      out[static_cast<std::size_t>(r)][j] = acc;
    }
  });
  return out;
}

std::vector<ModePropagator> dirac_propagators(const Grid& grid, const QuantumParams& params) {
  const auto k = grid.wavenumbers();
  std::vector<ModePropagator> props(k.size());
  parallel_for(k.size(), [&](std::size_t j) {
    props[j] = ModePropagator(ComplexMatrix(-kI / params.hbar *
                                            algebra::sector_hamiltonian(params.hbar * k[j], params)));
  });
  return props;
}

std::vector<ModePropagator> kgf_propagators(const Grid& grid, const QuantumParams& params) {
  const auto k = grid.wavenumbers();
  std::vector<ModePropagator> props(k.size());
  parallel_for(k.size(), [&](std::size_t j) { props[j] = ModePropagator(kgf_generator(k[j], params)); });
  return props;
}

// Spectral derivative d/dz of a periodic grid function.
std::vector<complex> derivative(const std::vector<complex>& f, const std::vector<double>& k, Fft& fft,
                                int order) {
  auto spec = fft.forward(f);
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] *= std::pow(kI * k[j], order);
  return fft.inverse(spec);
}

void check_rk4_step(double dt, const Grid& grid, const QuantumParams& params) {
  if (!(std::abs(dt) < grid.dz() / (4.0 * params.c))) {
    throw std::invalid_argument("evolve (rk4): |dt| must be below dz / (4c) = " +
                                csv::format_double(grid.dz() / (4.0 * params.c)));
  }
}

using Fields4 = std::array<std::vector<complex>, 4>;

Fields4 axpy(const Fields4& x, complex a, const Fields4& y) {
  Fields4 out = x;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t j = 0; j < out[c].size(); ++j) out[c][j] += a * y[c][j];
  }
  return out;
}

template <class Rhs>
Fields4 rk4_step(const Fields4& y, double dt, Rhs&& rhs) {
  const auto k1 = rhs(y);
  const auto k2 = rhs(axpy(y, 0.5 * dt, k1));
  const auto k3 = rhs(axpy(y, 0.5 * dt, k2));
  const auto k4 = rhs(axpy(y, dt, k3));
  Fields4 out = y;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t j = 0; j < out[c].size(); ++j) {
      out[c][j] += dt / 6.0 * (k1[c][j] + 2.0 * k2[c][j] + 2.0 * k3[c][j] + k4[c][j]);
    }
  }
  return out;
}

// d/dt of (Psi_a, Psi_b, Phi_a, Phi_b) written out in position space.
Fields4 dirac_rhs(const Fields4& y, const std::vector<double>& k, Fft& fft, const QuantumParams& p) {
  const double mu_e = p.mu_e();
  const double mu_f = p.mu_f();
  const auto dpa = derivative(y[0], k, fft, 1);
  const auto dpb = derivative(y[1], k, fft, 1);
  const auto dfa = derivative(y[2], k, fft, 1);
  const auto dfb = derivative(y[3], k, fft, 1);
  Fields4 out;
  const std::size_t n = y[0].size();
  for (auto& v : out) v.resize(n);
  const complex ih = kI * p.hbar;
  for (std::size_t j = 0; j < n; ++j) {
    // H psi with p = -i hbar d_z; then d_t psi = H psi / (i hbar).
    const complex h0 = -ih * p.c * dpb[j] + mu_e * (y[0][j] - y[2][j]);
    const complex h1 = -ih * p.c * dpa[j] - mu_e * (y[1][j] - y[3][j]);
    const complex h2 = -ih * p.c * dfb[j] + mu_f * (y[2][j] - y[0][j]);
    const complex h3 = -ih * p.c * dfa[j] - mu_f * (y[3][j] - y[1][j]);
    out[0][j] = h0 / ih;
    out[1][j] = h1 / ih;
    out[2][j] = h2 / ih;
    out[3][j] = h3 / ih;
  }
  return out;
}

// (Psi, Phi, Psi_t, Phi_t) -> d/dt
Fields4 kgf_rhs(const Fields4& y, const std::vector<double>& k, Fft& fft, const QuantumParams& p) {
  const double we2 = p.omega_O() * p.omega_O();
  const double wf2 = p.omega_A() * p.omega_A();
  const double c2 = p.c * p.c;
  const auto psi_zz = derivative(y[0], k, fft, 2);
  const auto phi_zz = derivative(y[1], k, fft, 2);
  Fields4 out;
  out[0] = y[2];
  out[1] = y[3];
  const std::size_t n = y[0].size();
  out[2].resize(n);
  out[3].resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[2][j] = c2 * psi_zz[j] - we2 * (y[0][j] - y[1][j]);
    out[3][j] = c2 * phi_zz[j] - wf2 * (y[1][j] - y[0][j]);
  }
  return out;
}

Fields4 kgf_pack(const KgfField& s) { return {s.psi, s.phi, s.dpsi_dt, s.dphi_dt}; }

KgfField kgf_unpack(const Grid& grid, double t, Fields4 f) {
  KgfField out(grid);
  out.t = t;
  out.psi = std::move(f[0]);
  out.phi = std::move(f[1]);
  out.dpsi_dt = std::move(f[2]);
  out.dphi_dt = std::move(f[3]);
  return out;
}

double wrap_minimum_image(double d, double length) {
  d = std::fmod(d, length);
  if (d >= 0.5 * length) d -= length;
  if (d < -0.5 * length) d += length;
  return d;
}

std::vector<double> intensity(const DiracField& s) {
  std::vector<double> w(s.grid.n, 0.0);
  for (const auto& comp : s.components) {
    for (std::size_t j = 0; j < comp.size(); ++j) w[j] += std::norm(comp[j]);
  }
  return w;
}

}  // namespace

void Grid::validate() const {
  if (n < 4 || (n & (n - 1)) != 0) throw std::invalid_argument("Grid: n must be a power of two >= 4");
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("Grid: length must be positive");
}

std::vector<double> Grid::wavenumbers() const { return fft_wavenumbers(n, length); }

DiracField::DiracField(Grid g, Spin s) : grid(g), spin(s) {
  grid.validate();
  for (auto& c : components) c.assign(grid.n, complex{0.0, 0.0});
}

void DiracField::validate() const {
  grid.validate();
  for (const auto& c : components) {
    if (c.size() != grid.n) throw std::invalid_argument("DiracField: component length != n_grid");
  }
}

KgfField::KgfField(Grid g)
    : grid(g), psi(g.n), phi(g.n), dpsi_dt(g.n), dphi_dt(g.n) {
  grid.validate();
}

void KgfField::validate() const {
  grid.validate();
  for (const auto* v : {&psi, &phi, &dpsi_dt, &dphi_dt}) {
    if (v->size() != grid.n) throw std::invalid_argument("KgfField: array length != n_grid");
  }
}

unsigned worker_threads() {
  if (const char* env = std::getenv("DIRAC8_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ComplexMatrix sector_propagator(const ComplexMatrix& h, double t, double hbar) {
  return ModePropagator(ComplexMatrix(-kI / hbar * h)).at(t);
}

ComplexMatrix kgf_generator(double k, const QuantumParams& params) {
  params.validate();
  const double we2 = params.omega_O() * params.omega_O();
  const double wf2 = params.omega_A() * params.omega_A();
  const double ck2 = params.c * params.c * k * k;
  ComplexMatrix g = ComplexMatrix::Zero(4, 4);
  g(0, 2) = 1.0;
  g(1, 3) = 1.0;
  g(2, 0) = -(ck2 + we2);
  g(2, 1) = we2;
  g(3, 0) = wf2;
  g(3, 1) = -(ck2 + wf2);
  return g;
}

DiracField init_packet(const PacketSpec& spec, const Grid& grid, const QuantumParams& params) {
  grid.validate();
  params.validate();
  if (!(spec.sigma >= 4.0 * grid.dz())) {
    throw std::invalid_argument("init_packet: sigma under-resolved (need sigma >= 4 dz = " +
                                csv::format_double(4.0 * grid.dz()) + ")");
  }
  const auto k = grid.wavenumbers();
  ModeArrays modes;
  for (auto& m : modes) m.assign(grid.n, complex{0.0, 0.0});
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double dk = k[j] - spec.k0;
    const double weight = std::exp(-dk * dk * spec.sigma * spec.sigma);
    if (weight == 0.0) continue;
    const complex shift = std::polar(weight, -k[j] * spec.center);
    const auto v = waves::branch_eigenvector(spec.branch, params.hbar * k[j], params);
    for (std::size_t c = 0; c < 4; ++c) modes[c][j] = shift * v[c];
  }
  Fft fft(grid.n);
  DiracField out(grid, spec.spin);
  out.components = from_modes(modes, fft);
  double peak = 0.0;
  for (const auto& comp : out.components) {
    for (const auto& x : comp) peak = std::max(peak, std::abs(x));
  }
  if (peak == 0.0) throw std::invalid_argument("init_packet: packet has no resolved modes");
  for (auto& comp : out.components) {
    for (auto& x : comp) x /= peak;
  }
  return out;
}

DiracField sample_plane_wave(const waves::PlaneWaveSolution& solution, const Grid& grid, double t,
                             const QuantumParams& params) {
  grid.validate();
  const double k = solution.p_z / params.hbar;
  const double m = k * grid.length / kTwoPi;
  if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, std::abs(m))) {
    throw std::invalid_argument("sample_plane_wave: p_z / hbar is not a grid wavenumber");
  }
  DiracField out(grid, solution.spin);
  out.t = t;
  const auto slots = solution.spin == Spin::up ? algebra::kSpinUpSlots : algebra::kSpinDownSlots;
  for (std::size_t j = 0; j < grid.n; ++j) {
    const auto f = solution.field(t, grid.z(j), params);
    for (std::size_t c = 0; c < 4; ++c) out.components[c][j] = f[static_cast<std::size_t>(slots[c])];
  }
  return out;
}

DiracField evolve(const DiracField& state, double dt, long n_steps, const QuantumParams& params,
                  Method method) {
  state.validate();
  params.validate();
  if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("evolve: dt must be nonzero");
  if (n_steps < 0) throw std::invalid_argument("evolve: n_steps must be non-negative");
  Fft fft(state.grid.n);
  DiracField out = state;
  const double total = dt * static_cast<double>(n_steps);
  if (method == Method::spectral_exact) {
    const auto props = dirac_propagators(state.grid, params);
    out.components = from_modes(apply_per_mode(to_modes(state.components, fft), props, total), fft);
  } else {
    check_rk4_step(dt, state.grid, params);
    const auto k = state.grid.wavenumbers();
    auto rhs = [&](const Fields4& y) { return dirac_rhs(y, k, fft, params); };
    for (long i = 0; i < n_steps; ++i) out.components = rk4_step(out.components, dt, rhs);
  }
  out.t = state.t + total;
  return out;
}

KgfField evolve(const KgfField& state, double dt, long n_steps, const QuantumParams& params,
                Method method) {
  state.validate();
  params.validate();
  if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("evolve: dt must be nonzero");
  if (n_steps < 0) throw std::invalid_argument("evolve: n_steps must be non-negative");
  Fft fft(state.grid.n);
  const double total = dt * static_cast<double>(n_steps);
  Fields4 y = kgf_pack(state);
  if (method == Method::spectral_exact) {
    const auto props = kgf_propagators(state.grid, params);
    y = from_modes(apply_per_mode(to_modes(y, fft), props, total), fft);
  } else {
    check_rk4_step(dt, state.grid, params);
    const auto k = state.grid.wavenumbers();
    auto rhs = [&](const Fields4& v) { return kgf_rhs(v, k, fft, params); };
    for (long i = 0; i < n_steps; ++i) y = rk4_step(y, dt, rhs);
  }
  return kgf_unpack(state.grid, state.t + total, std::move(y));
}

double l2_norm_squared(const DiracField& state) {
  double s = 0.0;
  for (double w : intensity(state)) s += w;
  return s * state.grid.dz();
}

double packet_centroid(const DiracField& state) {
  state.validate();
  const auto w = intensity(state);
  double sc = 0.0;
  double ss = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double theta = kTwoPi * state.grid.z(j) / state.grid.length;
    sc += w[j] * std::cos(theta);
    ss += w[j] * std::sin(theta);
    total += w[j];
  }
  if (!(total > 0.0)) throw std::invalid_argument("packet_centroid: zero field");
  double z = std::atan2(ss, sc) / kTwoPi * state.grid.length;
  if (z < 0.0) z += state.grid.length;
  if (z >= state.grid.length) z -= state.grid.length;
  return z;
}

double packet_width(const DiracField& state) {
  const double centre = packet_centroid(state);
  const auto w = intensity(state);
  double acc = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double d = wrap_minimum_image(state.grid.z(j) - centre, state.grid.length);
    acc += w[j] * d * d;
    total += w[j];
  }
  return std::sqrt(acc / total);
}

double conserved_quadratic(const DiracField& state, const QuantumParams& params) {
  state.validate();
  params.validate();
  Fft fft(state.grid.n);
  const auto modes = to_modes(state.components, fft);
  const auto k = state.grid.wavenumbers();
  std::vector<double> per_mode(state.grid.n, 0.0);
  parallel_for(state.grid.n, [&](std::size_t j) {
    const auto dec = algebra::eigen_decompose(algebra::sector_hamiltonian(params.hbar * k[j], params));
    ComplexVector v(4);
    for (int c = 0; c < 4; ++c) v(c) = modes[static_cast<std::size_t>(c)][j];
    const ComplexVector coeffs = Eigen::MatrixXcd(dec.vectors).partialPivLu().solve(Eigen::VectorXcd(v));
    per_mode[j] = coeffs.squaredNorm();
  });
  double total = 0.0;
  for (double x : per_mode) total += x;
  return total / static_cast<double>(state.grid.n);
}

CentroidTrack track_packet(const PacketSpec& spec, const EvolutionConfig& config,
                           const QuantumParams& params) {
  if (config.n_samples < 2) throw std::invalid_argument("track_packet: need at least 2 samples");
  if (!(config.t_end > 0.0)) throw std::invalid_argument("track_packet: t_end must be positive");
  const DiracField initial = init_packet(spec, config.grid, params);
  CentroidTrack track;
  const double interval = config.t_end / (config.n_samples - 1);

  auto record = [&](const DiracField& s) {
    const double c = packet_centroid(s);
    if (track.centroid.empty()) {
      track.centroid.push_back(c);
    } else {
      const double prev = track.centroid.back();
      track.centroid.push_back(prev + wrap_minimum_image(c - prev, s.grid.length));
    }
    track.t.push_back(s.t);
    track.width.push_back(packet_width(s));
  };

  if (config.method == Method::spectral_exact) {
    Fft fft(config.grid.n);
    const auto props = dirac_propagators(config.grid, params);
    const auto modes0 = to_modes(initial.components, fft);
    for (int i = 0; i < config.n_samples; ++i) {
      DiracField s = initial;
      s.t = interval * i;
      s.components = from_modes(apply_per_mode(modes0, props, s.t), fft);
      record(s);
    }
  } else {
    const double dt_max = config.rk4_dt > 0.0 ? config.rk4_dt : config.grid.dz() / (8.0 * params.c);
    const long sub = static_cast<long>(std::ceil(interval / dt_max));
    const double dt = interval / static_cast<double>(sub);
    DiracField s = initial;
    record(s);
    for (int i = 1; i < config.n_samples; ++i) {
      s = evolve(s, dt, sub, params, Method::rk4);
      record(s);
    }
  }
  return track;
}

double fit_velocity(const CentroidTrack& track) {
  const std::size_t n = track.t.size();
  if (n < 2) throw std::invalid_argument("fit_velocity: need at least 2 samples");
  double mt = 0.0;
  double mc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += track.t[i];
    mc += track.centroid[i];
  }
  mt /= static_cast<double>(n);
  mc /= static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (track.t[i] - mt) * (track.centroid[i] - mc);
    den += (track.t[i] - mt) * (track.t[i] - mt);
  }
  return num / den;
}

GroupVelocityMeasurement measure_group_velocity(const PacketSpec& spec, const EvolutionConfig& config,
                                                const QuantumParams& params) {
  if (config.n_samples < 20) throw std::invalid_argument("measure_group_velocity: need >= 20 samples");
  GroupVelocityMeasurement m;
  m.track = track_packet(spec, config, params);
  m.displacement = m.track.centroid.back() - m.track.centroid.front();
  const double d = std::abs(m.displacement);
  if (d < 10.0 * config.grid.dz() || d > 0.25 * config.grid.length) {
    throw std::invalid_argument("measure_group_velocity: centroid displacement " +
                                csv::format_double(d) + " outside [10 dz, L/4]");
  }
  m.velocity = fit_velocity(m.track);
  return m;
}

KgfField kgf_from_dirac(const DiracField& state, const QuantumParams& params) {
  state.validate();
  Fft fft(state.grid.n);
  const auto k = state.grid.wavenumbers();
  const auto rates = dirac_rhs(state.components, k, fft, params);
  KgfField out(state.grid);
  out.t = state.t;
  out.psi = state.components[0];
  out.phi = state.components[2];
  out.dpsi_dt = rates[0];
  out.dphi_dt = rates[2];
  return out;
}

void write_snapshot_csv(std::ostream& out, const DiracField& state) {
  const bool up = state.spin == Spin::up;
  out << (up ? "z,|Psi_1|^2,|Psi_3|^2,|Phi_1|^2,|Phi_3|^2\n" : "z,|Psi_2|^2,|Psi_4|^2,|Phi_2|^2,|Phi_4|^2\n");
  for (std::size_t j = 0; j < state.grid.n; ++j) {
    csv::write_row(out, {state.grid.z(j), std::norm(state.components[0][j]),
                         std::norm(state.components[1][j]), std::norm(state.components[2][j]),
                         std::norm(state.components[3][j])});
  }
}

void write_snapshot_csv(std::ostream& out, const KgfField& state) {
  out << "z,|Psi|^2,|Phi|^2\n";
  for (std::size_t j = 0; j < state.grid.n; ++j) {
    csv::write_row(out, {state.grid.z(j), std::norm(state.psi[j]), std::norm(state.phi[j])});
  }
}

void write_timeseries_csv(std::ostream& out, const CentroidTrack& track) {
  out << "t,centroid,width\n";
  for (std::size_t i = 0; i < track.t.size(); ++i) {
    csv::write_row(out, {track.t[i], track.centroid[i], track.width[i]});
  }
}

}  // namespace dirac8::evolution
