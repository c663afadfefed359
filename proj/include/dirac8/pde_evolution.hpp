#pragma once

// Time evolution of the one-dimensional eight-component system (one spin
// sector at a time) and of the coupled second-order system
//   Psi_tt = c^2 Psi_zz - (m_e c^2/hbar)^2 (Psi - Phi)
//   Phi_tt = c^2 Phi_zz - (m_f c^2/hbar)^2 (Phi - Psi)
// on a uniform periodic grid with FFT-based spatial derivatives.

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "dirac8/plane_waves.hpp"
#include "dirac8/types.hpp"

namespace dirac8::evolution {

struct Grid {
  std::size_t n = 1024;
  double length = 200.0;

  /// Throws std::invalid_argument unless n >= 4 is a power of two and length > 0.
  void validate() const;
  [[nodiscard]] double dz() const { return length / static_cast<double>(n); }
  [[nodiscard]] double z(std::size_t j) const { return dz() * static_cast<double>(j); }
  [[nodiscard]] std::vector<double> wavenumbers() const;
};

/// One spin sector of the eight-component field: (Psi_a, Psi_b, Phi_a, Phi_b),
/// i.e. (Psi_1, Psi_3, Phi_1, Phi_3) for spin up and (Psi_2, Psi_4, Phi_2, Phi_4)
/// for spin down.
struct DiracField {
  Grid grid;
  double t = 0.0;
  Spin spin = Spin::up;
  std::array<std::vector<complex>, 4> components;

  DiracField() = default;
  DiracField(Grid g, Spin s);
  void validate() const;
};

/// Field and time derivative of the coupled second-order system.
struct KgfField {
  Grid grid;
  double t = 0.0;
  std::vector<complex> psi;
  std::vector<complex> phi;
  std::vector<complex> dpsi_dt;
  std::vector<complex> dphi_dt;

  KgfField() = default;
  explicit KgfField(Grid g);
  void validate() const;
};

struct PacketSpec {
  double k0 = 1.0;
  double sigma = 10.0;  // rms width of the intensity envelope
  Branch branch = Branch::optical_plus();
  Spin spin = Spin::up;
  double center = 0.0;
};

/// Single-branch Gaussian packet: sum over grid wavenumbers k of
/// exp(-(k - k0)^2 sigma^2) e^{i k (z - center)} v(k), with v(k) the unit
/// branch eigenvector, so the intensity envelope has rms width sigma.
/// Scaled to unit peak amplitude. Throws std::invalid_argument if
/// sigma < 4 dz or the grid is invalid.
DiracField init_packet(const PacketSpec& spec, const Grid& grid, const QuantumParams& params);

/// Samples a plane-wave solution on the grid at time solution-time t.
/// The wavenumber p_z/hbar must be a grid wavenumber for periodicity.
DiracField sample_plane_wave(const waves::PlaneWaveSolution& solution, const Grid& grid,
                             double t, const QuantumParams& params);

enum class Method { spectral_exact, rk4 };

/// Advances by n_steps * dt. spectral_exact applies exp(-i H(k) T / hbar) per
/// Fourier mode (any sign of dt); rk4 uses classical fourth-order steps of the
/// method-of-lines system with FFT derivatives and requires |dt| < dz / (4c).
/// Throws std::invalid_argument on dt == 0 or a violated step bound.
DiracField evolve(const DiracField& state, double dt, long n_steps, const QuantumParams& params,
                  Method method = Method::spectral_exact);
KgfField evolve(const KgfField& state, double dt, long n_steps, const QuantumParams& params,
                Method method = Method::spectral_exact);

/// exp(-i H t / hbar) for a 4x4 sector matrix H: eigen decomposition when
/// the smallest eigenvalue gap is >= 1e-8 (relative), Pade matrix exponential otherwise.
ComplexMatrix sector_propagator(const ComplexMatrix& h, double t, double hbar);

/// Generator G(k) of the first-order form d/dt (Psi, Phi, Psi_t, Phi_t) = G (...).
ComplexMatrix kgf_generator(double k, const QuantumParams& params);

/// Intensity-weighted circular mean position in [0, L). Throws
/// std::invalid_argument for a zero field.
double packet_centroid(const DiracField& state);
/// Intensity-weighted rms distance from the centroid (minimum-image).
double packet_width(const DiracField& state);
double l2_norm_squared(const DiracField& state);

/// sum_k sum_i |c_i(k)|^2, the squared coefficients of each Fourier mode in a
/// unit-vector eigenbasis of H(k). Constant under exact evolution.
double conserved_quadratic(const DiracField& state, const QuantumParams& params);

struct EvolutionConfig {
  Grid grid;
  double t_end = 30.0;
  int n_samples = 41;
  Method method = Method::spectral_exact;
  double rk4_dt = 0.0;  // 0 selects dz / (8c)
};

struct CentroidTrack {
  std::vector<double> t;
  std::vector<double> centroid;  // unwrapped
  std::vector<double> width;
};

/// Evolves the packet and records unwrapped centroid and width at n_samples
/// evenly spaced times in [0, t_end].
CentroidTrack track_packet(const PacketSpec& spec, const EvolutionConfig& config,
                           const QuantumParams& params);

/// Least-squares slope of centroid(t).
double fit_velocity(const CentroidTrack& track);

struct GroupVelocityMeasurement {
  double velocity = 0.0;
  double displacement = 0.0;
  CentroidTrack track;
};

/// Centroid-fit group velocity. Throws std::invalid_argument unless the total
/// centroid displacement lies in [10 dz, L/4] and n_samples >= 20.
GroupVelocityMeasurement measure_group_velocity(const PacketSpec& spec,
                                                const EvolutionConfig& config,
                                                const QuantumParams& params);

/// Initial data (Psi, Phi, Psi_t, Phi_t) for the second-order system taken from
/// the (Psi_a, Phi_a) pair of a sector field, with time derivatives from the
/// first-order dynamics.
KgfField kgf_from_dirac(const DiracField& state, const QuantumParams& params);

/// Snapshot CSV: z,|Psi_a|^2,|Psi_b|^2,|Phi_a|^2,|Phi_b|^2 (column names follow the spin sector).
void write_snapshot_csv(std::ostream& out, const DiracField& state);
/// Snapshot CSV: z,|Psi|^2,|Phi|^2.
void write_snapshot_csv(std::ostream& out, const KgfField& state);
/// Time series CSV: t,centroid,width.
void write_timeseries_csv(std::ostream& out, const CentroidTrack& track);

/// Upper bound on worker threads for per-mode loops: DIRAC8_THREADS if set to a
/// positive integer, else hardware concurrency.
unsigned worker_threads();

}  // namespace dirac8::evolution
