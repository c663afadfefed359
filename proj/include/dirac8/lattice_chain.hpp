#pragma once

// The modified mass-in-mass chain on a periodic ring: masses m (displacements
// u_n) each coupled to a mass M (displacements U_n) by a spring K, with
// nearest-neighbour springs I between the m's and J between the M's:
//   m u_n'' = K (U_n - u_n) + I (u_{n-1} + u_{n+1} - 2 u_n)
//   M U_n'' = K (u_n - U_n) + J (U_{n-1} + U_{n+1} - 2 U_n)

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "dirac8/types.hpp"

namespace dirac8::chain {

struct ChainParams {
  double m = 1.0;
  double M = 4.0;
  double K = 1.0;
  double I = 1.0;
  double J = 1.0;
  double a = 1.0;

  /// Throws std::invalid_argument unless m, M, K, a > 0 and I, J >= 0.
  void validate() const;
};

struct CharacteristicScales {
  double omega_O = 0.0;  // sqrt(K/m)
  double omega_A = 0.0;  // sqrt(K/M)
  double omega_m = 0.0;  // sqrt(I/m)
  double omega_M = 0.0;  // sqrt(J/M)
  double s_m = 0.0;      // a omega_m
  double s_M = 0.0;      // a omega_M
  double epsilon = 0.0;  // sqrt(m/M)
};

CharacteristicScales characteristic_scales(const ChainParams& params);

struct DiscreteModes {
  double omega_acoustic = 0.0;
  double omega_optical = 0.0;
  Eigen::Vector2d eigvec_acoustic;  // (u, U) amplitude ratio, unit norm, u >= 0
  Eigen::Vector2d eigvec_optical;
};

/// Exact dispersion of the ring from the plane-wave substitution
/// (u_n, U_n) = (b, d) e^{i(k a n - omega t)}:
///   omega^2 (b, d) = [[wO^2 + 4 wm^2 sin^2(ka/2), -wO^2],
///                     [-wA^2, wA^2 + 4 wM^2 sin^2(ka/2)]] (b, d).
DiscreteModes discrete_dispersion(double k, const ChainParams& params);

/// Highest frequency on the ring, i.e. the optical branch at ka = pi.
double max_frequency(const ChainParams& params);

struct LatticeState {
  std::vector<double> u;
  std::vector<double> U;
  std::vector<double> du_dt;
  std::vector<double> dU_dt;
  double t = 0.0;

  LatticeState() = default;
  explicit LatticeState(std::size_t n_sites);
  [[nodiscard]] std::size_t n_sites() const { return u.size(); }
  /// Throws std::invalid_argument if the four arrays differ in length.
  void validate() const;
};

/// Wavenumber of ring mode `mode_index`: 2 pi mode_index / (n_sites a).
double mode_wavenumber(std::size_t n_sites, int mode_index, const ChainParams& params);

/// Travelling normal mode Re[A (b, d) e^{i(k a n - omega t)}] at t = 0 with
/// (b, d) the branch eigenvector at the ring wavenumber of `mode_index`.
/// Throws std::invalid_argument for n_sites < 2 or a mode index outside [0, n_sites).
LatticeState init_mode(std::size_t n_sites, int mode_index, double amplitude, BranchKind branch,
                       const ChainParams& params);

/// Raised when dt * omega_max >= 2, outside the velocity-Verlet stability region.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One velocity-Verlet step with periodic indexing. Throws StabilityError.
LatticeState step(const LatticeState& state, double dt, const ChainParams& params);

/// n_steps steps in place; `observer(state)` is called after every
/// `sample_every`-th step (and once before the first step) when provided.
template <class Observer>
void integrate(LatticeState& state, double dt, long n_steps, const ChainParams& params,
               long sample_every, Observer&& observer);

void integrate(LatticeState& state, double dt, long n_steps, const ChainParams& params);

/// Kinetic plus spring potential energy, periodic indexing.
double total_energy(const LatticeState& state, const ChainParams& params);

/// Dominant angular frequency of u_site(t) along the trajectory. Uses zero
/// crossings (Hermite-refined with du_dt) and falls back to the spectral peak
/// when the two disagree by more than two frequency bins. Throws
/// std::invalid_argument when the site does not oscillate or the record is
/// shorter than three periods.
double measure_mode_frequency(std::span<const LatticeState> trajectory, std::size_t site);

struct ConvergencePoint {
  double ka = 0.0;
  double omega2_discrete = 0.0;
  double omega2_continuum = 0.0;
  double relative_error = 0.0;  // |omega_d^2 - omega_c^2| / omega_c^2
};

struct ConvergenceStudy {
  std::vector<ConvergencePoint> acoustic;
  std::vector<ConvergencePoint> optical;
  double acoustic_exponent = 0.0;  // least-squares slope of log(error) vs log(ka)
  double optical_exponent = 0.0;
};

/// Discrete ring dispersion against the continuum limit at the given ka values.
ConvergenceStudy convergence_study(const ChainParams& params, std::span<const double> ka_values);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// CSV with header t,site,u,U,du_dt,dU_dt; one row per site per state.
void write_trajectory_csv(std::ostream& out, std::span<const LatticeState> trajectory);

// ---------------------------------------------------------------------------

namespace detail {
void verlet_step_in_place(LatticeState& s, double dt, const ChainParams& params,
                          std::vector<double>& acc_u, std::vector<double>& acc_U);
void accelerations(const LatticeState& s, const ChainParams& params, std::vector<double>& acc_u,
                   std::vector<double>& acc_U);
void check_stability(double dt, const ChainParams& params);
}  // namespace detail

template <class Observer>
void integrate(LatticeState& state, double dt, long n_steps, const ChainParams& params,
               long sample_every, Observer&& observer) {
  params.validate();
  state.validate();
  detail::check_stability(dt, params);
  std::vector<double> acc_u;
  std::vector<double> acc_U;
  detail::accelerations(state, params, acc_u, acc_U);
  observer(static_cast<const LatticeState&>(state));
  for (long i = 1; i <= n_steps; ++i) {
    detail::verlet_step_in_place(state, dt, params, acc_u, acc_U);
    if (sample_every > 0 && i % sample_every == 0) observer(static_cast<const LatticeState&>(state));
  }
}

}  // namespace dirac8::chain
