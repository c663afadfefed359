#include "dirac8/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dirac8/fft.hpp"

namespace dirac8::spectrum {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double hermite_root(double h, double x0, double x1, double d0, double d1) {
  // p(s) on s in [0, 1] with p(0)=x0, p(1)=x1, p'(0)=h d0, p'(1)=h d1.
  auto p = [&](double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * x1 +
           (s3 - s2) * h * d1;
  };
  double lo = 0.0;
  double hi = 1.0;
  double plo = x0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double pm = p(mid);
    if ((pm < 0.0) == (plo < 0.0)) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_uniform(std::span<const double> times, std::size_t n_signal) {
  if (times.size() != n_signal) throw std::invalid_argument("spectrum: length mismatch");
  if (times.size() < 8) throw std::invalid_argument("spectrum: need at least 8 samples");
}

double sample_step(std::span<const double> times) {
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(j) / static_cast<double>(n - 1));
  }
  return w;
}

// Golden-section maximisation of f on [a, b].
template <class F>
double golden_max(F f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 100 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double frequency_resolution(std::span<const double> times) {
  if (times.size() < 2) throw std::invalid_argument("frequency_resolution: need two samples");
  return 2.0 * kPi / (times.back() - times.front());
}

double zero_crossing_frequency(std::span<const double> times, std::span<const double> signal,
                               std::span<const double> derivative) {
  if (times.size() != signal.size()) throw std::invalid_argument("zero_crossing: length mismatch");
  if (!derivative.empty() && derivative.size() != signal.size()) {
    throw std::invalid_argument("zero_crossing: derivative length mismatch");
  }
  double amp = 0.0;
  for (double x : signal) amp = std::max(amp, std::abs(x));
  if (amp == 0.0) throw std::invalid_argument("zero_crossing: signal has no oscillation");

  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < signal.size(); ++i) {
    const double x0 = signal[i];
    const double x1 = signal[i + 1];
    const bool change = (x0 < 0.0 && x1 >= 0.0) || (x0 >= 0.0 && x1 < 0.0);
    if (!change) continue;
    const double t0 = times[i];
    const double h = times[i + 1] - t0;
    double s = 0.0;
    if (derivative.empty()) {
      s = x0 / (x0 - x1);
    } else {
      s = hermite_root(h, x0, x1, derivative[i], derivative[i + 1]);
    }
    crossings.push_back(t0 + s * h);
  }
  if (crossings.size() < 7) {
    throw std::invalid_argument("zero_crossing: trajectory too short (need three periods)");
  }
  const double span = crossings.back() - crossings.front();
  return kPi * static_cast<double>(crossings.size() - 1) / span;
}

double spectral_peak_frequency(std::span<const double> times, std::span<const double> signal) {
  require_uniform(times, signal.size());
  const std::size_t n = signal.size();
  double mean = 0.0;
  for (double x : signal) mean += x;
  mean /= static_cast<double>(n);
  const auto w = hann(n);
  std::vector<double> centred(n);
  for (std::size_t j = 0; j < n; ++j) centred[j] = (signal[j] - mean) * w[j];

  const std::size_t m = next_pow2(4 * n);
  std::vector<complex> buf(m, complex{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) buf[j] = centred[j];
  Fft fft(m);
  const auto spec = fft.forward(buf);
  std::size_t best = 1;
  for (std::size_t k = 1; k <= m / 2; ++k) {
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  }
  const double dt = sample_step(times);
  const double bin = 2.0 * kPi / (static_cast<double>(m) * dt);
  const double t0 = times.front();
  auto magnitude = [&](double omega) {
    complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      acc += centred[j] * std::polar(1.0, -omega * (times[j] - t0));
    }
    return std::abs(acc);
  };
  const double centre = bin * static_cast<double>(best);
  if (std::abs(spec[best]) == 0.0) throw std::invalid_argument("spectral_peak: signal has no oscillation");
  return golden_max(magnitude, std::max(0.0, centre - bin), centre + bin);
}

double spectral_peak_frequency(std::span<const double> times, std::span<const complex> signal,
                               bool refine) {
  require_uniform(times, signal.size());
  const std::size_t n = signal.size();
  const double dt = sample_step(times);
  const std::size_t m = refine ? next_pow2(4 * n) : n;
  std::vector<complex> buf(m, complex{0.0, 0.0});
  const auto w = hann(n);
  std::vector<complex> windowed(n);
  for (std::size_t j = 0; j < n; ++j) {
    windowed[j] = signal[j] * (refine ? w[j] : 1.0);
    buf[j] = windowed[j];
  }
  Fft fft(m);
  const auto spec = fft.forward(buf);
  std::size_t best = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  }
  if (std::abs(spec[best]) == 0.0) throw std::invalid_argument("spectral_peak: zero signal");
  const long signed_bin = best < (m + 1) / 2 ? static_cast<long>(best)
                                             : static_cast<long>(best) - static_cast<long>(m);
  const double bin = 2.0 * kPi / (static_cast<double>(m) * dt);
  // x_j = e^{-i Omega t_j} peaks at forward-FFT frequency -Omega.
  const double centre = -bin * static_cast<double>(signed_bin);
  if (!refine) return centre;
  const double t0 = times.front();
  auto magnitude = [&](double omega) {
    complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) acc += windowed[j] * std::polar(1.0, omega * (times[j] - t0));
    return std::abs(acc);
  };
  return golden_max(magnitude, centre - bin, centre + bin);
}

}  // namespace dirac8::spectrum
