#include "dirac8/fft.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace dirac8 {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft::Impl {
  std::size_t n = 0;
  fftw_complex* buffer = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(std::size_t size) : n(size) {
    if (n == 0) throw std::invalid_argument("Fft: length must be positive");
    std::lock_guard lock(planner_mutex());
    buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (buffer == nullptr) throw std::bad_alloc();
    const int len = static_cast<int>(n);
    fwd = fftw_plan_dft_1d(len, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(len, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buffer);
  }

  void run(fftw_plan plan, std::span<const complex> in, std::span<complex> out, double scale) {
    if (in.size() != n || out.size() != n) throw std::invalid_argument("Fft: length mismatch");
    auto* data = reinterpret_cast<complex*>(buffer);
    std::copy(in.begin(), in.end(), data);
    fftw_execute(plan);
    for (std::size_t i = 0; i < n; ++i) out[i] = data[i] * scale;
  }
};

Fft::Fft(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

std::size_t Fft::size() const { return impl_->n; }

void Fft::forward(std::span<const complex> in, std::span<complex> out) {
  impl_->run(impl_->fwd, in, out, 1.0);
}

void Fft::inverse(std::span<const complex> in, std::span<complex> out) {
  impl_->run(impl_->bwd, in, out, 1.0 / static_cast<double>(impl_->n));
}

std::vector<complex> Fft::forward(std::span<const complex> in) {
  std::vector<complex> out(impl_->n);
  forward(in, out);
  return out;
}

std::vector<complex> Fft::inverse(std::span<const complex> in) {
  std::vector<complex> out(impl_->n);
  inverse(in, out);
  return out;
}

std::vector<double> fft_wavenumbers(std::size_t n, double length) {
  if (n == 0 || !(length > 0.0)) throw std::invalid_argument("fft_wavenumbers: bad grid");
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / length;
  for (std::size_t j = 0; j < n; ++j) {
    const long idx = static_cast<long>(j) < (static_cast<long>(n) + 1) / 2
                         ? static_cast<long>(j)
                         : static_cast<long>(j) - static_cast<long>(n);
    k[j] = dk * static_cast<double>(idx);
  }
  return k;
}

}  // namespace dirac8
