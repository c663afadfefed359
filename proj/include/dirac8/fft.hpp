#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dirac8/types.hpp"

namespace dirac8 {

/// One-dimensional complex FFT of fixed length (FFTW backed).
///   forward: X_k = sum_j x_j e^{-2 pi i jk/n}
///   inverse: x_j = (1/n) sum_k X_k e^{+2 pi i jk/n}
/// Instances are not shareable between threads; construction is thread-safe.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;

  [[nodiscard]] std::size_t size() const;

  void forward(std::span<const complex> in, std::span<complex> out);
  void inverse(std::span<const complex> in, std::span<complex> out);

  std::vector<complex> forward(std::span<const complex> in);
  std::vector<complex> inverse(std::span<const complex> in);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Angular wavenumbers matching the FFT bin order on a periodic domain of length L:
/// 2 pi / L * (0, 1, ..., n/2 - 1, -n/2, ..., -1).
std::vector<double> fft_wavenumbers(std::size_t n, double length);

}  // namespace dirac8
