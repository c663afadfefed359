#pragma once

// Frequency estimation for sampled time series.

#include <span>

#include "dirac8/types.hpp"

namespace dirac8::spectrum {

/// Angular frequency from the mean spacing of zero crossings. Crossings are
/// located by linear interpolation, or by cubic Hermite interpolation when
/// `derivative` (same length as `signal`) is non-empty. Throws
/// std::invalid_argument when fewer than seven crossings (three periods) exist.
double zero_crossing_frequency(std::span<const double> times, std::span<const double> signal,
                               std::span<const double> derivative = {});

/// Dominant angular frequency of a uniformly sampled real signal: Hann-windowed
/// FFT peak refined by a golden-section search on the windowed DTFT magnitude.
double spectral_peak_frequency(std::span<const double> times, std::span<const double> signal);

/// Signed angular frequency Omega of the dominant component A e^{-i Omega t} of a
/// uniformly sampled complex signal. `refine` = false returns the bin centre.
double spectral_peak_frequency(std::span<const double> times, std::span<const complex> signal,
                               bool refine = true);

/// Bin spacing 2 pi / T of a record of the given sample times.
double frequency_resolution(std::span<const double> times);

}  // namespace dirac8::spectrum
