#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vibctl/pipeline.hpp"

namespace vibctl {

/// One-sided magnitude spectrum of a uniformly sampled series.
struct SpectralDensity {
  std::vector<double> omega;      // angular frequency, a.u.
  std::vector<double> magnitude;  // |X_k| of the windowed, zero-padded series
  std::size_t fft_size = 0;
  std::size_t samples = 0;
  double spacing_fs = 0.0;
  std::string window = "hann";

  double bin_width() const;  // a.u.
  std::size_t bin_of(double omega_au) const;
  /// 2 pi / omega in fs (infinite for the zero bin).
  double beat_period_fs(std::size_t bin) const;
};

struct SpectrumOptions {
  std::size_t min_samples = 256;
  /// fft_size = padding * next power of two >= samples.
  std::size_t padding = 4;
  /// Allowed relative deviation of any spacing from the mean spacing.
  double uniformity_tolerance = 1e-6;
};

/// Mean removal, Hann window, zero padding, FFT. Throws InputError on short
/// or non-uniform input.
SpectralDensity beat_spectrum(std::span<const double> t_fs, std::span<const double> values,
                              const SpectrumOptions& options = {});
SpectralDensity beat_spectrum(const YieldSeries& series, const SpectrumOptions& options = {});

/// Largest magnitude within +-bins of the bin nearest omega.
double magnitude_near(const SpectralDensity& density, double omega_au, std::size_t bins = 1);

struct SpectralPeak {
  std::size_t bin = 0;
  double omega = 0.0;
  double period_fs = 0.0;
  double magnitude = 0.0;
};

/// Local maxima above relative_threshold times the global maximum, strongest first.
std::vector<SpectralPeak> find_peaks(const SpectralDensity& density,
                                     double relative_threshold = 0.05);

}  // namespace vibctl
