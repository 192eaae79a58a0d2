#include "vibctl/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "vibctl/error.hpp"
#include "vibctl/fft.hpp"
#include "vibctl/units.hpp"

namespace vibctl {

double SpectralDensity::bin_width() const {
  return 2.0 * units::kPi / (static_cast<double>(fft_size) * units::fs_to_au(spacing_fs));
}

std::size_t SpectralDensity::bin_of(double omega_au) const {
  const double k = std::round(omega_au / bin_width());
  if (k <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(k), omega.size() - 1);
}

double SpectralDensity::beat_period_fs(std::size_t bin) const {
  if (bin == 0) return std::numeric_limits<double>::infinity();
  return units::period_fs(omega.at(bin));
}

SpectralDensity beat_spectrum(std::span<const double> t_fs, std::span<const double> values,
                              const SpectrumOptions& options) {
  const std::size_t n = values.size();
  if (t_fs.size() != n) throw InputError("time and value columns differ in length");
  if (n < options.min_samples) {
    throw InputError("spectrum needs at least " + std::to_string(options.min_samples) +
                     " samples, got " + std::to_string(n));
  }
  const double spacing = (t_fs.back() - t_fs.front()) / static_cast<double>(n - 1);
  if (!(spacing > 0.0)) throw InputError("sample times must increase");
  for (std::size_t i = 1; i < n; ++i) {
    const double d = t_fs[i] - t_fs[i - 1];
    if (std::abs(d - spacing) > options.uniformity_tolerance * spacing) {
      throw InputError("non-uniform sampling at row " + std::to_string(i) + " (spacing " +
                       std::to_string(d) + " fs, mean " + std::to_string(spacing) + " fs)");
    }
  }

  const std::size_t size = std::max<std::size_t>(options.padding, 1) * std::bit_ceil(n);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  ComplexVector buffer(size, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * units::kPi * static_cast<double>(i) /
                                           static_cast<double>(n - 1)));
    buffer[i] = (values[i] - mean) * w;
  }
  Fft(size).forward(buffer);

  SpectralDensity out;
  out.fft_size = size;
  out.samples = n;
  out.spacing_fs = spacing;
  const double dw = out.bin_width();
  out.omega.resize(size / 2 + 1);
  out.magnitude.resize(size / 2 + 1);
  for (std::size_t k = 0; k <= size / 2; ++k) {
    out.omega[k] = dw * static_cast<double>(k);
    out.magnitude[k] = std::abs(buffer[k]);
  }
  return out;
}

SpectralDensity beat_spectrum(const YieldSeries& series, const SpectrumOptions& options) {
  return beat_spectrum(series.tau_prime_fs, series.yields, options);
}

double magnitude_near(const SpectralDensity& density, double omega_au, std::size_t bins) {
  const std::size_t centre = density.bin_of(omega_au);
  const std::size_t lo = centre > bins ? centre - bins : 0;
  const std::size_t hi = std::min(centre + bins, density.magnitude.size() - 1);
  return *std::max_element(density.magnitude.begin() + static_cast<std::ptrdiff_t>(lo),
                           density.magnitude.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
}

std::vector<SpectralPeak> find_peaks(const SpectralDensity& density, double relative_threshold) {
  const auto& m = density.magnitude;
  std::vector<SpectralPeak> peaks;
  if (m.size() < 3) return peaks;
  const double top = *std::max_element(m.begin() + 1, m.end());
  for (std::size_t k = 1; k + 1 < m.size(); ++k) {
    if (m[k] > m[k - 1] && m[k] >= m[k + 1] && m[k] >= relative_threshold * top) {
      peaks.push_back({k, density.omega[k], density.beat_period_fs(k), m[k]});
    }
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const SpectralPeak& a, const SpectralPeak& b) { return a.magnitude > b.magnitude; });
  return peaks;
}

}  // namespace vibctl
