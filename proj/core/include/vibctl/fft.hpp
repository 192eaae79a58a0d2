#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "vibctl/field.hpp"

namespace vibctl {

/// In-place complex FFT of a fixed power-of-two length.
///
/// Plans are created once per length (FFTW_ESTIMATE, so the algorithm choice
/// and therefore the rounding is identical in every process) and shared;
/// execution is thread-safe. Buffers must come from AlignedAllocator.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// X_k = sum_j x_j exp(-2 pi i j k / n)
  void forward(std::span<Complex> data) const;
  /// x_j = sum_k X_k exp(+2 pi i j k / n), no 1/n factor.
  void backward(std::span<Complex> data) const;

 private:
  struct Plans;
  static std::shared_ptr<const Plans> acquire(std::size_t n);

  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

/// Momentum-space representation of a ChannelField (FFT ordering of k).
///
/// phi(k) = dr / sqrt(2 pi) * sum_j f_j exp(-i k (r_j - r_min)), normalised so
/// that sum |phi|^2 dk = sum |f|^2 dr.
struct MomentumField {
  std::shared_ptr<const RadialGrid> grid;
  ComplexVector amplitudes;
};

double norm_squared(const MomentumField& field);

MomentumField to_momentum(const ChannelField& field);
ChannelField from_momentum(const MomentumField& field);

}  // namespace vibctl
