#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <span>
#include <vector>

#include "vibctl/grid.hpp"

namespace vibctl {

using Complex = std::complex<double>;

/// Allocator returning 64-byte aligned storage so FFT plans can assume SIMD
/// alignment for every field in the program.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using ComplexVector = std::vector<Complex, AlignedAllocator<Complex>>;

/// Complex amplitudes of one electronic channel sampled on a RadialGrid.
/// Normalisation is with respect to dr: sum |psi_i|^2 dr.
class ChannelField {
 public:
  explicit ChannelField(std::shared_ptr<const RadialGrid> grid);
  ChannelField(std::shared_ptr<const RadialGrid> grid, ComplexVector amplitudes);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const RadialGrid>& grid_ptr() const noexcept { return grid_; }

  std::size_t size() const noexcept { return amplitudes_.size(); }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  Complex* data() noexcept { return amplitudes_.data(); }
  const Complex* data() const noexcept { return amplitudes_.data(); }

  Complex& operator[](std::size_t i) noexcept { return amplitudes_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return amplitudes_[i]; }

  ChannelField& operator*=(Complex factor) noexcept;

 private:
  std::shared_ptr<const RadialGrid> grid_;
  ComplexVector amplitudes_;
};

/// Wavefunction partitioned into the bound (g) and dissociative (u) channels.
struct TwoChannelState {
  ChannelField g;
  ChannelField u;

  TwoChannelState(ChannelField g_channel, ChannelField u_channel);
  /// Zero state on the given grid.
  explicit TwoChannelState(std::shared_ptr<const RadialGrid> grid);

  const RadialGrid& grid() const noexcept { return g.grid(); }
};

double norm_squared(const ChannelField& field);
double norm_squared(const TwoChannelState& state);

/// <a|b> = sum conj(a) b dr. Throws std::invalid_argument on grid mismatch.
Complex inner_product(const ChannelField& a, const ChannelField& b);

/// <R> = <f|R|f> / <f|f>. Throws std::invalid_argument for a zero field.
double expectation_position(const ChannelField& field);

/// Real samples promoted to a field.
ChannelField make_field(std::shared_ptr<const RadialGrid> grid, std::span<const double> values);

/// Normalised Gaussian exp(-(R - center)^2 / (2 width^2)) times exp(i k0 R).
ChannelField gaussian_packet(std::shared_ptr<const RadialGrid> grid, double center, double width,
                             double k0 = 0.0);

}  // namespace vibctl
