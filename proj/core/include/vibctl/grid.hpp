#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace vibctl {

/// Uniform internuclear-distance grid with its conjugate momentum grid.
///
/// Points sit at r_i = r_min + i * dr, i = 0..n-1, dr = (r_max - r_min) / n.
/// Momenta follow the FFT ordering: k_i = i * dk for i < n/2 and
/// (i - n) * dk otherwise, dk = 2 pi / (n dr). Every k-space operator in
/// the library is built with this ordering.
class RadialGrid {
 public:
  RadialGrid(double r_min, double r_max, std::size_t n_points);

  static constexpr double kDefaultRMin = 0.1;
  static constexpr double kDefaultRMax = 40.0;
  static constexpr std::size_t kDefaultPoints = 2048;

  static std::shared_ptr<const RadialGrid> make(double r_min = kDefaultRMin,
                                                double r_max = kDefaultRMax,
                                                std::size_t n_points = kDefaultPoints);

  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  std::size_t size() const noexcept { return n_; }
  double dr() const noexcept { return dr_; }
  double dk() const noexcept { return dk_; }

  double r(std::size_t i) const noexcept { return r_min_ + static_cast<double>(i) * dr_; }
  double k(std::size_t i) const noexcept;

  const std::vector<double>& positions() const noexcept { return r_values_; }
  const std::vector<double>& momenta() const noexcept { return k_values_; }

  bool operator==(const RadialGrid& other) const noexcept {
    return n_ == other.n_ && r_min_ == other.r_min_ && r_max_ == other.r_max_;
  }

 private:
  double r_min_;
  double r_max_;
  std::size_t n_;
  double dr_;
  double dk_;
  std::vector<double> r_values_;
  std::vector<double> k_values_;
};

}  // namespace vibctl
