#include "vibctl/grid.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vibctl/units.hpp"

namespace vibctl {

RadialGrid::RadialGrid(double r_min, double r_max, std::size_t n_points)
    : r_min_(r_min), r_max_(r_max), n_(n_points) {
  if (!(r_min > 0.0)) throw std::invalid_argument("grid r_min must be positive");
  if (!(r_max > r_min)) throw std::invalid_argument("grid r_max must exceed r_min");
  if (n_points < 256 || !std::has_single_bit(n_points)) {
    throw std::invalid_argument("grid point count must be a power of two >= 256, got " +
                                std::to_string(n_points));
  }
  dr_ = (r_max - r_min) / static_cast<double>(n_);
  dk_ = 2.0 * units::kPi / (static_cast<double>(n_) * dr_);
  r_values_.resize(n_);
  k_values_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    r_values_[i] = r(i);
    k_values_[i] = k(i);
  }
}

std::shared_ptr<const RadialGrid> RadialGrid::make(double r_min, double r_max,
                                                   std::size_t n_points) {
  return std::make_shared<const RadialGrid>(r_min, r_max, n_points);
}

double RadialGrid::k(std::size_t i) const noexcept {
  const auto signed_index = i < n_ / 2 ? static_cast<double>(i)
                                       : static_cast<double>(i) - static_cast<double>(n_);
  return signed_index * dk_;
}

}  // namespace vibctl
