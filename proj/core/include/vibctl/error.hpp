#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vibctl {

/// Malformed input data (curve tables, configuration text).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The propagation produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace vibctl
