#include <cmath>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "vibctl/fft.hpp"

using namespace vibctl;
using Catch::Approx;

namespace {

// Direct O(n^2) transform with the library's sign convention.
ComplexVector naive_dft(const ComplexVector& x, int sign) {
  const std::size_t n = x.size();
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = sign * 2.0 * std::numbers::pi * double(j * k % n) / double(n);
      s += x[j] * Complex(std::cos(a), std::sin(a));
    }
    out[k] = s;
  }
  return out;
}

}  // namespace

TEST_CASE("Fft matches a direct DFT in both directions", "[fft]") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  for (std::size_t n : {8u, 64u, 256u}) {
    ComplexVector x(n);
    for (auto& v : x) v = {gauss(rng), gauss(rng)};
    const Fft fft(n);

    auto fwd = x;
    fft.forward(fwd);
    const auto fwd_ref = naive_dft(x, -1);
    auto back = x;
    fft.backward(back);
    const auto back_ref = naive_dft(x, +1);
    for (std::size_t k = 0; k < n; ++k) {
      REQUIRE(std::abs(fwd[k] - fwd_ref[k]) < 1e-10 * double(n));
      REQUIRE(std::abs(back[k] - back_ref[k]) < 1e-10 * double(n));
    }

    // backward(forward(x)) = n x
    fft.backward(fwd);
    for (std::size_t j = 0; j < n; ++j) REQUIRE(std::abs(fwd[j] / double(n) - x[j]) < 1e-12);
  }
}

TEST_CASE("Fft rejects a buffer of the wrong length", "[fft]") {
  const Fft fft(64);
  ComplexVector x(32);
  REQUIRE_THROWS_AS(fft.forward(x), std::invalid_argument);
  REQUIRE_THROWS_AS(Fft(0), std::invalid_argument);
}

TEST_CASE("Momentum representation of a Gaussian", "[fft]") {
  auto grid = RadialGrid::make(0.1, 40.0, 1024);
  const double w = 0.7, k0 = 4.0;
  const auto f = gaussian_packet(grid, 12.0, w, k0);
  const auto phi = to_momentum(f);
  REQUIRE(norm_squared(phi) == Approx(1.0).epsilon(1e-12));

  // |phi(k)| = (w^2 / pi)^(1/4) exp(-(k - k0)^2 w^2 / 2)
  for (std::size_t i = 0; i < grid->size(); i += 7) {
    const double k = grid->k(i);
    const double expected = std::pow(w * w / std::numbers::pi, 0.25) *
                            std::exp(-0.5 * (k - k0) * (k - k0) * w * w);
    REQUIRE(std::abs(phi.amplitudes[i]) == Approx(expected).margin(1e-12));
  }

  const auto back = from_momentum(phi);
  for (std::size_t i = 0; i < grid->size(); ++i) REQUIRE(std::abs(back[i] - f[i]) < 1e-13);
}
