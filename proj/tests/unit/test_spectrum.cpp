#include <cmath>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"
#include "vibctl/error.hpp"
#include "vibctl/spectrum.hpp"
#include "vibctl/units.hpp"

using namespace vibctl;
using Catch::Approx;

namespace {

struct Series {
  std::vector<double> t, y;
};

// offset + a1 cos(2 pi t / p1) + a2 cos(2 pi t / p2), 1 fs sampling from 310 fs.
Series two_tones(std::size_t n, double a1, double p1, double a2, double p2) {
  Series s;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 310.0 + static_cast<double>(i);
    s.t.push_back(t);
    s.y.push_back(0.3 + a1 * std::cos(2 * std::numbers::pi * t / p1) +
                  a2 * std::cos(2 * std::numbers::pi * t / p2 + 0.4));
  }
  return s;
}

double omega_of_period(double fs) { return 2 * std::numbers::pi / units::fs_to_au(fs); }

}  // namespace

TEST_CASE("Beat spectrum locates tones and their strengths", "[spectrum]") {
  const auto s = two_tones(1000, 0.02, 11.0, 0.005, 25.0);
  const auto d = beat_spectrum(s.t, s.y);
  REQUIRE(d.samples == 1000);
  REQUIRE(d.fft_size == 4096);
  REQUIRE(d.spacing_fs == Approx(1.0));
  REQUIRE(d.omega.size() == 2049);
  REQUIRE(d.bin_width() == Approx(2 * std::numbers::pi / (4096 * units::fs_to_au(1.0))));

  // A Hann-windowed cosine of amplitude a peaks at about a (N - 1) / 4.
  REQUIRE(magnitude_near(d, omega_of_period(11.0)) == Approx(0.02 * 999 / 4).epsilon(0.03));
  REQUIRE(magnitude_near(d, omega_of_period(25.0)) == Approx(0.005 * 999 / 4).epsilon(0.03));
  // The mean is removed before windowing, so the zero bin keeps only the tone
  // leakage sum_j w_j (y_j - mean), evaluated independently.
  REQUIRE(d.magnitude[0] == Approx(0.00840458733712358).epsilon(1e-9));

  const auto peaks = find_peaks(d, 0.1);
  REQUIRE(peaks.size() == 2);
  REQUIRE(peaks[0].period_fs == Approx(11.0).epsilon(0.005));
  REQUIRE(peaks[1].period_fs == Approx(25.0).epsilon(0.01));
  REQUIRE(peaks[0].magnitude > peaks[1].magnitude);
  REQUIRE(d.beat_period_fs(peaks[0].bin) == peaks[0].period_fs);
  REQUIRE(std::isinf(d.beat_period_fs(0)));
}

TEST_CASE("A longer record narrows the peaks", "[spectrum]") {
  auto width = [](std::size_t n) {
    const auto s = two_tones(n, 0.02, 11.0, 0.0, 25.0);
    const auto d = beat_spectrum(s.t, s.y);
    const auto peak = find_peaks(d).front();
    std::size_t hi = peak.bin;
    while (d.magnitude[hi] > 0.5 * peak.magnitude) ++hi;
    return d.omega[hi] - peak.omega;
  };
  REQUIRE(width(3691) < 0.3 * width(691));
}

TEST_CASE("Beat spectrum input checks", "[spectrum]") {
  const auto s = two_tones(255, 0.02, 11.0, 0.0, 25.0);
  REQUIRE_THROWS_AS(beat_spectrum(s.t, s.y), InputError);

  auto uneven = two_tones(300, 0.02, 11.0, 0.0, 25.0);
  uneven.t[150] += 0.5;
  REQUIRE_THROWS_WITH(beat_spectrum(uneven.t, uneven.y),
                      Catch::Matchers::ContainsSubstring("non-uniform sampling at row 150"));

  auto mismatch = two_tones(300, 0.02, 11.0, 0.0, 25.0);
  mismatch.y.pop_back();
  REQUIRE_THROWS_AS(beat_spectrum(mismatch.t, mismatch.y), InputError);
}
