#include "vibctl/pulse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vibctl/units.hpp"

namespace vibctl {

LaserPulse LaserPulse::from_spec(const PulseSpec& spec) {
  if (!(spec.intensity_w_cm2 >= 0.0)) throw std::invalid_argument("pulse intensity must be >= 0");
  if (!(spec.wavelength_nm > 0.0)) throw std::invalid_argument("pulse wavelength must be > 0");
  if (!(spec.fwhm_fs > 0.0)) throw std::invalid_argument("pulse fwhm must be > 0");
  LaserPulse p;
  p.peak_field = intensity_to_field(spec.intensity_w_cm2);
  p.omega = units::wavelength_to_omega(spec.wavelength_nm);
  p.center = units::fs_to_au(spec.center_fs);
  p.fwhm = units::fs_to_au(spec.fwhm_fs);
  p.carrier_phase = spec.carrier_phase;
  return p;
}

double LaserPulse::envelope_at(double t) const {
  const double x = (t - center) / fwhm;
  return std::exp(-2.0 * std::numbers::ln2 * x * x);
}

double LaserPulse::field_at(double t) const {
  return peak_field * std::cos(omega * (t - center) + carrier_phase) * envelope_at(t);
}

double intensity_to_field(double intensity_w_cm2) {
  if (!(intensity_w_cm2 >= 0.0)) throw std::invalid_argument("intensity must be >= 0");
  return std::sqrt(intensity_w_cm2 / units::kAuIntensity);
}

}  // namespace vibctl
