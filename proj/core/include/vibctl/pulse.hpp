#pragma once

namespace vibctl {

/// Laboratory description of a pulse: the units of the command line and of
/// configuration files.
struct PulseSpec {
  double intensity_w_cm2 = 5e13;
  double wavelength_nm = 790.0;
  double center_fs = 0.0;
  double fwhm_fs = 5.0;
  double carrier_phase = 0.0;  // radians
};

/// F(t) = F0 cos(w (t - tau) + phase) exp(-2 ln2 (t - tau)^2 / W^2), all a.u.
struct LaserPulse {
  double peak_field = 0.0;
  double omega = 0.0;
  double center = 0.0;
  double fwhm = 1.0;
  double carrier_phase = 0.0;

  static LaserPulse from_spec(const PulseSpec& spec);

  double envelope_at(double t) const;
  double field_at(double t) const;

  /// The pulse is treated as switched on over [center - 5 W, center + 5 W].
  static constexpr double kHalfWindowFwhms = 5.0;
  double window_start() const { return center - kHalfWindowFwhms * fwhm; }
  double window_end() const { return center + kHalfWindowFwhms * fwhm; }

  LaserPulse shifted_to(double new_center) const {
    LaserPulse p = *this;
    p.center = new_center;
    return p;
  }
};

/// F0 in a.u. for a cycle-averaged intensity in W/cm^2 (I = eps0 c F0^2 / 2).
double intensity_to_field(double intensity_w_cm2);

}  // namespace vibctl
