#pragma once

// Hartree atomic units are used everywhere inside the library. These are the
// only conversions to laboratory units; they are applied at I/O boundaries.

#include <numbers>

namespace vibctl::units {

inline constexpr double kPi = std::numbers::pi;

/// One atomic unit of time in femtoseconds.
inline constexpr double kFsPerAu = 0.02418884326585747;
/// Cycle-averaged intensity (W/cm^2) of a field with amplitude 1 a.u.
inline constexpr double kAuIntensity = 3.50945e16;
inline constexpr double kEvPerHartree = 27.211386245988;
inline constexpr double kCmInvPerHartree = 219474.6313632;
/// Photon energy in hartree times wavelength in nm.
inline constexpr double kHartreeNm = 45.56335252907;

inline constexpr double fs_to_au(double fs) { return fs / kFsPerAu; }
inline constexpr double au_to_fs(double au) { return au * kFsPerAu; }

/// Carrier angular frequency (a.u.) of light with the given wavelength.
inline constexpr double wavelength_to_omega(double nm) { return kHartreeNm / nm; }

/// Period in fs of an angular frequency given in a.u.
inline constexpr double period_fs(double omega) { return 2.0 * kPi / omega * kFsPerAu; }

/// D2+ nuclear reduced mass (half the deuteron mass) in electron masses.
inline constexpr double kD2ReducedMass = 1835.24;

}  // namespace vibctl::units
