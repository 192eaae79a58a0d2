#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vibctl/field.hpp"
#include "vibctl/pulse.hpp"
#include "vibctl/vibrational.hpp"

namespace vibctl {

/// d2_{n,n'} = <n| d(R)^2 |n'>, the second-order coupling after closure over
/// the intermediate u-channel states.
struct CouplingMatrix {
  Eigen::MatrixXd d2;

  std::size_t size() const noexcept { return static_cast<std::size_t>(d2.rows()); }
};

/// Quadrature over the lowest `size` basis states (0 = all).
CouplingMatrix coupling_matrix(const VibrationalBasis& basis, std::span<const double> dipole,
                               std::size_t size = 0);

/// kappa_{n,n'} = F0^2 d2_{n,n'} / (E_{n'} - Ebar) * (exp(i D W') - 1) / (i D),
/// D = E_n - E_{n'} (the last factor tends to W' as D -> 0). Ebar is the
/// closure energy, 0 at the u-state dissociation threshold. Throws
/// std::invalid_argument when E_{n'} is not bound.
Complex kappa(std::size_t n, std::size_t n_prime, double field, double duration,
              std::span<const double> energies, const CouplingMatrix& coupling,
              double reference_energy = 0.0);

/// Short-impulse form F0^2 W' d2_{n,n'} / (E_{n'} - Ebar).
double kappa_short(std::size_t n, std::size_t n_prime, double field, double duration,
                   std::span<const double> energies, const CouplingMatrix& coupling,
                   double reference_energy = 0.0);

struct KappaMatrix {
  Eigen::MatrixXcd kappa;
  double field = 0.0;     // F0, a.u.
  double duration = 0.0;  // W', a.u.
  double reference_energy = 0.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(kappa.rows()); }
};

KappaMatrix kappa_matrix(const CouplingMatrix& coupling, std::span<const double> energies,
                         double field, double duration, double reference_energy = 0.0);

/// One square impulse at time tau acting on interaction-picture amplitudes
/// a_n (psi = sum a_n exp(-i E_n t) |n>), nearest neighbours only:
///   a_n <- a_n (1 - i k_nn) - i k_{n,n-1} a_{n-1} e^{i(E_n-E_{n-1})tau}
///                          - i k_{n,n+1} a_{n+1} e^{i(E_n-E_{n+1})tau}
std::vector<Complex> apply_impulse(std::span<const Complex> a, double tau,
                                   const KappaMatrix& kappa, std::span<const double> energies);

/// A pulse as alternating half-cycle square impulses between carrier zeros.
/// Each impulse lasts W' = pi / omega; its amplitude is the envelope at the
/// impulse midpoint divided by sqrt(2), so that the impulse carries the same
/// integral of F^2 as the half-cycle it replaces.
struct Impulse {
  double start = 0.0;  // a.u.
  double amplitude = 0.0;
};

std::vector<Impulse> impulse_train(const LaserPulse& pulse);

/// Ordered product of apply_impulse over the pulse's impulse train.
std::vector<Complex> apply_pulse_model(std::span<const Complex> a, const LaserPulse& pulse,
                                       const CouplingMatrix& coupling,
                                       std::span<const double> energies,
                                       double reference_energy = 0.0);

/// Amplitude and phase of each state after the pulse, starting from a
/// single eigenstate. The phase is relative to free evolution, so every
/// clock reads 0 without a field.
struct Clock {
  std::size_t n = 0;
  double amplitude = 0.0;
  double phase = 0.0;  // radians, positive = advanced
};

std::vector<Clock> clock_phases(std::size_t initial, const LaserPulse& pulse,
                                const CouplingMatrix& coupling, std::span<const double> energies,
                                double reference_energy = 0.0);

struct InterferenceTimes {
  double fractional_revival_fs = 0.0;      // pi / (2 w_e x_e)
  double parity_flip_interval_fs = 0.0;    // pi / w_e
};

InterferenceTimes predict_interference_times(const SpectralConstants& constants);

/// Delay in [first_fs, last_fs] minimising
///   sum_{n=n_first..n_last} |wrap((E_{n+1} - E_{n-1}) tau)|
/// on a grid of step_fs, i.e. where the two neighbour interference terms
/// of every level are in phase.
double phase_condition_time(std::span<const double> energies, double first_fs, double last_fs,
                            double step_fs = 0.01, std::size_t n_first = 2,
                            std::size_t n_last = 6);

/// How close one impulse at tau comes to destructive interference in level n.
struct InterferenceDiagnostic {
  std::size_t n = 0;
  double required_phase = 0.0;  // wrap((E_n - E_{n-1}) tau + pi/2)
  double stark_phase = 0.0;     // Re k_nn
  double mismatch = 0.0;        // wrap(stark_phase - required_phase)
  /// |neighbour terms| / |a_n (1 - i k_nn)|; 1 is the balanced optimum.
  double balance = 0.0;
};

std::vector<InterferenceDiagnostic> interference_diagnostic(std::span<const Complex> a,
                                                            double tau, const KappaMatrix& kappa,
                                                            std::span<const double> energies,
                                                            std::size_t n_first = 2,
                                                            std::size_t n_last = 6);

/// Wraps an angle to (-pi, pi].
double wrap_phase(double x);

}  // namespace vibctl
