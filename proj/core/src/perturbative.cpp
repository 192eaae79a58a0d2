#include "vibctl/perturbative.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "vibctl/units.hpp"

namespace vibctl {

namespace {

void check_pair(std::size_t n, std::size_t m, std::span<const double> energies,
                const CouplingMatrix& coupling, double reference_energy) {
  if (n >= coupling.size() || m >= coupling.size() || n >= energies.size() ||
      m >= energies.size()) {
    throw std::out_of_range("kappa index outside the coupling matrix");
  }
  if (!(energies[m] < 0.0)) {
    throw std::invalid_argument("kappa needs a bound state, E_" + std::to_string(m) + " = " +
                                std::to_string(energies[m]));
  }
  if (energies[m] == reference_energy) {
    throw std::invalid_argument("closure energy coincides with E_" + std::to_string(m));
  }
}

// (exp(i x) - 1) / (i x), stable at small x.
Complex phase_integral(double x) {
  const double h = 0.5 * x;
  const double sinc = std::abs(h) < 1e-8 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
  return std::polar(sinc, h);
}

}  // namespace

double wrap_phase(double x) {
  double y = std::remainder(x, 2.0 * units::kPi);
  if (y <= -units::kPi) y += 2.0 * units::kPi;
  return y;
}

CouplingMatrix coupling_matrix(const VibrationalBasis& basis, std::span<const double> dipole,
                               std::size_t size) {
  const std::size_t n = size == 0 ? basis.size() : std::min(size, basis.size());
  CouplingMatrix out;
  out.d2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (n == 0) return out;
  const auto& grid = basis.states.front().grid();
  if (dipole.size() != grid.size()) throw std::invalid_argument("dipole and basis grid differ");

  std::vector<double> d2(dipole.size());
  for (std::size_t i = 0; i < d2.size(); ++i) d2[i] = dipole[i] * dipole[i];
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      const auto& fa = basis.states[a];
      const auto& fb = basis.states[b];
      for (std::size_t i = 0; i < d2.size(); ++i) s += fa[i].real() * d2[i] * fb[i].real();
      s *= grid.dr();
      out.d2(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
      out.d2(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = s;
    }
  }
  return out;
}

Complex kappa(std::size_t n, std::size_t n_prime, double field, double duration,
              std::span<const double> energies, const CouplingMatrix& coupling,
              double reference_energy) {
  check_pair(n, n_prime, energies, coupling, reference_energy);
  const double delta = energies[n] - energies[n_prime];
  return kappa_short(n, n_prime, field, duration, energies, coupling, reference_energy) *
         phase_integral(delta * duration);
}

double kappa_short(std::size_t n, std::size_t n_prime, double field, double duration,
                   std::span<const double> energies, const CouplingMatrix& coupling,
                   double reference_energy) {
  check_pair(n, n_prime, energies, coupling, reference_energy);
  const double d2 = coupling.d2(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_prime));
  return field * field * duration * d2 / (energies[n_prime] - reference_energy);
}

KappaMatrix kappa_matrix(const CouplingMatrix& coupling, std::span<const double> energies,
                         double field, double duration, double reference_energy) {
  const std::size_t n = coupling.size();
  KappaMatrix out;
  out.field = field;
  out.duration = duration;
  out.reference_energy = reference_energy;
  out.kappa.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      out.kappa(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          kappa(a, b, field, duration, energies, coupling, reference_energy);
    }
  }
  return out;
}

std::vector<Complex> apply_impulse(std::span<const Complex> a, double tau,
                                   const KappaMatrix& kappa, std::span<const double> energies) {
  const std::size_t n = std::min(a.size(), kappa.size());
  if (energies.size() < n) throw std::invalid_argument("fewer energies than coefficients");
  const Complex i(0.0, 1.0);
  std::vector<Complex> out(a.begin(), a.end());
  auto k = [&](std::size_t r, std::size_t c) {
    return kappa.kappa(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  };
  for (std::size_t m = 0; m < n; ++m) {
    Complex v = a[m] * (1.0 - i * k(m, m));
    if (m > 0) {
      v -= i * k(m, m - 1) * a[m - 1] * std::polar(1.0, (energies[m] - energies[m - 1]) * tau);
    }
    if (m + 1 < n) {
      v -= i * k(m, m + 1) * a[m + 1] * std::polar(1.0, (energies[m] - energies[m + 1]) * tau);
    }
    out[m] = v;
  }
  return out;
}

std::vector<Impulse> impulse_train(const LaserPulse& pulse) {
  std::vector<Impulse> train;
  if (!(pulse.omega > 0.0)) return train;
  const double half_cycle = units::kPi / pulse.omega;
  const double lo = pulse.window_start();
  const double hi = pulse.window_end();
  // Carrier zeros: omega (t - centre) + phase = (j + 1/2) pi.
  auto zero = [&](double j) {
    return pulse.center + ((j + 0.5) * units::kPi - pulse.carrier_phase) / pulse.omega;
  };
  const double j_first = std::ceil((pulse.omega * (lo - pulse.center) + pulse.carrier_phase) /
                                       units::kPi - 1.0);
  for (double j = j_first;; j += 1.0) {
    const double start = zero(j);
    const double mid = start + 0.5 * half_cycle;
    if (mid > hi) break;
    if (mid < lo) continue;
    train.push_back({start, pulse.peak_field * pulse.envelope_at(mid) / std::sqrt(2.0)});
  }
  return train;
}

std::vector<Complex> apply_pulse_model(std::span<const Complex> a, const LaserPulse& pulse,
                                       const CouplingMatrix& coupling,
                                       std::span<const double> energies,
                                       double reference_energy) {
  std::vector<Complex> out(a.begin(), a.end());
  if (pulse.peak_field == 0.0) return out;
  const double half_cycle = units::kPi / pulse.omega;
  // kappa scales as F0^2: build it once at unit field.
  const KappaMatrix unit = kappa_matrix(coupling, energies, 1.0, half_cycle, reference_energy);
  KappaMatrix scaled = unit;
  for (const auto& impulse : impulse_train(pulse)) {
    const double f2 = impulse.amplitude * impulse.amplitude;
    scaled.kappa = unit.kappa * f2;
    scaled.field = impulse.amplitude;
    out = apply_impulse(out, impulse.start, scaled, energies);
  }
  return out;
}

std::vector<Clock> clock_phases(std::size_t initial, const LaserPulse& pulse,
                                const CouplingMatrix& coupling, std::span<const double> energies,
                                double reference_energy) {
  if (initial >= coupling.size()) throw std::out_of_range("initial state outside the model");
  std::vector<Complex> a(coupling.size(), 0.0);
  a[initial] = 1.0;
  a = apply_pulse_model(a, pulse, coupling, energies, reference_energy);
  std::vector<Clock> clocks(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    clocks[n] = {n, std::abs(a[n]), std::arg(a[n])};
  }
  return clocks;
}

InterferenceTimes predict_interference_times(const SpectralConstants& constants) {
  if (!(constants.omega_e > 0.0) || !(constants.omega_e_x_e > 0.0)) {
    throw std::invalid_argument("spectral constants must be positive");
  }
  return {units::au_to_fs(units::kPi / (2.0 * constants.omega_e_x_e)),
          units::au_to_fs(units::kPi / constants.omega_e)};
}

double phase_condition_time(std::span<const double> energies, double first_fs, double last_fs,
                            double step_fs, std::size_t n_first, std::size_t n_last) {
  if (n_first == 0 || n_last + 1 >= energies.size() || n_first > n_last) {
    throw std::invalid_argument("phase condition needs levels n_first-1 .. n_last+1");
  }
  if (!(step_fs > 0.0) || !(last_fs >= first_fs)) {
    throw std::invalid_argument("bad phase condition search range");
  }
  double best_tau = first_fs;
  double best_cost = std::numeric_limits<double>::infinity();
  const auto steps = static_cast<std::size_t>(std::floor((last_fs - first_fs) / step_fs + 0.5));
  for (std::size_t s = 0; s <= steps; ++s) {
    const double tau_fs = first_fs + static_cast<double>(s) * step_fs;
    const double tau = units::fs_to_au(tau_fs);
    double cost = 0.0;
    for (std::size_t n = n_first; n <= n_last; ++n) {
      cost += std::abs(wrap_phase((energies[n + 1] - energies[n - 1]) * tau));
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_tau = tau_fs;
    }
  }
  return best_tau;
}

std::vector<InterferenceDiagnostic> interference_diagnostic(std::span<const Complex> a,
                                                            double tau, const KappaMatrix& kappa,
                                                            std::span<const double> energies,
                                                            std::size_t n_first,
                                                            std::size_t n_last) {
  const std::size_t size = std::min(a.size(), kappa.size());
  if (n_first == 0 || n_last + 1 >= size) {
    throw std::invalid_argument("diagnostic needs levels n_first-1 .. n_last+1");
  }
  const Complex i(0.0, 1.0);
  auto k = [&](std::size_t r, std::size_t c) {
    return kappa.kappa(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  };
  std::vector<InterferenceDiagnostic> out;
  for (std::size_t n = n_first; n <= n_last; ++n) {
    InterferenceDiagnostic d;
    d.n = n;
    d.required_phase = wrap_phase((energies[n] - energies[n - 1]) * tau + 0.5 * units::kPi);
    d.stark_phase = k(n, n).real();
    d.mismatch = wrap_phase(d.stark_phase - d.required_phase);
    const Complex neighbours =
        k(n, n - 1) * a[n - 1] * std::polar(1.0, (energies[n] - energies[n - 1]) * tau) +
        k(n, n + 1) * a[n + 1] * std::polar(1.0, (energies[n] - energies[n + 1]) * tau);
    const double own = std::abs(a[n] * (1.0 - i * k(n, n)));
    d.balance = own > 0.0 ? std::abs(neighbours) / own : std::numeric_limits<double>::infinity();
    out.push_back(d);
  }
  return out;
}

}  // namespace vibctl
