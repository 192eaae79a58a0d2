#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "vibctl/field.hpp"

namespace vibctl {

/// Bound vibrational eigenpairs of one potential well, ascending in energy.
/// States are real, dr-normalised, and sign-fixed so that the leftmost
/// antinode is positive.
struct VibrationalBasis {
  std::vector<double> energies;
  std::vector<ChannelField> states;
  /// Set when fewer bound states exist than were requested.
  bool truncated = false;

  std::size_t size() const noexcept { return energies.size(); }
};

struct BoundStateOptions {
  /// States with E below this count as bound (hartree).
  double bound_threshold = -1e-6;
};

inline constexpr std::size_t kAllBoundStates = std::numeric_limits<std::size_t>::max();

/// Fourier-grid Hamiltonian: the kinetic operator k^2 / (2 mass) is exact on
/// the periodic grid (the same operator the split-step propagator uses), the
/// potential is diagonal. The dense matrix is diagonalised for the states
/// below the bound threshold and the lowest `count` are returned.
VibrationalBasis solve_bound_states(std::shared_ptr<const RadialGrid> grid,
                                    std::span<const double> potential, double mass,
                                    std::size_t count, const BoundStateOptions& options = {});

/// a_n = <n|psi>
std::vector<Complex> project(const ChannelField& field, const VibrationalBasis& basis);
std::vector<Complex> project(const TwoChannelState& state, const VibrationalBasis& basis);

/// sum_n c_n exp(-i E_n t) |n>
ChannelField synthesize(const VibrationalBasis& basis, std::span<const Complex> coefficients,
                        double t = 0.0);

/// (E_n - E_m) in a.u. (hbar = 1).
double beat_frequency(const VibrationalBasis& basis, std::size_t n, std::size_t m);

/// Constants of E_n ~ -D_e + w_e (n + 1/2) - w_e x_e (n + 1/2)^2.
struct SpectralConstants {
  double omega_e = 0.0;
  double omega_e_x_e = 0.0;
  double d_e = 0.0;
  /// Root-mean-square deviation of the fitted levels (hartree).
  double residual = 0.0;
};

/// Least-squares fit over the lowest min(levels, size) energies; needs >= 5.
SpectralConstants fit_anharmonic(std::span<const double> energies, std::size_t levels = 9);
SpectralConstants fit_anharmonic(const VibrationalBasis& basis, std::size_t levels = 9);

}  // namespace vibctl
