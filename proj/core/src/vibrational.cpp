#include "vibctl/vibrational.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vibctl/fft.hpp"

namespace vibctl {

namespace {

// First column of the circulant kinetic matrix T_ij = t[(i - j) mod n].
std::vector<double> kinetic_column(const RadialGrid& grid, double mass) {
  const std::size_t n = grid.size();
  ComplexVector spectrum(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = grid.k(i);
    spectrum[i] = std::isinf(mass) ? 0.0 : k * k / (2.0 * mass);
  }
  Fft(n).backward(spectrum);
  std::vector<double> column(n);
  for (std::size_t i = 0; i < n; ++i) column[i] = spectrum[i].real() / static_cast<double>(n);
  return column;
}

extern "C" void dstevr_(const char* jobz, const char* range, const int* n, double* d, double* e,
                        const double* vl, const double* vu, const int* il, const int* iu,
                        const double* abstol, int* m, double* w, double* z, const int* ldz,
                        int* isuppz, double* work, const int* lwork, int* iwork,
                        const int* liwork, int* info);

struct TridiagonalPairs {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
};

// Eigenpairs of a symmetric tridiagonal matrix with eigenvalues in (lo, hi].
TridiagonalPairs lowest_tridiagonal_eigenpairs(std::vector<double> diag, std::vector<double> sub,
                                               double lo, double hi) {
  const int n = static_cast<int>(diag.size());
  int found = 0;
  int info = 0;
  const int dummy_index = 0;
  const double abstol = 0.0;
  std::vector<double> w(diag.size());
  Eigen::MatrixXd z(n, n);
  std::vector<int> support(2 * diag.size());
  int lwork = -1;
  int liwork = -1;
  double work_query = 0.0;
  int iwork_query = 0;
  dstevr_("V", "V", &n, diag.data(), sub.data(), &lo, &hi, &dummy_index, &dummy_index, &abstol,
          &found, w.data(), z.data(), &n, support.data(), &work_query, &lwork, &iwork_query,
          &liwork, &info);
  lwork = static_cast<int>(work_query);
  liwork = iwork_query;
  std::vector<double> work(static_cast<std::size_t>(lwork));
  std::vector<int> iwork(static_cast<std::size_t>(liwork));
  dstevr_("V", "V", &n, diag.data(), sub.data(), &lo, &hi, &dummy_index, &dummy_index, &abstol,
          &found, w.data(), z.data(), &n, support.data(), work.data(), &lwork, iwork.data(),
          &liwork, &info);
  if (info != 0) throw std::runtime_error("dstevr failed: info " + std::to_string(info));
  TridiagonalPairs out;
  out.values.assign(w.begin(), w.begin() + found);
  out.vectors = z.leftCols(found);
  return out;
}

void fix_phase(std::span<double> v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  const double floor = 1e-3 * peak;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double here = std::abs(v[i]);
    if (here < floor) continue;
    const double left = i > 0 ? std::abs(v[i - 1]) : 0.0;
    const double right = i + 1 < v.size() ? std::abs(v[i + 1]) : 0.0;
    if (here >= left && here >= right) {
      if (v[i] < 0.0) {
        for (double& x : v) x = -x;
      }
      return;
    }
  }
}

}  // namespace

VibrationalBasis solve_bound_states(std::shared_ptr<const RadialGrid> grid,
                                    std::span<const double> potential, double mass,
                                    std::size_t count, const BoundStateOptions& options) {
  const std::size_t n = grid->size();
  if (potential.size() != n) throw std::invalid_argument("potential sample count mismatch");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");

  const auto t = kinetic_column(*grid, mass);
  Eigen::MatrixXd h(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) h(i, j) = t[(i + n - j) % n];
    h(j, j) += potential[j];
  }

  const double lowest = *std::min_element(potential.begin(), potential.end()) - 1.0;
  VibrationalBasis basis;
  if (!(options.bound_threshold > lowest)) return basis;

  // H = Q T Q^T; the bound eigenpairs of the tridiagonal T come from LAPACK,
  // the eigenvectors are mapped back through Q.
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(h);
  const Eigen::VectorXd d_vec = tri.diagonal();
  const Eigen::VectorXd e_vec = tri.subDiagonal();
  std::vector<double> diag(d_vec.begin(), d_vec.end());
  std::vector<double> sub(e_vec.begin(), e_vec.end());
  sub.push_back(0.0);
  const auto pairs = lowest_tridiagonal_eigenpairs(diag, sub, lowest, options.bound_threshold);
  const std::size_t found = pairs.values.size();
  basis.truncated = found < count && count != kAllBoundStates;
  const std::size_t got = std::min(count, found);
  if (got == 0) return basis;
  Eigen::MatrixXd z = tri.matrixQ() * pairs.vectors.leftCols(static_cast<Eigen::Index>(got));
  std::vector<double> w = pairs.values;

  const double scale = 1.0 / std::sqrt(grid->dr());
  for (std::size_t s = 0; s < got; ++s) {
    std::span<double> v(z.col(static_cast<Eigen::Index>(s)).data(), n);
    fix_phase(v);
    ChannelField f(grid);
    for (std::size_t i = 0; i < n; ++i) f[i] = v[i] * scale;
    basis.energies.push_back(w[s]);
    basis.states.push_back(std::move(f));
  }
  return basis;
}

std::vector<Complex> project(const ChannelField& field, const VibrationalBasis& basis) {
  std::vector<Complex> out;
  out.reserve(basis.size());
  for (const auto& state : basis.states) out.push_back(inner_product(state, field));
  return out;
}

std::vector<Complex> project(const TwoChannelState& state, const VibrationalBasis& basis) {
  return project(state.g, basis);
}

ChannelField synthesize(const VibrationalBasis& basis, std::span<const Complex> coefficients,
                        double t) {
  if (basis.states.empty()) throw std::invalid_argument("empty basis");
  if (coefficients.size() > basis.size()) {
    throw std::invalid_argument("more coefficients than basis states");
  }
  ChannelField out(basis.states.front().grid_ptr());
  auto dst = out.amplitudes();
  for (std::size_t n = 0; n < coefficients.size(); ++n) {
    const Complex c = coefficients[n] * std::polar(1.0, -basis.energies[n] * t);
    if (c == Complex{}) continue;
    const auto src = basis.states[n].amplitudes();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i].real();
  }
  return out;
}

double beat_frequency(const VibrationalBasis& basis, std::size_t n, std::size_t m) {
  if (n >= basis.size() || m >= basis.size()) {
    throw std::out_of_range("beat_frequency: state index beyond basis size " +
                            std::to_string(basis.size()));
  }
  return basis.energies[n] - basis.energies[m];
}

SpectralConstants fit_anharmonic(std::span<const double> energies, std::size_t levels) {
  const std::size_t count = std::min(levels, energies.size());
  if (count < 5) throw std::invalid_argument("fit_anharmonic needs at least 5 bound states");
  Eigen::MatrixXd a(count, 3);
  Eigen::VectorXd b(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double x = static_cast<double>(n) + 0.5;
    a(n, 0) = 1.0;
    a(n, 1) = x;
    a(n, 2) = -x * x;
    b(n) = energies[n];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  SpectralConstants out;
  out.d_e = -c(0);
  out.omega_e = c(1);
  out.omega_e_x_e = c(2);
  out.residual = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(count));
  return out;
}

SpectralConstants fit_anharmonic(const VibrationalBasis& basis, std::size_t levels) {
  return fit_anharmonic(std::span<const double>(basis.energies), levels);
}

}  // namespace vibctl
