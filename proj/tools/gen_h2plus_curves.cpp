// Regenerates core/data/h2plus_curves.dat: the exact Born-Oppenheimer
// 1s sigma_g / 2p sigma_u curves of H2+ and their transition dipole.
//
// The one-electron two-centre problem separates in prolate spheroidal
// coordinates (xi, eta). For m = 0 and q = E_el R^2 / 2:
//
//   d/deta[(1-eta^2) Y'] + (A - q eta^2) Y = 0            (angular)
//   d/dxi[(xi^2-1) X'] + (2 R xi + q xi^2 - A) X = 0       (radial)
//
// The angular problem is diagonalised in normalised Legendre polynomials of
// one parity, the radial one in Laguerre functions exp(-x/2) L_k(x) with
// x = 2p(xi-1), p = sqrt(-q). The energy is the q at which both separation
// constants agree.

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <vector>

namespace {

struct LaguerreRule {
  std::vector<double> nodes;
  // w_i * exp(x_i): integrates exp(-x/2)-scaled functions directly.
  std::vector<double> scaled_weights;
};

// Laguerre functions exp(-x/2) L_k(x), k = 0..count-1, with derivatives
// d/dx, via the three-term recurrence (linear, so the scaling carries through).
void laguerre_functions(double x, int count, std::vector<double>& f,
                        std::vector<double>& df) {
  f.assign(count + 1, 0.0);
  std::vector<double> l(count + 1), dl(count + 1);
  const double s = std::exp(-0.5 * x);
  l[0] = s;
  dl[0] = 0.0;
  if (count >= 1) {
    l[1] = (1.0 - x) * s;
    dl[1] = -s;
  }
  for (int k = 1; k < count; ++k) {
    l[k + 1] = ((2.0 * k + 1.0 - x) * l[k] - k * l[k - 1]) / (k + 1.0);
    dl[k + 1] = ((2.0 * k + 1.0 - x) * dl[k] - l[k] - k * dl[k - 1]) / (k + 1.0);
  }
  f = l;
  df.assign(count + 1, 0.0);
  // d/dx[exp(-x/2) L_k] = exp(-x/2) L_k' - exp(-x/2) L_k / 2
  for (int k = 0; k <= count; ++k) df[k] = dl[k] - 0.5 * l[k];
}

LaguerreRule gauss_laguerre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) jacobi(i, i + 1) = jacobi(i + 1, i) = i + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  LaguerreRule rule;
  std::vector<double> f, df;
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    // Newton polish on exp(-x/2) L_n(x) (same roots as L_n)
    for (int it = 0; it < 3; ++it) {
      laguerre_functions(x, n, f, df);
      const double dln = df[n] + 0.5 * f[n];
      x -= f[n] / dln;
    }
    laguerre_functions(x, n + 1, f, df);
    const double lnext = f[n + 1];
    rule.nodes.push_back(x);
    rule.scaled_weights.push_back(x / ((n + 1.0) * (n + 1.0) * lnext * lnext));
  }
  return rule;
}

// <P_l|eta|P_l'> and <P_l|eta^2|P_l'> for normalised Legendre polynomials.
Eigen::MatrixXd eta_matrix(int lmax) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(lmax + 1, lmax + 1);
  for (int l = 0; l < lmax; ++l) {
    m(l, l + 1) = m(l + 1, l) = (l + 1.0) / std::sqrt((2.0 * l + 1.0) * (2.0 * l + 3.0));
  }
  return m;
}

struct Solution {
  double energy = 0.0;  // electronic energy E_el (hartree)
  double p = 0.0;
  Eigen::VectorXd radial;   // Laguerre coefficients
  Eigen::VectorXd angular;  // full Legendre coefficients (l = 0..lmax)
};

class TwoCentreSolver {
 public:
  TwoCentreSolver(int radial_size, int lmax)
      : radial_size_(radial_size), lmax_(lmax), rule_(gauss_laguerre(radial_size + 4)) {
    const Eigen::MatrixXd eta = eta_matrix(lmax_ + 4);
    eta2_ = (eta * eta).topLeftCorner(lmax_ + 1, lmax_ + 1);
    eta1_ = eta.topLeftCorner(lmax_ + 1, lmax_ + 1);
    eta3_ = (eta * eta * eta).topLeftCorner(lmax_ + 1, lmax_ + 1);
  }

  // Lowest angular separation constant of the given parity (0 even, 1 odd).
  double angular(double q, int parity, Eigen::VectorXd* coeffs = nullptr) const {
    std::vector<int> ls;
    for (int l = parity; l <= lmax_; l += 2) ls.push_back(l);
    const int n = static_cast<int>(ls.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = q * eta2_(ls[i], ls[j]);
      m(i, i) += ls[i] * (ls[i] + 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (coeffs) {
      coeffs->setZero(lmax_ + 1);
      for (int i = 0; i < n; ++i) (*coeffs)(ls[i]) = solver.eigenvectors()(i, 0);
    }
    return solver.eigenvalues()(0);
  }

  // Lowest eigenvalue of the radial weak form; must equal -A at the root.
  double radial(double q, double r, Eigen::VectorXd* coeffs = nullptr) const {
    const double p = std::sqrt(-q);
    const int n = radial_size_;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> f, df;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      const double x = rule_.nodes[i];
      const double w = rule_.scaled_weights[i] / (2.0 * p);
      const double xi = 1.0 + x / (2.0 * p);
      laguerre_functions(x, n, f, df);
      const double stiff = (xi * xi - 1.0) * 4.0 * p * p;
      const double pot = 2.0 * r * xi + q * xi * xi;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b <= a; ++b) {
          k(a, b) += w * (stiff * df[a] * df[b] - pot * f[a] * f[b]);
          s(a, b) += w * f[a] * f[b];
        }
      }
    }
    k = k.selfadjointView<Eigen::Lower>();
    s = s.selfadjointView<Eigen::Lower>();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, s);
    if (coeffs) *coeffs = solver.eigenvectors().col(0);
    return solver.eigenvalues()(0);
  }

  Solution solve(double r, int parity) const {
    auto mismatch = [&](double energy) {
      const double q = 0.5 * energy * r * r;
      return radial(q, r) + angular(q, parity);
    };
    // Scan for the first sign change from the bottom of the spectrum.
    double lo = -2.2;
    double f_lo = mismatch(lo);
    double hi = lo;
    double f_hi = f_lo;
    const double step = 0.01;
    bool found = false;
    for (double e = lo + step; e < -0.05; e += step) {
      const double fe = mismatch(e);
      if ((fe > 0.0) != (f_lo > 0.0)) {
        hi = e;
        f_hi = fe;
        found = true;
        break;
      }
      lo = e;
      f_lo = fe;
    }
    if (!found) throw std::runtime_error("no bracket for R = " + std::to_string(r));
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto [a, b] = boost::math::tools::toms748_solve(mismatch, lo, hi, f_lo, f_hi, tol, iters);
    Solution sol;
    sol.energy = 0.5 * (a + b);
    const double q = 0.5 * sol.energy * r * r;
    sol.p = std::sqrt(-q);
    radial(q, r, &sol.radial);
    angular(q, parity, &sol.angular);
    return sol;
  }

  // Radial moments int_1^inf xi^m X_a X_b dxi for m = 0..3.
  std::array<double, 4> radial_moments(const Solution& a, const Solution& b) const {
    const int n = 2 * radial_size_ + 8;
    const LaguerreRule rule = gauss_laguerre(n);
    const double ps = a.p + b.p;
    std::array<double, 4> out{};
    std::vector<double> fa, fb, d;
    for (int i = 0; i < n; ++i) {
      const double y = rule.nodes[i];
      const double t = y / ps;  // xi - 1
      laguerre_functions(2.0 * a.p * t, radial_size_, fa, d);
      laguerre_functions(2.0 * b.p * t, radial_size_, fb, d);
      double xa = 0.0, xb = 0.0;
      for (int k = 0; k < radial_size_; ++k) {
        xa += a.radial(k) * fa[k];
        xb += b.radial(k) * fb[k];
      }
      // xa * xb already carries exp(-y)
      const double w = rule.scaled_weights[i] / ps;
      const double xi = 1.0 + t;
      double pw = 1.0;
      for (int m = 0; m < 4; ++m) {
        out[m] += w * pw * xa * xb;
        pw *= xi;
      }
    }
    return out;
  }

  double norm(const Solution& s) const {
    const auto mom = radial_moments(s, s);
    const double y0 = s.angular.squaredNorm();
    const double y2 = s.angular.dot(eta2_ * s.angular);
    return mom[2] * y0 - mom[0] * y2;
  }

  // <g| z |u> with z measured from the bond midpoint.
  double dipole(const Solution& g, const Solution& u, double r) const {
    const auto mom = radial_moments(g, u);
    const double y1 = g.angular.dot(eta1_ * u.angular);
    const double y3 = g.angular.dot(eta3_ * u.angular);
    const double raw = mom[3] * y1 - mom[1] * y3;
    return 0.5 * r * std::abs(raw) / std::sqrt(norm(g) * norm(u));
  }

 private:
  int radial_size_;
  int lmax_;
  LaguerreRule rule_;
  Eigen::MatrixXd eta1_, eta2_, eta3_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the bundled H2+ potential-curve table"};
  std::string out = "h2plus_curves.dat";
  double r_first = 0.2, r_last = 20.0, r_step = 0.05;
  int radial_size = 40, lmax = 60;
  app.add_option("-o,--out", out, "output path");
  app.add_option("--r-first", r_first);
  app.add_option("--r-last", r_last);
  app.add_option("--r-step", r_step);
  app.add_option("--radial-size", radial_size);
  app.add_option("--lmax", lmax);
  CLI11_PARSE(app, argc, argv);

  const TwoCentreSolver solver(radial_size, lmax);
  std::ofstream file(out);
  if (!file) {
    std::cerr << "cannot open " << out << "\n";
    return 1;
  }
  file << "# H2+ Born-Oppenheimer curves (isotope independent), atomic units.\n"
       << "# Exact two-centre solution in prolate spheroidal coordinates.\n"
       << "# Energies include 1/R and are relative to the H(1s) + p limit.\n"
       << "# columns: R  V_g(1s sigma_g)  V_u(2p sigma_u)  d(R) = <g|z|u>\n";
  const int count = static_cast<int>(std::lround((r_last - r_first) / r_step));
  char line[160];
  for (int i = 0; i <= count; ++i) {
    const double r = r_first + i * r_step;
    const Solution g = solver.solve(r, 0);
    const Solution u = solver.solve(r, 1);
    const double vg = g.energy + 1.0 / r + 0.5;
    const double vu = u.energy + 1.0 / r + 0.5;
    const double d = solver.dipole(g, u, r);
    std::snprintf(line, sizeof line, "%8.4f  %20.13e  %20.13e  %20.13e\n", r, vg, vu, d);
    file << line;
  }
  return 0;
}
