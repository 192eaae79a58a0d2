#include "vibctl/curves.hpp"

#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vibctl/error.hpp"

namespace vibctl {

struct PotentialCurveSet::Splines {
  struct Deleter {
    void operator()(gsl_spline* s) const noexcept { gsl_spline_free(s); }
  };
  using Handle = std::unique_ptr<gsl_spline, Deleter>;

  Handle g, u, d;

  static Handle build(const std::vector<double>& x, const std::vector<double>& y) {
    Handle s(gsl_spline_alloc(gsl_interp_cspline, x.size()));
    if (!s || gsl_spline_init(s.get(), x.data(), y.data(), x.size()) != 0) {
      throw InputError("spline construction failed");
    }
    return s;
  }
};

namespace {

std::string row_label(std::size_t row, std::size_t line) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

}  // namespace

PotentialCurveSet::PotentialCurveSet(std::vector<double> r, std::vector<double> v_g,
                                     std::vector<double> v_u, std::vector<double> dipole)
    : r_(std::move(r)), v_g_(std::move(v_g)), v_u_(std::move(v_u)), d_(std::move(dipole)) {
  const std::size_t n = r_.size();
  if (v_g_.size() != n || v_u_.size() != n || d_.size() != n) {
    throw InputError("curve columns have different lengths");
  }
  if (n < kMinSamples) {
    throw InputError("insufficient samples: " + std::to_string(n) + " rows, need at least " +
                     std::to_string(kMinSamples));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(r_[i]) || !std::isfinite(v_g_[i]) || !std::isfinite(v_u_[i]) ||
        !std::isfinite(d_[i])) {
      throw InputError("row " + std::to_string(i + 1) + ": non-finite value");
    }
    if (i > 0 && !(r_[i] > r_[i - 1])) {
      throw InputError("row " + std::to_string(i + 1) + ": R not strictly increasing");
    }
    if (v_u_[i] < v_g_[i]) {
      throw InputError("row " + std::to_string(i + 1) + ": V_u below V_g");
    }
  }
  shift_ = 0.5 * (v_g_.back() + v_u_.back());
  for (std::size_t i = 0; i < n; ++i) {
    v_g_[i] -= shift_;
    v_u_[i] -= shift_;
  }
  auto splines = std::make_shared<Splines>();
  splines->g = Splines::build(r_, v_g_);
  splines->u = Splines::build(r_, v_u_);
  splines->d = Splines::build(r_, d_);
  splines_ = std::move(splines);
}

double PotentialCurveSet::v_g_at(double r) const {
  if (r > r_.back()) return 0.0;
  if (r <= r_.front()) return v_g_.front();
  return gsl_spline_eval(splines_->g.get(), r, nullptr);
}

double PotentialCurveSet::v_u_at(double r) const {
  if (r > r_.back()) return 0.0;
  if (r <= r_.front()) return v_u_.front();
  return gsl_spline_eval(splines_->u.get(), r, nullptr);
}

double PotentialCurveSet::dipole_at(double r) const {
  if (r > r_.back()) return 0.5 * r;
  if (r <= r_.front()) return d_.front();
  return gsl_spline_eval(splines_->d.get(), r, nullptr);
}

double PotentialCurveSet::well_minimum_r() const {
  const auto it = std::min_element(v_g_.begin(), v_g_.end());
  return r_[static_cast<std::size_t>(it - v_g_.begin())];
}

double PotentialCurveSet::well_depth() const {
  return -*std::min_element(v_g_.begin(), v_g_.end());
}

PotentialCurveSet load_curves(std::istream& in) {
  std::vector<double> r, vg, vu, d;
  std::string line;
  std::size_t line_no = 0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    ++row;
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw InputError(row_label(row, line_no) + ": not a number: '" + token + "'");
      }
      values.push_back(v);
    }
    if (values.size() != 4) {
      throw InputError(row_label(row, line_no) + ": expected 4 columns (R V_g V_u d), found " +
                       std::to_string(values.size()));
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw InputError(row_label(row, line_no) + ": non-finite value");
    }
    if (!r.empty() && !(values[0] > r.back())) {
      throw InputError(row_label(row, line_no) + ": R not strictly increasing");
    }
    if (values[2] < values[1]) {
      throw InputError(row_label(row, line_no) + ": V_u below V_g");
    }
    r.push_back(values[0]);
    vg.push_back(values[1]);
    vu.push_back(values[2]);
    d.push_back(values[3]);
  }
  return PotentialCurveSet(std::move(r), std::move(vg), std::move(vu), std::move(d));
}

PotentialCurveSet load_curves_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open curve file '" + path + "'");
  try {
    return load_curves(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

PotentialCurveSet bundled_curves() {
  static const PotentialCurveSet curves = [] {
    std::istringstream in{std::string(bundled_curve_text())};
    return load_curves(in);
  }();
  return curves;
}

SampledOperators sample_on_grid(const PotentialCurveSet& curves, const RadialGrid& grid) {
  SampledOperators out;
  out.v_g.resize(grid.size());
  out.v_u.resize(grid.size());
  out.dipole.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    out.v_g[i] = curves.v_g_at(r);
    out.v_u[i] = curves.v_u_at(r);
    out.dipole[i] = curves.dipole_at(r);
  }
  return out;
}

MorseCurve::MorseCurve(double well_depth, double width, double r_e)
    : d_e_(well_depth), alpha_(width), r_e_(r_e) {
  if (!(well_depth > 0.0) || !(width > 0.0) || !(r_e > 0.0)) {
    throw std::invalid_argument("Morse parameters must be positive");
  }
}

MorseCurve MorseCurve::from_frequency(double well_depth, double omega_e, double r_e, double mass) {
  return MorseCurve(well_depth, omega_e * std::sqrt(mass / (2.0 * well_depth)), r_e);
}

double MorseCurve::operator()(double r) const {
  const double s = 1.0 - std::exp(-alpha_ * (r - r_e_));
  return d_e_ * s * s - d_e_;
}

std::vector<double> MorseCurve::sample(const RadialGrid& grid) const {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = (*this)(grid.r(i));
  return v;
}

double MorseCurve::omega_e(double mass) const { return alpha_ * std::sqrt(2.0 * d_e_ / mass); }

double MorseCurve::omega_e_x_e(double mass) const {
  const double w = omega_e(mass);
  return w * w / (4.0 * d_e_);
}

double MorseCurve::eigenvalue(std::size_t n, double mass) const {
  const double x = static_cast<double>(n) + 0.5;
  return -d_e_ + omega_e(mass) * x - omega_e_x_e(mass) * x * x;
}

std::size_t MorseCurve::bound_state_count(double mass) const {
  // levels exist while n + 1/2 < omega_e / (2 omega_e x_e)
  const double lambda = omega_e(mass) / (2.0 * omega_e_x_e(mass));
  return static_cast<std::size_t>(std::ceil(lambda - 0.5));
}

MorseCurve morse_curve(double well_depth, double width, double r_e) {
  return MorseCurve(well_depth, width, r_e);
}

}  // namespace vibctl
