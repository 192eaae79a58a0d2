#include "vibctl/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "vibctl/units.hpp"

namespace vibctl {

// Cached for the lifetime of the program and never destroyed.
struct Fft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FFT length must be positive");
  plans_ = acquire(n);
}

void Fft::forward(std::span<Complex> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT buffer length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->forward, p, p);
}

void Fft::backward(std::span<Complex> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT buffer length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->backward, p, p);
}

std::shared_ptr<const Fft::Plans> Fft::acquire(std::size_t n) {
  static std::map<std::size_t, std::shared_ptr<Plans>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[n];
  if (!slot) {
    auto plans = std::make_shared<Plans>();
    ComplexVector scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    const int len = static_cast<int>(n);
    plans->forward = fftw_plan_dft_1d(len, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    plans->backward = fftw_plan_dft_1d(len, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plans->forward || !plans->backward) throw std::runtime_error("FFTW planning failed");
    slot = std::move(plans);
  }
  return slot;
}

double norm_squared(const MomentumField& field) {
  double sum = 0.0;
  for (const auto& a : field.amplitudes) sum += std::norm(a);
  return sum * field.grid->dk();
}

MomentumField to_momentum(const ChannelField& field) {
  const auto& grid = field.grid();
  MomentumField out{field.grid_ptr(), ComplexVector(field.amplitudes().begin(), field.amplitudes().end())};
  Fft(grid.size()).forward(out.amplitudes);
  const double scale = grid.dr() / std::sqrt(2.0 * units::kPi);
  for (auto& a : out.amplitudes) a *= scale;
  return out;
}

ChannelField from_momentum(const MomentumField& field) {
  const auto& grid = *field.grid;
  ComplexVector data(field.amplitudes.begin(), field.amplitudes.end());
  Fft(grid.size()).backward(data);
  // inverse of dr / sqrt(2 pi) combined with the 1/n of the inverse DFT
  const double scale = std::sqrt(2.0 * units::kPi) / (grid.dr() * static_cast<double>(grid.size()));
  for (auto& a : data) a *= scale;
  return ChannelField(field.grid, std::move(data));
}

}  // namespace vibctl
