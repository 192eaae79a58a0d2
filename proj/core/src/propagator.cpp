#include "vibctl/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "vibctl/error.hpp"
#include "vibctl/units.hpp"

namespace vibctl {

struct SplitOperatorPropagator::StepTables {
  ComplexVector kinetic_half;
  ComplexVector kinetic_full;
  ComplexVector potential_half_g;
  ComplexVector potential_half_u;
};

SplitOperatorPropagator::SplitOperatorPropagator(std::shared_ptr<const RadialGrid> grid,
                                                 SampledOperators operators, double mass)
    : grid_(std::move(grid)), ops_(std::move(operators)), mass_(mass), fft_(grid_->size()) {
  const std::size_t n = grid_->size();
  if (ops_.v_g.size() != n || ops_.v_u.size() != n || ops_.dipole.size() != n) {
    throw std::invalid_argument("sampled operators do not match the grid");
  }
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
}

SplitOperatorPropagator::StepTables SplitOperatorPropagator::tables(double dt) const {
  const std::size_t n = grid_->size();
  StepTables t;
  t.kinetic_half.resize(n);
  t.kinetic_full.resize(n);
  t.potential_half_g.resize(n);
  t.potential_half_u.resize(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = grid_->k(i);
    const double energy = std::isinf(mass_) ? 0.0 : k * k / (2.0 * mass_);
    // the 1/n of the inverse FFT is folded into the kinetic phases
    t.kinetic_half[i] = std::polar(inv_n, -energy * 0.5 * dt);
    t.kinetic_full[i] = std::polar(inv_n, -energy * dt);
    t.potential_half_g[i] = std::polar(1.0, -ops_.v_g[i] * 0.5 * dt);
    t.potential_half_u[i] = std::polar(1.0, -ops_.v_u[i] * 0.5 * dt);
  }
  return t;
}

void SplitOperatorPropagator::kinetic(TwoChannelState& state, std::span<const Complex> phase) const {
  for (ChannelField* channel : {&state.g, &state.u}) {
    auto data = channel->amplitudes();
    fft_.forward(data);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= phase[i];
    fft_.backward(data);
  }
}

namespace {

// exp(-i H_e dt/2) exp(-i V dt) exp(-i H_e dt/2), pointwise in R.
void potential_and_coupling(std::span<Complex> g, std::span<Complex> u,
                            std::span<const Complex> half_g, std::span<const Complex> half_u,
                            std::span<const double> dipole, double field_dt) {
  const std::size_t n = g.size();
  if (field_dt == 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      g[i] *= half_g[i] * half_g[i];
      u[i] *= half_u[i] * half_u[i];
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = g[i] * half_g[i];
    const Complex b = u[i] * half_u[i];
    const double theta = field_dt * dipole[i];
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex mis{0.0, -s};
    g[i] = (c * a + mis * b) * half_g[i];
    u[i] = (mis * a + c * b) * half_u[i];
  }
}

}  // namespace

void SplitOperatorPropagator::split_step(TwoChannelState& state, double dt, double field) const {
  if (!(state.grid() == *grid_)) throw std::invalid_argument("state grid does not match propagator");
  const StepTables t = tables(dt);
  kinetic(state, t.kinetic_half);
  potential_and_coupling(state.g.amplitudes(), state.u.amplitudes(), t.potential_half_g,
                         t.potential_half_u, ops_.dipole, field * dt);
  kinetic(state, t.kinetic_half);
}

std::vector<double> SplitOperatorPropagator::absorber_mask(const AbsorberSettings& settings) const {
  const std::size_t n = grid_->size();
  std::vector<double> mask(n, 1.0);
  if (!settings.enabled || settings.fraction <= 0.0) return mask;
  const double width = settings.fraction * (grid_->r_max() - grid_->r_min());
  const double start = grid_->r_max() - width;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid_->r(i);
    if (r <= start) continue;
    const double s = (r - start) / width;
    mask[i] = std::pow(std::max(0.0, std::cos(0.5 * units::kPi * s)), settings.exponent);
  }
  return mask;
}

PropagationSummary SplitOperatorPropagator::propagate(TwoChannelState& state,
                                                      std::span<const LaserPulse> pulses,
                                                      const PropagationConfig& config,
                                                      const Observer& observer) const {
  if (!(state.grid() == *grid_)) throw std::invalid_argument("state grid does not match propagator");
  if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(config.absorber.fraction >= 0.0 && config.absorber.fraction < 0.5)) {
    throw std::invalid_argument("absorber fraction must lie in [0, 0.5)");
  }
  PropagationSummary summary;
  const double span = config.t_end - config.t_start;
  if (span < 0.0) throw std::invalid_argument("t_end precedes t_start");
  const bool recording = observer && config.record_stride > 0;
  if (recording) observer(observe(state, config.t_start), state);
  if (span == 0.0) return summary;

  const auto steps = static_cast<std::size_t>(std::ceil(span / config.dt - 1e-9));
  const double dt = span / static_cast<double>(steps);
  summary.steps = steps;
  summary.dt = dt;

  const StepTables t = tables(dt);
  const std::vector<double> mask = absorber_mask(config.absorber);
  std::size_t absorber_begin = mask.size();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] < 1.0) {
      absorber_begin = i;
      break;
    }
  }

  auto g = state.g.amplitudes();
  auto u = state.u.amplitudes();
  const double dr = grid_->dr();

  kinetic(state, t.kinetic_half);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t_mid = config.t_start + (static_cast<double>(s) + 0.5) * dt;
    double field = 0.0;
    for (const auto& p : pulses) field += p.field_at(t_mid);

    potential_and_coupling(g, u, t.potential_half_g, t.potential_half_u, ops_.dipole, field * dt);

    double removed = 0.0;
    for (std::size_t i = absorber_begin; i < mask.size(); ++i) {
      const double before = std::norm(g[i]) + std::norm(u[i]);
      g[i] *= mask[i];
      u[i] *= mask[i];
      removed += before - (std::norm(g[i]) + std::norm(u[i]));
    }
    summary.absorbed += removed * dr;

    double probe = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) probe += std::norm(g[i]) + std::norm(u[i]);
    if (!std::isfinite(probe)) throw NumericalError("non-finite wavefunction", s + 1);

    const bool last = s + 1 == steps;
    const bool record_now = recording && ((s + 1) % config.record_stride == 0 || last);
    if (last || record_now) {
      kinetic(state, t.kinetic_half);
      if (record_now) {
        observer(observe(state, config.t_start + static_cast<double>(s + 1) * dt), state);
      }
      if (!last) kinetic(state, t.kinetic_half);
    } else {
      kinetic(state, t.kinetic_full);
    }
  }
  return summary;
}

Observation observe(const TwoChannelState& state, double t) {
  Observation o;
  o.t = t;
  o.pop_g = norm_squared(state.g);
  o.pop_u = norm_squared(state.u);
  o.norm = o.pop_g + o.pop_u;
  o.mean_r = o.pop_g > 0.0 ? expectation_position(state.g) : 0.0;
  return o;
}

double dissociation_yield(const TwoChannelState& state, const VibrationalBasis& basis,
                          double initial_norm) {
  double bound = 0.0;
  for (const auto& a : project(state.g, basis)) bound += std::norm(a);
  return initial_norm - bound;
}

DissociationLedger make_ledger(const TwoChannelState& state, const VibrationalBasis& basis,
                               double absorbed) {
  DissociationLedger ledger;
  double bound = 0.0;
  for (const auto& a : project(state.g, basis)) bound += std::norm(a);
  ledger.u_population = norm_squared(state.u);
  ledger.g_continuum_population = std::max(0.0, norm_squared(state.g) - bound);
  ledger.absorbed_flux = absorbed;
  return ledger;
}

}  // namespace vibctl
