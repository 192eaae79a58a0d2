#include "vibctl/field.hpp"

#include <cmath>
#include <stdexcept>

namespace vibctl {

namespace {

void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

ChannelField::ChannelField(std::shared_ptr<const RadialGrid> grid)
    : grid_(std::move(grid)), amplitudes_(grid_->size(), Complex{}) {}

ChannelField::ChannelField(std::shared_ptr<const RadialGrid> grid, ComplexVector amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_->size()) {
    throw std::invalid_argument("amplitude count does not match grid size");
  }
}

ChannelField& ChannelField::operator*=(Complex factor) noexcept {
  for (auto& a : amplitudes_) a *= factor;
  return *this;
}

TwoChannelState::TwoChannelState(ChannelField g_channel, ChannelField u_channel)
    : g(std::move(g_channel)), u(std::move(u_channel)) {
  require_same_grid(g.grid(), u.grid());
}

TwoChannelState::TwoChannelState(std::shared_ptr<const RadialGrid> grid)
    : g(grid), u(std::move(grid)) {}

double norm_squared(const ChannelField& field) {
  double sum = 0.0;
  for (const auto& a : field.amplitudes()) sum += std::norm(a);
  return sum * field.grid().dr();
}

double norm_squared(const TwoChannelState& state) {
  return norm_squared(state.g) + norm_squared(state.u);
}

Complex inner_product(const ChannelField& a, const ChannelField& b) {
  require_same_grid(a.grid(), b.grid());
  Complex sum{};
  const auto lhs = a.amplitudes();
  const auto rhs = b.amplitudes();
  for (std::size_t i = 0; i < lhs.size(); ++i) sum += std::conj(lhs[i]) * rhs[i];
  return sum * a.grid().dr();
}

double expectation_position(const ChannelField& field) {
  double weight = 0.0;
  double moment = 0.0;
  const auto& grid = field.grid();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double p = std::norm(field[i]);
    weight += p;
    moment += p * grid.r(i);
  }
  if (!(weight > 0.0)) throw std::invalid_argument("expectation of <R> for a zero field");
  return moment / weight;
}

ChannelField make_field(std::shared_ptr<const RadialGrid> grid, std::span<const double> values) {
  ChannelField f(std::move(grid));
  if (values.size() != f.size()) throw std::invalid_argument("sample count does not match grid");
  for (std::size_t i = 0; i < values.size(); ++i) f[i] = values[i];
  return f;
}

ChannelField gaussian_packet(std::shared_ptr<const RadialGrid> grid, double center, double width,
                             double k0) {
  ChannelField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = grid->r(i) - center;
    f[i] = std::exp(-0.5 * x * x / (width * width)) * std::polar(1.0, k0 * grid->r(i));
  }
  f *= 1.0 / std::sqrt(norm_squared(f));
  return f;
}

}  // namespace vibctl
