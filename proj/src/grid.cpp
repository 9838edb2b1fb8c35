#include "sloworbit/grid.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sloworbit/error.hpp"

namespace sloworbit {

TimeGrid::TimeGrid(double t_max, double dt) : t_max_(t_max), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Domain, "time step must be positive");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw Error(ErrorKind::Domain, "t_max must be non-negative");
  const double steps = t_max / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw Error(ErrorKind::Alignment, "t_max is not a multiple of dt");
  }
  const auto count = static_cast<std::size_t>(rounded) + 1;
  points_.resize(count);
  for (std::size_t k = 0; k < count; ++k) points_[k] = static_cast<double>(k) * dt;
}

std::size_t TimeGrid::index_of(double t) const {
  const std::size_t k = aligned_steps(t, dt_);
  if (k >= points_.size()) throw Error(ErrorKind::Domain, "time beyond grid horizon");
  return k;
}

std::size_t TimeGrid::ceil_index(double t) const {
  if (t <= 0.0) return 0;
  const double steps = t / dt_;
  auto k = static_cast<std::size_t>(std::ceil(steps - 1e-9));
  return k;
}

SpaceGrid::SpaceGrid(double s_max, std::size_t n) : s_max_(s_max), n_(n) {
  if (n == 0) throw Error(ErrorKind::Domain, "space grid needs at least one node");
  if (!(s_max > 0.0) || !std::isfinite(s_max)) throw Error(ErrorKind::Domain, "s_max must be positive");
  h_ = s_max / static_cast<double>(n);
  weights_.assign(n, h_);
}

bool SpaceGrid::same_as(const SpaceGrid& other) const noexcept {
  return this == &other || (n_ == other.n_ && s_max_ == other.s_max_);
}

SpaceGridPtr make_space_grid(double s_max, std::size_t n) {
  return std::make_shared<const SpaceGrid>(s_max, n);
}

std::size_t aligned_steps(double t, double step, double tol) {
  if (t < 0.0) throw Error(ErrorKind::Domain, "negative time");
  const double ratio = t / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > tol * std::max(1.0, ratio)) {
    throw Error(ErrorKind::Alignment,
                "t = " + std::to_string(t) + " is not aligned to step " + std::to_string(step));
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace sloworbit
