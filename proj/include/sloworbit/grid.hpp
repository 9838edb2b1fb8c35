#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace sloworbit {

/// Uniform time samples 0, dt, ..., t_max.
class TimeGrid {
 public:
  TimeGrid(double t_max, double dt);

  double t_max() const noexcept { return t_max_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t k) const { return points_[k]; }
  const std::vector<double>& points() const noexcept { return points_; }

  /// Index of the grid point equal to t (within 1e-9 of a step); throws on misalignment.
  std::size_t index_of(double t) const;
  /// Smallest index whose time is >= t.
  std::size_t ceil_index(double t) const;

 private:
  double t_max_;
  double dt_;
  std::vector<double> points_;
};

/// Discretization of [0, s_max) into n cells; node i sits at s = i*h.
class SpaceGrid {
 public:
  SpaceGrid(double s_max, std::size_t n);

  double s_max() const noexcept { return s_max_; }
  std::size_t n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double node(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }
  const std::vector<double>& quad_weights() const noexcept { return weights_; }

  bool same_as(const SpaceGrid& other) const noexcept;

 private:
  double s_max_;
  std::size_t n_;
  double h_;
  std::vector<double> weights_;
};

using SpaceGridPtr = std::shared_ptr<const SpaceGrid>;

SpaceGridPtr make_space_grid(double s_max, std::size_t n);

/// Returns k when t/step is within tol of the integer k, otherwise throws an alignment error.
std::size_t aligned_steps(double t, double step, double tol = 1e-9);

}  // namespace sloworbit
