#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace sloworbit {

/// Finite union of grid cells [k dt, (k+1) dt). Measure is exact cell counting.
class TimeSet {
 public:
  TimeSet() = default;
  /// Indices need not be sorted; duplicates are dropped.
  TimeSet(std::vector<std::size_t> indices, double dt);
  static TimeSet range(std::size_t first, std::size_t last_exclusive, double dt);

  double dt() const noexcept { return dt_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t cells() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  double measure() const noexcept { return static_cast<double>(indices_.size()) * dt_; }
  bool contains(std::size_t index) const;

  /// Maximal runs as [a, b) time intervals, sorted and disjoint.
  std::vector<std::pair<double, double>> intervals() const;
  /// Rebuilds the cell set from [a, b) intervals aligned to dt.
  static TimeSet from_intervals(const std::vector<std::pair<double, double>>& intervals, double dt);

  /// The first `cells` cells in time order.
  TimeSet first_cells(std::size_t cells) const;
  TimeSet united(const TimeSet& other) const;
  /// Smallest time b with the set inside [0, b].
  double right_end() const noexcept;

 private:
  std::vector<std::size_t> indices_;
  double dt_ = 1.0;
};

}  // namespace sloworbit
