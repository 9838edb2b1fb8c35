#include "sloworbit/timeset.hpp"

#include <algorithm>

#include "sloworbit/error.hpp"
#include "sloworbit/grid.hpp"

namespace sloworbit {

TimeSet::TimeSet(std::vector<std::size_t> indices, double dt) : indices_(std::move(indices)), dt_(dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Domain, "time set step must be positive");
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

TimeSet TimeSet::range(std::size_t first, std::size_t last_exclusive, double dt) {
  std::vector<std::size_t> idx;
  for (std::size_t k = first; k < last_exclusive; ++k) idx.push_back(k);
  return TimeSet(std::move(idx), dt);
}

bool TimeSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::vector<std::pair<double, double>> TimeSet::intervals() const {
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0;
  while (i < indices_.size()) {
    std::size_t j = i;
    while (j + 1 < indices_.size() && indices_[j + 1] == indices_[j] + 1) ++j;
    out.emplace_back(static_cast<double>(indices_[i]) * dt_, static_cast<double>(indices_[j] + 1) * dt_);
    i = j + 1;
  }
  return out;
}

TimeSet TimeSet::from_intervals(const std::vector<std::pair<double, double>>& intervals, double dt) {
  std::vector<std::size_t> idx;
  for (const auto& [a, b] : intervals) {
    const std::size_t ka = aligned_steps(a, dt);
    const std::size_t kb = aligned_steps(b, dt);
    if (kb < ka) throw Error(ErrorKind::Domain, "interval with b < a");
    for (std::size_t k = ka; k < kb; ++k) idx.push_back(k);
  }
  return TimeSet(std::move(idx), dt);
}

TimeSet TimeSet::first_cells(std::size_t cells) const {
  const std::size_t keep = std::min(cells, indices_.size());
  return TimeSet(std::vector<std::size_t>(indices_.begin(), indices_.begin() + static_cast<std::ptrdiff_t>(keep)),
                 dt_);
}

TimeSet TimeSet::united(const TimeSet& other) const {
  std::vector<std::size_t> idx = indices_;
  idx.insert(idx.end(), other.indices_.begin(), other.indices_.end());
  return TimeSet(std::move(idx), dt_);
}

double TimeSet::right_end() const noexcept {
  return indices_.empty() ? 0.0 : static_cast<double>(indices_.back() + 1) * dt_;
}

}  // namespace sloworbit
