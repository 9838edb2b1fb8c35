#pragma once

#include <complex>
#include <random>

#include "sloworbit/grid.hpp"
#include "sloworbit/linalg.hpp"

namespace testing {

inline sloworbit::CVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  sloworbit::CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = {d(rng), d(rng)};
  return v;
}

inline sloworbit::CMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  sloworbit::CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {d(rng), d(rng)};
  return a;
}

// Unit-weight grid of n cells (h = 1).
inline sloworbit::SpaceGridPtr unit_grid(std::size_t n) {
  return sloworbit::make_space_grid(static_cast<double>(n), n);
}

}  // namespace testing
