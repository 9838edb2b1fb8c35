#pragma once

#include <iosfwd>
#include <string>

#include "sloworbit/grid.hpp"
#include "sloworbit/linalg.hpp"
#include "sloworbit/norm.hpp"

namespace sloworbit {

/// Primal vector sampled on a space grid.
struct GridFunction {
  CVector values;
  SpaceGridPtr grid;
  NormSpec norm_spec;

  GridFunction() = default;
  GridFunction(CVector v, SpaceGridPtr g, NormSpec spec);

  static GridFunction zero(SpaceGridPtr g, NormSpec spec);
  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
  GridFunction with_values(CVector v) const { return GridFunction(std::move(v), grid, norm_spec); }
};

/// Functional on grid functions, applied through the quadrature-weighted bilinear pairing.
struct DualGridFunction {
  CVector values;
  SpaceGridPtr grid;
  NormSpec dual_of;

  DualGridFunction() = default;
  DualGridFunction(CVector v, SpaceGridPtr g, NormSpec spec);

  DualGridFunction with_values(CVector v) const { return DualGridFunction(std::move(v), grid, dual_of); }
};

/// sum_i xp_i * x_i * w_i. No conjugation.
Complex pairing(const DualGridFunction& xp, const GridFunction& x);
/// Raw-array version used by kernels; weights must match the vector length.
Complex pairing_raw(const CVector& xp, const CVector& x, const std::vector<double>& weights);

double norm(const GridFunction& x);
double norm(const GridFunction& x, const NormSpec& spec);
double dual_norm(const DualGridFunction& xp);

/// Functional y' with <y', y> = 1 and dual norm 1/norm(y) (so both equal 1 for unit y).
DualGridFunction dual_vector(const GridFunction& y);
DualGridFunction dual_vector(const GridFunction& y, const NormSpec& spec);

/// Writes "s,re,im" rows with 17 significant digits.
void write_csv(std::ostream& out, const CVector& values, const SpaceGrid& grid);
/// Reads the format written by write_csv; node positions must match the grid.
CVector read_csv(std::istream& in, const SpaceGrid& grid);

}  // namespace sloworbit
