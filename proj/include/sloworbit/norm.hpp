#pragma once

#include <string>
#include <vector>

#include "sloworbit/grid.hpp"
#include "sloworbit/linalg.hpp"

namespace sloworbit {

/// Tag for the weight of a weighted L1 norm.
enum class WeightTag {
  One,  ///< w(s) = 1
  Exp,  ///< w(s) = e^s
};

/// Norm on grid functions. All variants integrate against the grid's quadrature weights.
struct NormSpec {
  enum class Kind { Lp, WeightedL1, Intersection, Euclidean };

  Kind kind = Kind::Euclidean;
  double p = 2.0;
  WeightTag weight = WeightTag::One;
  std::vector<NormSpec> members;

  static NormSpec euclidean();
  static NormSpec lp(double p);
  static NormSpec weighted_l1(WeightTag weight);
  /// The intersection norm is the sum of the member norms.
  static NormSpec intersection(std::vector<NormSpec> members);

  /// Validates p >= 1 and non-empty intersections; throws a domain error otherwise.
  void validate() const;
  std::string describe() const;

  friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

double weight_value(WeightTag tag, double s);

double norm(const CVector& values, const SpaceGrid& grid, const NormSpec& spec);

/// Norm of a functional acting through the bilinear pairing sum_i f_i x_i w_i.
/// Exact for all single norms and for intersections with at most one member whose
/// dual is not of sup type; otherwise an upper bound (see dual_norm_is_exact).
double dual_norm(const CVector& values, const SpaceGrid& grid, const NormSpec& spec);
bool dual_norm_is_exact(const NormSpec& spec);

/// A functional f with <f, y> = norm(y) and dual_norm(f) = 1. Requires norm(y) > 0.
CVector norming_functional(const CVector& y, const SpaceGrid& grid, const NormSpec& spec);

}  // namespace sloworbit
