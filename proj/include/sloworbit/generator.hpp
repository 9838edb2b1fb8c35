#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sloworbit/grid.hpp"
#include "sloworbit/grid_function.hpp"
#include "sloworbit/linalg.hpp"

namespace sloworbit {

struct DenseAction {
  CMatrix matrix;
};

/// Left translation (Tx)(s) = x(s + t) on the grid, absorbing at s_max.
/// Its discrete generator is the forward difference (x[i+1] - x[i]) / h with x[n] = 0.
struct ShiftAction {
  std::string description = "left shift, zero fill past s_max";
};

struct BlockAction {
  std::vector<CMatrix> blocks;
};

/// Discretized generator A.
class GridOperator {
 public:
  enum class Kind { Dense, StructuredShift, BlockDiagonal };

  static GridOperator dense(CMatrix matrix, SpaceGridPtr grid);
  static GridOperator shift(SpaceGridPtr grid);
  static GridOperator block_diagonal(std::vector<CMatrix> blocks, SpaceGridPtr grid);

  Kind kind() const noexcept;
  const SpaceGridPtr& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return grid_->n(); }

  const CMatrix& matrix() const;              ///< Dense only
  const std::vector<CMatrix>& blocks() const; ///< BlockDiagonal only
  std::vector<std::size_t> block_offsets() const;

  /// Full matrix for Dense and BlockDiagonal operators.
  CMatrix to_dense() const;
  /// Same operator minus mu * I (Dense and BlockDiagonal only).
  GridOperator shifted(Complex mu) const;

  CVector apply(const CVector& x) const;
  /// (lambda - A)^{-1} v; throws a singularity error when lambda is (numerically) in the spectrum.
  CVector resolvent_apply(Complex lambda, const CVector& v) const;

 private:
  GridOperator(SpaceGridPtr grid, std::variant<DenseAction, ShiftAction, BlockAction> action);

  SpaceGridPtr grid_;
  std::variant<DenseAction, ShiftAction, BlockAction> action_;
};

std::string to_string(GridOperator::Kind kind);

GridFunction apply_generator(const GridOperator& A, const GridFunction& x);

}  // namespace sloworbit
