#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "sloworbit/generator.hpp"
#include "sloworbit/grid_function.hpp"

namespace sloworbit {

/// Evaluates T_t = exp(tA). Thread safe: the propagator cache is guarded by a mutex.
class SemigroupEvaluator {
 public:
  enum class Method { MatrixExponential, ExactShift, BlockExponential };

  explicit SemigroupEvaluator(GridOperator generator);

  SemigroupEvaluator(const SemigroupEvaluator&) = delete;
  SemigroupEvaluator& operator=(const SemigroupEvaluator&) = delete;

  Method method() const noexcept { return method_; }
  const GridOperator& generator() const noexcept { return generator_; }
  const SpaceGridPtr& grid() const noexcept { return generator_.grid(); }
  /// True when the dense generator passed the commutator normality test.
  bool uses_eigendecomposition() const noexcept { return normal_; }

  CVector apply(double t, const CVector& x) const;
  GridFunction apply(double t, const GridFunction& x) const;

  /// Per-block propagators exp(t A_k); a single block for dense generators.
  std::shared_ptr<const std::vector<CMatrix>> propagator_blocks(double t) const;
  /// Full propagator matrix (dense and block generators only).
  CMatrix propagator(double t) const;

  /// Operator 2-norm of T_t. Exact (SVD) for matrix generators; for the shift it is
  /// 1 while t < s_max and 0 afterwards for unweighted grid norms.
  double operator_norm(double t) const;

  /// Number of grid cells T_t moves values by (ExactShift only).
  std::size_t shift_cells(double t) const;

  std::size_t cache_size() const;
  void clear_cache() const;

 private:
  std::vector<CMatrix> compute_blocks(double t) const;

  GridOperator generator_;
  Method method_;
  bool normal_ = false;
  // Eigendecomposition for normal dense generators.
  CMatrix eigvecs_;
  CMatrix eigvecs_inv_;
  CVector eigvals_;

  mutable std::mutex mutex_;
  mutable std::map<long long, std::shared_ptr<const std::vector<CMatrix>>> cache_;
};

std::string to_string(SemigroupEvaluator::Method method);

/// exp(A) by scaling and squaring with a Pade approximant.
CMatrix matrix_exponential(const CMatrix& a);

/// Left shift by k cells with zero fill.
CVector shift_left(const CVector& x, std::size_t k);

}  // namespace sloworbit
