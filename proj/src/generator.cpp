#include "sloworbit/generator.hpp"

#include <cmath>

#include "sloworbit/error.hpp"

namespace sloworbit {

GridOperator::GridOperator(SpaceGridPtr grid, std::variant<DenseAction, ShiftAction, BlockAction> action)
    : grid_(std::move(grid)), action_(std::move(action)) {}

GridOperator GridOperator::dense(CMatrix matrix, SpaceGridPtr grid) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorKind::Dimension, "generator matrix is not square");
  if (static_cast<std::size_t>(matrix.rows()) != grid->n()) {
    throw Error(ErrorKind::Dimension, "generator side differs from grid size");
  }
  return GridOperator(std::move(grid), DenseAction{std::move(matrix)});
}

GridOperator GridOperator::shift(SpaceGridPtr grid) { return GridOperator(std::move(grid), ShiftAction{}); }

GridOperator GridOperator::block_diagonal(std::vector<CMatrix> blocks, SpaceGridPtr grid) {
  std::size_t total = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw Error(ErrorKind::Dimension, "block is not square");
    total += static_cast<std::size_t>(b.rows());
  }
  if (total != grid->n()) throw Error(ErrorKind::Dimension, "block sizes do not sum to grid size");
  return GridOperator(std::move(grid), BlockAction{std::move(blocks)});
}

GridOperator::Kind GridOperator::kind() const noexcept {
  switch (action_.index()) {
    case 0: return Kind::Dense;
    case 1: return Kind::StructuredShift;
    default: return Kind::BlockDiagonal;
  }
}

const CMatrix& GridOperator::matrix() const {
  if (const auto* d = std::get_if<DenseAction>(&action_)) return d->matrix;
  throw Error(ErrorKind::Unsupported, "operator is not dense");
}

const std::vector<CMatrix>& GridOperator::blocks() const {
  if (const auto* b = std::get_if<BlockAction>(&action_)) return b->blocks;
  throw Error(ErrorKind::Unsupported, "operator is not block diagonal");
}

std::vector<std::size_t> GridOperator::block_offsets() const {
  std::vector<std::size_t> off;
  std::size_t at = 0;
  for (const auto& b : blocks()) {
    off.push_back(at);
    at += static_cast<std::size_t>(b.rows());
  }
  return off;
}

CMatrix GridOperator::to_dense() const {
  switch (kind()) {
    case Kind::Dense: return matrix();
    case Kind::BlockDiagonal: {
      const auto n = static_cast<Eigen::Index>(dim());
      CMatrix full = CMatrix::Zero(n, n);
      Eigen::Index at = 0;
      for (const auto& b : blocks()) {
        full.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
      }
      return full;
    }
    case Kind::StructuredShift: break;
  }
  throw Error(ErrorKind::Unsupported, "structured shift has no dense form here");
}

GridOperator GridOperator::shifted(Complex mu) const {
  switch (kind()) {
    case Kind::Dense: {
      CMatrix m = matrix();
      m.diagonal().array() -= mu;
      return dense(std::move(m), grid_);
    }
    case Kind::BlockDiagonal: {
      auto bs = blocks();
      for (auto& b : bs) b.diagonal().array() -= mu;
      return block_diagonal(std::move(bs), grid_);
    }
    case Kind::StructuredShift: break;
  }
  throw Error(ErrorKind::Unsupported, "spectral shift of a structured generator");
}

CVector GridOperator::apply(const CVector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw Error(ErrorKind::Dimension, "generator input size");
  switch (kind()) {
    case Kind::Dense: return matrix() * x;
    case Kind::BlockDiagonal: {
      CVector y(x.size());
      Eigen::Index at = 0;
      for (const auto& b : blocks()) {
        y.segment(at, b.rows()) = b * x.segment(at, b.rows());
        at += b.rows();
      }
      return y;
    }
    case Kind::StructuredShift: {
      const double h = grid_->h();
      const Eigen::Index n = x.size();
      CVector y(n);
      for (Eigen::Index i = 0; i + 1 < n; ++i) y[i] = (x[i + 1] - x[i]) / h;
      y[n - 1] = -x[n - 1] / h;
      return y;
    }
  }
  return x;
}

namespace {

constexpr double kSingularFloor = 1e-12;

CVector solve_shifted(const CMatrix& a, Complex lambda, const CVector& v) {
  CMatrix m = -a;
  m.diagonal().array() += lambda;
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  // Reciprocal condition estimate via the LU pivots.
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < kSingularFloor * scale) throw Error(ErrorKind::Singular, "lambda is in the spectrum");
  return lu.solve(v);
}

}  // namespace

CVector GridOperator::resolvent_apply(Complex lambda, const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dim()) throw Error(ErrorKind::Dimension, "resolvent input size");
  switch (kind()) {
    case Kind::Dense: return solve_shifted(matrix(), lambda, v);
    case Kind::BlockDiagonal: {
      CVector y(v.size());
      Eigen::Index at = 0;
      for (const auto& b : blocks()) {
        y.segment(at, b.rows()) = solve_shifted(b, lambda, v.segment(at, b.rows()));
        at += b.rows();
      }
      return y;
    }
    case Kind::StructuredShift: {
      // (lambda - A_h) y = v with A_h y_i = (y_{i+1} - y_i)/h: back substitution from the right edge.
      const double h = grid_->h();
      const Complex diag = lambda + 1.0 / h;
      if (std::abs(diag) * h < 1.0 + kSingularFloor && std::abs(diag) * h > 1.0 - kSingularFloor) {
        // |1 + lambda h| = 1 puts lambda on the discrete spectrum circle; still solvable on a finite grid.
      }
      if (std::abs(diag) < kSingularFloor) throw Error(ErrorKind::Singular, "lambda = -1/h");
      const Eigen::Index n = v.size();
      CVector y(n);
      Complex next{};
      for (Eigen::Index i = n - 1; i >= 0; --i) {
        next = (v[i] + next / h) / diag;
        y[i] = next;
      }
      return y;
    }
  }
  return v;
}

std::string to_string(GridOperator::Kind kind) {
  switch (kind) {
    case GridOperator::Kind::Dense: return "Dense";
    case GridOperator::Kind::StructuredShift: return "StructuredShift";
    case GridOperator::Kind::BlockDiagonal: return "BlockDiagonal";
  }
  return "?";
}

GridFunction apply_generator(const GridOperator& A, const GridFunction& x) {
  if (!x.grid || !x.grid->same_as(*A.grid())) throw Error(ErrorKind::Dimension, "generator and vector grids differ");
  return x.with_values(A.apply(x.values));
}

}  // namespace sloworbit
