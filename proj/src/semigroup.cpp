#include "sloworbit/semigroup.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "sloworbit/error.hpp"

namespace sloworbit {

namespace {

constexpr double kNormalityTol = 1e-10;
constexpr double kTimeQuantum = 1e-9;
constexpr std::size_t kCacheLimit = 8192;

bool is_normal(const CMatrix& a) {
  const CMatrix ah = a.adjoint();
  const double comm = (a * ah - ah * a).norm();
  return comm <= kNormalityTol * std::max(1.0, a.norm() * a.norm());
}

}  // namespace

CMatrix matrix_exponential(const CMatrix& a) { return a.exp(); }

CVector shift_left(const CVector& x, std::size_t k) {
  const auto n = static_cast<std::size_t>(x.size());
  CVector y = CVector::Zero(x.size());
  if (k < n) y.head(static_cast<Eigen::Index>(n - k)) = x.tail(static_cast<Eigen::Index>(n - k));
  return y;
}

SemigroupEvaluator::SemigroupEvaluator(GridOperator generator) : generator_(std::move(generator)) {
  switch (generator_.kind()) {
    case GridOperator::Kind::Dense: {
      method_ = Method::MatrixExponential;
      const CMatrix& a = generator_.matrix();
      if (is_normal(a)) {
        Eigen::ComplexEigenSolver<CMatrix> es(a);
        if (es.info() == Eigen::Success) {
          eigvecs_ = es.eigenvectors();
          eigvals_ = es.eigenvalues();
          Eigen::FullPivLU<CMatrix> lu(eigvecs_);
          if (lu.isInvertible()) {
            eigvecs_inv_ = lu.inverse();
            normal_ = true;
          }
        }
      }
      break;
    }
    case GridOperator::Kind::BlockDiagonal: method_ = Method::BlockExponential; break;
    case GridOperator::Kind::StructuredShift: method_ = Method::ExactShift; break;
  }
}

std::size_t SemigroupEvaluator::shift_cells(double t) const {
  if (method_ != Method::ExactShift) throw Error(ErrorKind::Unsupported, "shift_cells on a matrix semigroup");
  return aligned_steps(t, grid()->h());
}

std::vector<CMatrix> SemigroupEvaluator::compute_blocks(double t) const {
  std::vector<CMatrix> out;
  if (method_ == Method::MatrixExponential) {
    if (normal_) {
      const CVector e = (t * eigvals_).array().exp();
      out.push_back(eigvecs_ * e.asDiagonal() * eigvecs_inv_);
    } else {
      out.push_back(matrix_exponential(t * generator_.matrix()));
    }
  } else {
    for (const auto& b : generator_.blocks()) out.push_back(matrix_exponential(t * b));
  }
  return out;
}

std::shared_ptr<const std::vector<CMatrix>> SemigroupEvaluator::propagator_blocks(double t) const {
  if (t < 0.0) throw Error(ErrorKind::Domain, "negative time");
  if (method_ == Method::ExactShift) throw Error(ErrorKind::Unsupported, "shift semigroup has no stored propagator");
  const auto key = std::llround(t / kTimeQuantum);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto blocks = std::make_shared<const std::vector<CMatrix>>(compute_blocks(t));
  std::lock_guard lock(mutex_);
  if (cache_.size() >= kCacheLimit) cache_.clear();
  auto [it, inserted] = cache_.emplace(key, blocks);
  return it->second;
}

CMatrix SemigroupEvaluator::propagator(double t) const {
  auto blocks = propagator_blocks(t);
  if (method_ == Method::MatrixExponential) return blocks->front();
  const auto n = static_cast<Eigen::Index>(generator_.dim());
  CMatrix full = CMatrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : *blocks) {
    full.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return full;
}

CVector SemigroupEvaluator::apply(double t, const CVector& x) const {
  if (t < 0.0) throw Error(ErrorKind::Domain, "negative time");
  if (static_cast<std::size_t>(x.size()) != generator_.dim()) throw Error(ErrorKind::Dimension, "semigroup input size");
  if (method_ == Method::ExactShift) return shift_left(x, shift_cells(t));
  if (t == 0.0) return x;
  auto blocks = propagator_blocks(t);
  if (method_ == Method::MatrixExponential) return blocks->front() * x;
  CVector y(x.size());
  Eigen::Index at = 0;
  for (const auto& b : *blocks) {
    y.segment(at, b.rows()) = b * x.segment(at, b.rows());
    at += b.rows();
  }
  return y;
}

GridFunction SemigroupEvaluator::apply(double t, const GridFunction& x) const {
  if (!x.grid || !x.grid->same_as(*grid())) throw Error(ErrorKind::Dimension, "semigroup and vector grids differ");
  return x.with_values(apply(t, x.values));
}

double SemigroupEvaluator::operator_norm(double t) const {
  if (method_ == Method::ExactShift) return shift_cells(t) < generator_.dim() ? 1.0 : 0.0;
  double best = 0.0;
  for (const auto& b : *propagator_blocks(t)) {
    Eigen::JacobiSVD<CMatrix> svd(b);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

std::size_t SemigroupEvaluator::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

void SemigroupEvaluator::clear_cache() const {
  std::lock_guard lock(mutex_);
  cache_.clear();
}

std::string to_string(SemigroupEvaluator::Method method) {
  switch (method) {
    case SemigroupEvaluator::Method::MatrixExponential: return "MatrixExponential";
    case SemigroupEvaluator::Method::ExactShift: return "ExactShift";
    case SemigroupEvaluator::Method::BlockExponential: return "BlockExponential";
  }
  return "?";
}

}  // namespace sloworbit
