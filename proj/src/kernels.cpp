#include "sloworbit/kernels.hpp"

#include <cmath>
#include <exception>

#include <omp.h>

#include <Eigen/SVD>

#include "sloworbit/error.hpp"
#include "sloworbit/spectral.hpp"

namespace sloworbit {

namespace {

constexpr std::size_t kChunk = 32;

// Runs body(k) for k in [0, count) and rethrows the first exception after the loop.
template <class Body>
void for_each_index(std::size_t count, Exec exec, Body&& body) {
  if (exec == Exec::Serial) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(sloworbit_kernel_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// Visits T_{k dt} x for k = 0..steps. Matrix semigroups step with T_dt; chunks restart
// from a direct evaluation in parallel mode.
template <class Visit>
void visit_orbit(const SemigroupEvaluator& ev, const CVector& x, std::size_t steps, double dt, Exec exec,
                 Visit&& visit) {
  if (ev.method() == SemigroupEvaluator::Method::ExactShift) {
    const std::size_t per_step = ev.shift_cells(dt);
    for_each_index(steps + 1, exec, [&](std::size_t k) { visit(k, shift_left(x, k * per_step)); });
    return;
  }
  const CMatrix step = ev.propagator(dt);
  if (exec == Exec::Serial) {
    CVector z = x;
    for (std::size_t k = 0; k <= steps; ++k) {
      visit(k, z);
      if (k < steps) z = step * z;
    }
    return;
  }
  const std::size_t chunks = (steps + kChunk) / kChunk;
  for_each_index(chunks, exec, [&](std::size_t c) {
    const std::size_t first = c * kChunk;
    const std::size_t last = std::min(steps, first + kChunk - 1);
    CVector z = ev.apply(static_cast<double>(first) * dt, x);
    for (std::size_t k = first; k <= last; ++k) {
      visit(k, z);
      if (k < last) z = step * z;
    }
  });
}

}  // namespace

int worker_count() { return omp_get_max_threads(); }

std::vector<Complex> weak_orbit(const SemigroupEvaluator& ev, const CVector& xp, const CVector& x,
                                std::size_t steps, double dt, Exec exec) {
  if (xp.size() != x.size()) throw Error(ErrorKind::Dimension, "weak orbit operand sizes differ");
  const auto& w = ev.grid()->quad_weights();
  std::vector<Complex> out(steps + 1);
  if (ev.method() == SemigroupEvaluator::Method::ExactShift) {
    // Direct index pairing avoids materializing shifted copies.
    const std::size_t per_step = ev.shift_cells(dt);
    const auto n = static_cast<std::size_t>(x.size());
    for_each_index(steps + 1, exec, [&](std::size_t k) {
      const std::size_t off = k * per_step;
      Complex acc{};
      for (std::size_t i = 0; i + off < n; ++i) acc += xp[i] * x[i + off] * w[i];
      out[k] = acc;
    });
    return out;
  }
  visit_orbit(ev, x, steps, dt, exec, [&](std::size_t k, const CVector& z) { out[k] = pairing_raw(xp, z, w); });
  return out;
}

std::vector<Complex> weak_orbit_at(const SemigroupEvaluator& ev, const CVector& xp, const CVector& x,
                                   const std::vector<std::size_t>& indices, double dt, Exec exec) {
  const auto& w = ev.grid()->quad_weights();
  std::vector<Complex> out(indices.size());
  for_each_index(indices.size(), exec, [&](std::size_t j) {
    out[j] = pairing_raw(xp, ev.apply(static_cast<double>(indices[j]) * dt, x), w);
  });
  return out;
}

std::vector<double> orbit_norms(const SemigroupEvaluator& ev, const CVector& x, const NormSpec& spec,
                                std::size_t steps, double dt, Exec exec) {
  std::vector<double> out(steps + 1);
  const SpaceGrid& g = *ev.grid();
  visit_orbit(ev, x, steps, dt, exec, [&](std::size_t k, const CVector& z) { out[k] = norm(z, g, spec); });
  return out;
}

std::vector<double> rotation_deviation(const SemigroupEvaluator& ev, const CVector& x, double beta,
                                       const NormSpec& spec, std::size_t steps, double dt, Exec exec) {
  std::vector<double> out(steps + 1);
  const SpaceGrid& g = *ev.grid();
  visit_orbit(ev, x, steps, dt, exec, [&](std::size_t k, const CVector& z) {
    const Complex phase = std::exp(kI * (beta * static_cast<double>(k) * dt));
    out[k] = norm(CVector(z - phase * x), g, spec);
  });
  return out;
}

std::vector<double> operator_norms(const SemigroupEvaluator& ev, std::size_t steps, double dt, Exec exec) {
  std::vector<double> out(steps + 1);
  if (ev.method() == SemigroupEvaluator::Method::ExactShift) {
    for (std::size_t k = 0; k <= steps; ++k) out[k] = ev.operator_norm(static_cast<double>(k) * dt);
    return out;
  }
  // Step block propagators so no exponential is recomputed per sample.
  const auto step = ev.propagator_blocks(dt);
  const std::size_t chunks = (steps + kChunk) / kChunk;
  auto run_chunk = [&](std::size_t c) {
    const std::size_t first = c * kChunk;
    const std::size_t last = std::min(steps, first + kChunk - 1);
    std::vector<CMatrix> cur = *ev.propagator_blocks(static_cast<double>(first) * dt);
    for (std::size_t k = first; k <= last; ++k) {
      double best = 0.0;
      for (const auto& b : cur) best = std::max(best, Eigen::JacobiSVD<CMatrix>(b).singularValues()(0));
      out[k] = best;
      if (k < last) {
        for (std::size_t j = 0; j < cur.size(); ++j) cur[j] = (*step)[j] * cur[j];
      }
    }
  };
  if (exec == Exec::Serial) {
    std::vector<CMatrix> cur;
    for (const auto& b : *step) cur.push_back(CMatrix::Identity(b.rows(), b.cols()));
    for (std::size_t k = 0; k <= steps; ++k) {
      double best = 0.0;
      for (const auto& b : cur) best = std::max(best, Eigen::JacobiSVD<CMatrix>(b).singularValues()(0));
      out[k] = best;
      for (std::size_t j = 0; j < cur.size(); ++j) cur[j] = (*step)[j] * cur[j];
    }
    return out;
  }
  for_each_index(chunks, exec, run_chunk);
  return out;
}

std::vector<double> resolvent_norms(const GridOperator& a, double alpha, const std::vector<double>& betas,
                                    std::vector<bool>& singular, double sentinel, Exec exec) {
  std::vector<double> out(betas.size());
  std::vector<char> flags(betas.size(), 0);
  for_each_index(betas.size(), exec, [&](std::size_t j) {
    try {
      out[j] = resolvent_norm(a, Complex(alpha, betas[j]));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Singular) throw;
      out[j] = sentinel;
      flags[j] = 1;
    }
  });
  singular.assign(flags.begin(), flags.end());
  return out;
}

}  // namespace sloworbit
