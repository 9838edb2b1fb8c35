#pragma once

#include <cstddef>
#include <vector>

#include "sloworbit/generator.hpp"
#include "sloworbit/norm.hpp"
#include "sloworbit/semigroup.hpp"

namespace sloworbit {

/// Serial kernels are the reference implementation; Parallel kernels use OpenMP.
/// Both write results by index, so their output does not depend on the thread count.
enum class Exec { Serial, Parallel };

/// Weak orbit <xp, T_{k dt} x> for k = 0..steps.
/// Serial: repeated application of T_dt. Parallel: fixed-size chunks, each started from a
/// direct evaluation of T_t and then stepped.
std::vector<Complex> weak_orbit(const SemigroupEvaluator& ev, const CVector& xp, const CVector& x,
                                std::size_t steps, double dt, Exec exec = Exec::Parallel);

/// Weak orbit at selected time indices, each evaluated directly.
std::vector<Complex> weak_orbit_at(const SemigroupEvaluator& ev, const CVector& xp, const CVector& x,
                                   const std::vector<std::size_t>& indices, double dt,
                                   Exec exec = Exec::Parallel);

/// ||T_{k dt} x|| for k = 0..steps.
std::vector<double> orbit_norms(const SemigroupEvaluator& ev, const CVector& x, const NormSpec& spec,
                                std::size_t steps, double dt, Exec exec = Exec::Parallel);

/// ||T_{k dt} x - e^{i beta k dt} x|| for k = 0..steps.
std::vector<double> rotation_deviation(const SemigroupEvaluator& ev, const CVector& x, double beta,
                                       const NormSpec& spec, std::size_t steps, double dt,
                                       Exec exec = Exec::Parallel);

/// Operator 2-norms ||T_{k dt}|| for k = 0..steps (matrix generators).
std::vector<double> operator_norms(const SemigroupEvaluator& ev, std::size_t steps, double dt,
                                   Exec exec = Exec::Parallel);

/// Resolvent norms ||(alpha + i beta - A)^{-1}|| over beta samples; singular points become `sentinel`.
std::vector<double> resolvent_norms(const GridOperator& a, double alpha, const std::vector<double>& betas,
                                    std::vector<bool>& singular, double sentinel, Exec exec = Exec::Parallel);

int worker_count();

}  // namespace sloworbit
