#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sloworbit/generator.hpp"
#include "sloworbit/grid.hpp"
#include "sloworbit/kernels.hpp"
#include "sloworbit/zoo.hpp"

namespace sloworbit {

inline constexpr double kResolventSentinel = 1e12;

struct ResolventScan {
  double alpha = 0.0;
  std::vector<double> betas;
  std::vector<double> norms;
  std::vector<bool> singular;
  double peak_beta = 0.0;
  double peak_norm = 0.0;
  bool peak_singular = false;
};

std::vector<Complex> eigenvalues(const GridOperator& a);
/// max Re(lambda) over the spectrum of a dense or block generator.
double spectral_bound(const GridOperator& a);
/// Uses the analytic value for structured models.
double spectral_bound(const ModelDescriptor& model);

/// 1 / sigma_min(lambda I - A) in the grid's 2-norm. The shift generator uses a Sturm
/// bisection on the tridiagonal M*M of the bidiagonal M = (1 + lambda h) I - S.
double resolvent_norm(const GridOperator& a, Complex lambda);

ResolventScan scan_resolvent(const GridOperator& a, double alpha, std::pair<double, double> beta_range,
                             int n_beta, Exec exec = Exec::Parallel);

/// Golden-section maximization of the resolvent norm over beta in [lo, hi].
std::pair<double, double> refine_resolvent_peak(const GridOperator& a, double alpha, double lo, double hi);

std::pair<double, double> default_beta_range(const ModelDescriptor& model);

/// Least-squares slope of y against t restricted to t_lo <= t <= t_hi.
double fit_slope(const std::vector<std::pair<double, double>>& points, double t_lo, double t_hi);

struct Omega0Fit {
  double omega0 = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t points = 0;
  std::vector<std::pair<double, double>> profile;  ///< (t, log ||T_t||)
  std::string bound_side;                          ///< "exact" (SVD) or "lower" (probe family)
};

/// Slope of log ||T_t|| over the second half of the grid.
Omega0Fit estimate_omega0(const ModelDescriptor& model, const TimeGrid& tg);

struct Omega1Fit {
  double omega1 = 0.0;
  int order = 1;
  std::size_t samples = 0;
  std::vector<double> slopes;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::string smoothing;
};

/// Max fitted slope of log ||T_t x|| over smoothed random vectors x = R(s + 1)^k v.
/// Shift models use compactly supported smooth bumps in the upper half of the window instead.
Omega1Fit estimate_omega1(const ModelDescriptor& model, int k, std::size_t n_samples, const TimeGrid& tg,
                          std::uint64_t seed);

struct SpectralOptions {
  double t_max = 0.0;  ///< 0 selects a model default
  double dt = 0.0;
  std::vector<double> alpha_offsets{1.0, 0.5, 0.25, 0.1};
  int n_beta = 0;
  int omega1_order = 1;
  std::size_t omega1_samples = 8;
  std::uint64_t seed = 1;
};

struct SpectralReport {
  std::string model;
  double s = 0.0;
  std::string s_source;
  std::vector<ResolventScan> s0_indicator;  ///< decreasing alpha
  double s0_estimate = 0.0;                 ///< min over scans of alpha - 1/peak
  bool s0_available = false;
  Omega0Fit omega0;
  Omega1Fit omega1;
  double growth_constant = 1.0;  ///< max_t ||T_t|| e^{-omega0 t} over the profile
};

TimeGrid default_time_grid(const ModelDescriptor& model);

SpectralReport spectral_report(const ModelDescriptor& model, const SpectralOptions& options = {});

struct DiagramEntry {
  std::string inequality;
  bool pass = false;
  double slack = 0.0;
  std::string note;
};

std::vector<DiagramEntry> diagram_check(const SpectralReport& report, double tol);

}  // namespace sloworbit
