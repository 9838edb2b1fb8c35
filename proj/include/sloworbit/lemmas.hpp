#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sloworbit/divergence.hpp"
#include "sloworbit/grid_function.hpp"
#include "sloworbit/zoo.hpp"

namespace sloworbit {

/// Unit y with ||T_t y - e^{i beta t} y|| < delta for t in [0, t0].
struct ApproxEigenpair {
  double beta = 0.0;
  GridFunction y;
  double residual = 0.0;         ///< ||(A - i beta) y||
  double generator_norm = 0.0;   ///< ||A y||, reported next to |beta|
  double delta = 0.0;
  double t0 = 0.0;
  double cert_sup_dev = 0.0;     ///< measured sup over the time grid
  double sup_norm = 1.0;         ///< sup_{s <= t0} ||T_s||
  double residual_budget = 0.0;  ///< delta / (t0 sup_norm)
  bool certified = false;
  std::string method;
  // Window parameters (shift models).
  double window_left = 0.0;
  double window_plateau = 0.0;
  double window_ramp = 0.0;
};

struct Lemma1Options {
  double dt = 0.0;             ///< certificate time step; 0 selects the model default
  double beta = 0.0;           ///< window frequency on shift models
  double left_min = -1.0;      ///< window left edge lower bound; < 0 selects t0
  double right_max = -1.0;     ///< window right edge upper bound; < 0 selects s_max
  std::vector<double> avoid_betas;  ///< dense: skip peaks within 0.5 of these
  std::vector<double> alpha_offsets{1.0, 0.5, 0.25, 0.1, 0.05, 0.02, 0.01};
};

/// Searches for a pair; `second` reports whether the certificate and residual budget were met.
/// The returned pair is the best one found either way.
std::pair<ApproxEigenpair, bool> lemma1_search(const ModelDescriptor& model, double delta, double t0,
                                               const Lemma1Options& options = {});
/// Throws a construction-failure error (with the best residual) when no pair certifies.
ApproxEigenpair lemma1_construct(const ModelDescriptor& model, double delta, double t0,
                                 const Lemma1Options& options = {});

/// w(s) e^{i beta s}: raised-cosine ramps around a flat plateau, unit norm in `spec`.
CVector make_plateau_window(const SpaceGrid& grid, double left, double plateau, double ramp, double beta,
                            const NormSpec& spec);

struct GraphNormScale {
  int order = 0;
  std::vector<double> norms;  ///< ||x||, ||Ax||, ..., ||A^n x||
};

GraphNormScale check_smoothness_budget(const GridOperator& a, const GridFunction& y, int n);

struct Lemma2Options {
  double plateau = 0.0;    ///< shift: explicit window (both > 0) or search
  double ramp = 0.0;
  double left = 0.0;
  double t0_hint = 0.0;    ///< shift: also try to keep ||T_t y - y|| < cert_delta on [0, t0_hint]
  double cert_delta = 0.1;
  double right_max = -1.0;
  double dt = 0.0;
  double epsilon = 1e-3;   ///< precondition probe ||R(epsilon)|| >= 1/(2 epsilon)
};

struct Lemma2Result {
  GridFunction y;
  GraphNormScale budget;
  double resolvent_at_epsilon = 0.0;
  double stacked_sigma = 0.0;  ///< dense: smallest singular value of x -> (Ax, ..., A^n x)
  double cert_sup_dev = -1.0;  ///< shift with t0_hint: measured rotation deviation
  double window_left = 0.0;
  double window_plateau = 0.0;
  double window_ramp = 0.0;
};

/// Unit y with ||A^i y|| < delta for 1 <= i <= n. Throws an infeasibility error otherwise.
Lemma2Result lemma2_construct(const ModelDescriptor& model, double delta, int n, const Lemma2Options& options = {});

/// 5 / 10^(2^k - 1)
double canonical_gamma(int k);

struct ScheduleEntry {
  int k = 0;
  double gamma = 0.0;
  double h_gamma = 0.0;
  double m = 0.0;
  bool skipped = false;
};

/// m_k = k / h(gamma_k) rounded up to a multiple of dt, so m_k h(gamma_k) >= k.
std::vector<ScheduleEntry> proposition1_schedule(const DivergenceSpec& h, const std::vector<double>& gammas,
                                                 double dt = 0.0);

/// n(k) = max{n : canonical_gamma(n) >= gamma'_k}; 0 when no canonical level qualifies.
std::vector<int> reindex_schedule(const std::vector<double>& gammas_prime, int max_level = 6);

}  // namespace sloworbit
