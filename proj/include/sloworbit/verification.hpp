#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sloworbit/divergence.hpp"
#include "sloworbit/grid.hpp"
#include "sloworbit/theorems.hpp"
#include "sloworbit/zoo.hpp"

namespace sloworbit {

enum class BackwardMode { Global, UnitWindow };

std::string_view to_string(BackwardMode m);

struct BackwardReport {
  BackwardMode mode = BackwardMode::Global;
  double c = 0.0;
  std::string c_side;  ///< "exact" (matrix oracle) or "lower" (probe sup)
  double worst_slack = 0.0;
  double worst_t = 0.0;
  double worst_t0 = 0.0;
  std::size_t checks = 0;
  bool pass = false;  ///< worst_slack >= -1e-9
};

/// Checks ||T_t x|| >= ||T_t0 x|| / C for all t <= t0 (Global) or t in [t0 - 1, t0] (UnitWindow).
BackwardReport check_backward_estimate(const ModelDescriptor& model, const TimeGrid& tg, BackwardMode mode,
                                       int probes, std::uint64_t seed = 1);

struct Eq2Result {
  double lhs = 0.0;
  double rhs = 0.0;
  double sup_norm = 0.0;  ///< sup_{s <= t} ||T_s||
  bool pass = false;
};

/// lhs = ||T_t x - e^{i beta t} x||, rhs = t * sup_{s<=t} ||T_s|| * ||(A - i beta) x||.
Eq2Result check_eq2_bound(const ModelDescriptor& model, const CVector& x, double beta, double t, double dt);

struct LevelAudit {
  int k = 0;
  double measure = 0.0;
  double m = 0.0;
  double gamma = 0.0;
  double min_pairing = 0.0;
  double argmin_t = 0.0;
  bool pass = false;
};

struct TailAudit {
  int i = 0;
  double bound = 0.0;   ///< 9/10^(2^i-1) - 3 sum_{j>=i} 10^-(2^j-1)
  double target = 0.0;  ///< 5/10^(2^i-1)
  bool pass = false;
};

struct WitnessAudit {
  std::vector<LevelAudit> levels;
  std::vector<TailAudit> tails;
  bool pass = false;
  double first_failure_t = -1.0;
  std::string message;
};

/// Recomputes every pairing on every U_k with its own propagator, sharing nothing with the construction.
WitnessAudit audit_witness(const SlowOrbitWitness& w, const ModelDescriptor& model, const TimeGrid& tg);
/// audit_witness, throwing a Verification error at the first failure.
WitnessAudit verify_witness(const SlowOrbitWitness& w, const ModelDescriptor& model, const TimeGrid& tg);

struct DivergenceLedger {
  std::vector<std::pair<double, double>> partials;  ///< (t, integral_0^t h(|<x', T_s x>|) ds)
  double lower_bound = 0.0;                         ///< sum_k mu(U_k) h(gamma_k)
  double final_partial = 0.0;
  bool pass = false;
};

DivergenceLedger divergence_ledger(const SlowOrbitWitness& w, const ModelDescriptor& model,
                                   const DivergenceSpec& h, const TimeGrid& tg);

struct WeakL1Report {
  double support_end = 0.0;  ///< x supported in [0, support_end]
  double sweep_time = 0.0;
  std::vector<double> tails;  ///< per sample: max over T' >= sweep of integral_{T'}^{T} |<x', T_t x>| dt
  double max_tail = 0.0;
  bool pass = false;
  double probe_time = 0.0;
  double non_ues_ratio = 0.0;  ///< max over spike probes of ||T_t x|| / ||x|| at probe_time
  bool non_ues = false;        ///< non_ues_ratio >= 0.9
};

WeakL1Report weak_l1_check(const ModelDescriptor& model, int n_samples, double T, double tol, std::uint64_t seed = 1);

}  // namespace sloworbit
