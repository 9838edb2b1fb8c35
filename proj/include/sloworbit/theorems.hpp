#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sloworbit/choose_four.hpp"
#include "sloworbit/divergence.hpp"
#include "sloworbit/grid.hpp"
#include "sloworbit/lemmas.hpp"
#include "sloworbit/timeset.hpp"
#include "sloworbit/zoo.hpp"

namespace sloworbit {

inline constexpr int kMaxLevels = 4;

struct WitnessLevel {
  int k = 0;
  double n_k = 0.0;          ///< horizon n_k of the level's approximate eigenvector
  double gamma = 0.0;        ///< 5 / 10^(2^k - 1)
  double m = 0.0;
  TimeSet U;
  SignPair signs;
  double coefficient = 1.0;  ///< 1 / 10^(2^(k-1) - 1)
  double beta = 0.0;
};

struct ConditionRecord {
  std::string name;  ///< "1" .. "5"
  int level = 0;     ///< l in condition l_l
  int i = 0;         ///< the U_i the condition talks about
  bool holds = false;
  double slack = 0.0;
  double measured = 0.0;
  double bound = 0.0;
};

struct CrossTermRecord {
  int l = 0;
  int i = 0;
  double max_s = 0.0;  ///< max over U_i of S_l(t)
  bool below_three = false;
};

struct LevelBoundRecord {
  int after_level = 0;
  int i = 0;
  double measured_min = 0.0;  ///< min over U_i of |<x'_l, T_t x_l>|
  double bound = 0.0;
  double slack = 0.0;
};

struct PairRecord {
  int level = 0;
  std::string source;  ///< lemma1 | lemma2 | short-circuit
  double beta = 0.0;
  double t0 = 0.0;
  double cert_sup_dev = 0.0;
  double residual = 0.0;
  double residual_budget = 0.0;
  bool certified = false;
  double norm_min = 0.0;  ///< min over [0, t0] of ||T_t y||
  double norm_max = 0.0;
  double window_left = 0.0;
  double window_plateau = 0.0;
  double window_ramp = 0.0;
};

struct ConstructionLedger {
  std::vector<ConditionRecord> conditions;
  std::vector<CrossTermRecord> cross_terms;
  std::vector<LevelBoundRecord> level_bounds;
  std::vector<TimeSet> u_tilde;  ///< U~_2, U~_3, ...
  std::vector<PairRecord> pairs;
  std::vector<double> weak_limit_decay;  ///< |<y'_{n_j}, x_1>| for j = 1..K
  double eq5_min = 0.0;
  bool eq4_bracket = false;
  bool short_circuit = false;
  std::string short_circuit_note;
  std::vector<std::string> warnings;
  std::vector<std::pair<int, double>> tail_margins;  ///< (i, bound_i - 5/10^(2^i - 1))
  // Smooth-series ledger (theorem 2).
  int smooth_order = 0;
  std::vector<GraphNormScale> smooth_budgets;
  std::vector<std::vector<double>> smooth_partial_sums;  ///< [k-1][J] = sum_{j <= J} c_j ||A^k y_j||, k = 1..order
  std::vector<std::vector<double>> smooth_tails;         ///< [k-1][J] = sum_{j >= J} c_j ||A^k y_j||
};

struct SlowOrbitWitness {
  std::string theorem = "theorem1";
  ModelParams model;
  double dt = 0.0;
  double t_max = 0.0;
  std::uint64_t seed = 1;
  GridFunction x;
  DualGridFunction xp;
  std::vector<WitnessLevel> levels;
  ConstructionLedger ledger;
};

struct TheoremOptions {
  double delta = 0.1;     ///< lemma1 accuracy for the first level
  bool check_s0 = true;   ///< resolvent blowup precondition
  std::uint64_t seed = 1;
  Exec exec = Exec::Parallel;
};

/// 9/10^(2^i - 1) - 3 sum_{j=i}^{l-1} 1/10^(2^j - 1)
double level_bound(int i, int l);
/// 9/10^(2^i - 1) - 3 sum_{j >= i} 1/10^(2^j - 1) - 5/10^(2^i - 1)
double tail_margin(int i);

SlowOrbitWitness theorem1_construct(const ModelDescriptor& model, const std::vector<double>& m_seq, int K,
                                    const TimeGrid& tg, const TheoremOptions& options = {});

SlowOrbitWitness theorem2_construct(const ModelDescriptor& model, const std::vector<double>& m_seq, int K,
                                    const TimeGrid& tg, int n_smooth, double delta,
                                    const TheoremOptions& options = {});

struct Theorem0Evidence {
  std::vector<double> alphas;        ///< alpha_n, n = 1..N
  std::vector<double> norms_at_n;    ///< ||T_n x||
  double c_global = 1.0;             ///< sup_{t <= horizon} ||T_t||
  double c_window = 1.0;             ///< sup_{t <= 1} ||T_t||
  std::string norm_side;             ///< exact | lower
  std::vector<std::pair<double, double>> partials;  ///< (T, int_0^T h(||T_t x||) dt)
  std::vector<double> lb_global;     ///< n h(||T_n x|| / C), estimate (*)
  std::vector<double> lb_window;     ///< sum_{m <= n} h(||T_m x|| / C_w), estimate (**)
  double lower_bound_global = 0.0;
  double lower_bound_window = 0.0;
  std::vector<int> hump_times;
  double min_operator_norm = 0.0;    ///< precondition evidence
};

std::pair<GridFunction, Theorem0Evidence> theorem0_construct(const ModelDescriptor& model, const DivergenceSpec& h,
                                                             double horizon, const TimeGrid& tg);

}  // namespace sloworbit
