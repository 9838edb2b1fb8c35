#include "sloworbit/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/SVD>

#include "sloworbit/error.hpp"
#include "sloworbit/kernels.hpp"
#include "sloworbit/spectral.hpp"

namespace sloworbit {

namespace {

double pow10_neg(double e) { return std::pow(10.0, -e); }
// 1 / 10^(2^(k-1) - 1)
double level_coefficient(int k) { return pow10_neg(std::pow(2.0, k - 1) - 1.0); }
// 9 / 10^(2^k - 1)
double center_bound(int k) { return 9.0 * pow10_neg(std::pow(2.0, k) - 1.0); }

std::size_t cells_for(double m, double dt) { return static_cast<std::size_t>(std::ceil(m / dt - 1e-9)); }

double align_up(double t, double dt) { return std::ceil(t / dt - 1e-9) * dt; }

struct Source {
  CVector y;
  PairRecord record;
};

// (level, t0, left_min, right_max, betas already used) -> y_{n_level}
using SourceFn = std::function<Source(int, double, double, double, const std::vector<double>&)>;

void check_s0_evidence(const ModelDescriptor& model) {
  if (!model.hilbert_norm()) {
    throw Error(ErrorKind::Precondition, "resolvent blowup evidence needs a Hilbert norm model");
  }
  const auto range = default_beta_range(model);
  const int n_beta = model.is_shift() ? 21 : 41;
  double prev = 0.0;
  double last_alpha = 1.0;
  for (double alpha : {1.0, 0.5, 0.25, 0.1}) {
    const auto scan = scan_resolvent(model.generator(), alpha, range, n_beta);
    if (scan.peak_norm < prev * (1.0 - 1e-9)) {
      throw Error(ErrorKind::Precondition, "resolvent peaks do not grow as alpha decreases");
    }
    prev = scan.peak_norm;
    last_alpha = alpha;
  }
  if (prev * last_alpha < 0.5) {
    std::ostringstream msg;
    msg << "no resolvent blowup toward the imaginary axis (alpha * peak = " << prev * last_alpha
        << " < 0.5): s0 >= 0 is not supported";
    throw Error(ErrorKind::Precondition, msg.str());
  }
}

void validate_schedule(const std::vector<double>& m_seq, int K, ConstructionLedger& ledger) {
  if (K < 1) throw Error(ErrorKind::Domain, "K must be >= 1");
  if (K > kMaxLevels) {
    throw Error(ErrorKind::Precision, "K > 4: gamma_5 = 5e-31 is below double precision for O(1) pairings");
  }
  if (K == kMaxLevels) ledger.warnings.push_back("K = 4: gamma_4 = 5e-15 sits at the double precision floor");
  if (static_cast<int>(m_seq.size()) < K) throw Error(ErrorKind::Domain, "m sequence shorter than K");
  for (std::size_t i = 0; i < m_seq.size(); ++i) {
    if (!(m_seq[i] > 0.0)) throw Error(ErrorKind::Domain, "m values must be positive");
    if (i > 0 && !(m_seq[i] > m_seq[i - 1])) throw Error(ErrorKind::Domain, "m sequence must increase");
  }
}

class Construction {
 public:
  Construction(const ModelDescriptor& model, const TimeGrid& tg, Exec exec)
      : model_(model), ev_(*model.evaluator), dt_(tg.dt()), steps_(tg.size() - 1), exec_(exec) {}

  std::vector<double> abs_orbit(const CVector& xp, const CVector& x) const {
    const auto z = weak_orbit(ev_, xp, x, steps_, dt_, exec_);
    std::vector<double> out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = std::abs(z[k]);
    return out;
  }

  double min_on(const std::vector<double>& v, const TimeSet& u) const {
    double m = std::numeric_limits<double>::infinity();
    for (auto k : u.indices()) m = std::min(m, at(v, k));
    return m;
  }

  double max_on(const std::vector<double>& v, const TimeSet& u) const {
    double m = 0.0;
    for (auto k : u.indices()) m = std::max(m, at(v, k));
    return m;
  }

  double dt() const { return dt_; }
  std::size_t steps() const { return steps_; }

 private:
  double at(const std::vector<double>& v, std::size_t k) const {
    if (k >= v.size()) throw Error(ErrorKind::Horizon, "time set beyond the time grid");
    return v[k];
  }

  const ModelDescriptor& model_;
  const SemigroupEvaluator& ev_;
  double dt_;
  std::size_t steps_;
  Exec exec_;
};

void add_condition(ConstructionLedger& ledger, std::string name, int level, int i, double measured, double bound,
                   bool upper, bool strict) {
  ConditionRecord r;
  r.name = std::move(name);
  r.level = level;
  r.i = i;
  r.measured = measured;
  r.bound = bound;
  r.slack = upper ? bound - measured : measured - bound;
  r.holds = strict ? r.slack > 0.0 : r.slack >= 0.0;
  ledger.conditions.push_back(r);
}

PairRecord pair_record(const ModelDescriptor& model, const ApproxEigenpair& p, int level, double dt) {
  PairRecord r;
  r.level = level;
  r.source = "lemma1";
  r.beta = p.beta;
  r.t0 = p.t0;
  r.cert_sup_dev = p.cert_sup_dev;
  r.residual = p.residual;
  r.residual_budget = p.residual_budget;
  r.certified = p.certified;
  r.window_left = p.window_left;
  r.window_plateau = p.window_plateau;
  r.window_ramp = p.window_ramp;
  const auto norms = orbit_norms(*model.evaluator, p.y.values, model.norm_spec, aligned_steps(p.t0, dt), dt);
  r.norm_min = *std::min_element(norms.begin(), norms.end());
  r.norm_max = *std::max_element(norms.begin(), norms.end());
  return r;
}

SlowOrbitWitness run_construction(const ModelDescriptor& model, const std::vector<double>& m_seq, int K,
                                  const TimeGrid& tg, const TheoremOptions& opt, const SourceFn& source,
                                  std::string theorem) {
  SlowOrbitWitness w;
  w.theorem = std::move(theorem);
  w.model = model.params;
  w.dt = tg.dt();
  w.t_max = tg.t_max();
  w.seed = opt.seed;
  auto& ledger = w.ledger;
  validate_schedule(m_seq, K, ledger);

  const Construction c(model, tg, opt.exec);
  const double dt = tg.dt();
  const SpaceGrid& g = *model.grid();
  const auto n = static_cast<Eigen::Index>(g.n());
  auto dual_of = [&](const CVector& y) { return dual_vector(GridFunction(y, model.grid(), model.norm_spec)).values; };

  // Level 1: x_1 = y_{n_1}, U_1 = [0, n_1).
  const double n1 = align_up(m_seq[0], dt);
  if (n1 > tg.t_max()) throw Error(ErrorKind::Horizon, "n_1 exceeds the time grid; increase t_max");
  Source s1 = source(1, n1, n1, -1.0, {});
  if (s1.record.cert_sup_dev >= opt.delta) {
    std::ostringstream msg;
    msg << "level 1 approximate eigenvector misses delta = " << opt.delta << " on [0, " << n1
        << "] (deviation " << s1.record.cert_sup_dev << ")";
    throw Error(ErrorKind::ConstructionFailure, msg.str());
  }
  std::vector<CVector> ys{s1.y};
  std::vector<CVector> yps{dual_of(s1.y)};
  const CVector yp_limit = yps.front();  // weak-limit candidate y'
  std::vector<CVector> xs{CVector::Zero(n), s1.y};
  std::vector<CVector> xps{CVector::Zero(n), yps.front()};
  std::vector<double> betas{s1.record.beta};
  double cursor = s1.record.window_left + s1.record.window_plateau + 2.0 * s1.record.window_ramp;
  ledger.pairs.push_back(s1.record);
  ledger.eq4_bracket = s1.record.norm_min > 0.9 && s1.record.norm_max < 1.1;

  WitnessLevel l1;
  l1.k = 1;
  l1.n_k = n1;
  l1.gamma = canonical_gamma(1);
  l1.m = m_seq[0];
  l1.U = TimeSet::range(0, cells_for(n1, dt), dt);
  l1.signs = {1, 1};
  l1.coefficient = 1.0;
  l1.beta = s1.record.beta;
  w.levels.push_back(l1);

  {
    const auto a1 = c.abs_orbit(xps[1], xs[1]);
    ledger.eq5_min = c.min_on(a1, l1.U);
    add_condition(ledger, "1", 1, 1, l1.U.measure(), m_seq[0], false, false);
    add_condition(ledger, "5", 1, 1, ledger.eq5_min, center_bound(1), false, false);
    ledger.level_bounds.push_back({1, 1, ledger.eq5_min, center_bound(1), ledger.eq5_min - center_bound(1)});
  }

  for (int l = 1; l < K; ++l) {
    const int L = l + 1;
    TimeSet used({}, dt);
    for (const auto& lv : w.levels) used = used.united(lv.U);

    // Short-circuit: the superlevel set of the current pairing already covers the remaining budget.
    const auto a_cur = c.abs_orbit(xps[l], xs[l]);
    {
      std::vector<std::size_t> sup;
      for (std::size_t k = 0; k <= c.steps(); ++k) {
        if (!used.contains(k) && a_cur[k] >= 1.0) sup.push_back(k);
      }
      std::size_t need = 0;
      for (int j = L; j <= K; ++j) need += cells_for(m_seq[j - 1], dt);
      if (sup.size() >= need) {
        ledger.short_circuit = true;
        std::ostringstream note;
        note << "superlevel set {|<x'_" << l << ", T_t x_" << l << ">| >= 1} has measure "
             << static_cast<double>(sup.size()) * dt << " >= remaining budget " << static_cast<double>(need) * dt;
        ledger.short_circuit_note = note.str();
        std::size_t at = 0;
        for (int j = L; j <= K; ++j) {
          const std::size_t cells = cells_for(m_seq[j - 1], dt);
          WitnessLevel lv;
          lv.k = j;
          lv.gamma = canonical_gamma(j);
          lv.m = m_seq[j - 1];
          lv.U = TimeSet(std::vector<std::size_t>(sup.begin() + static_cast<std::ptrdiff_t>(at),
                                                  sup.begin() + static_cast<std::ptrdiff_t>(at + cells)),
                         dt);
          lv.n_k = lv.U.right_end();
          lv.coefficient = 0.0;
          w.levels.push_back(lv);
          at += cells;
        }
        break;
      }
    }

    // U~_{L}: earliest unused grid cells with |<y', T_t x_l>| < 1.
    const auto b = c.abs_orbit(yp_limit, xs[l]);
    const std::size_t want = cells_for(4.0 * m_seq[L - 1], dt);
    std::vector<std::size_t> ut;
    for (std::size_t k = 0; k <= c.steps() && ut.size() < want; ++k) {
      if (!used.contains(k) && b[k] < 1.0) ut.push_back(k);
    }
    if (ut.size() < want) {
      throw Error(ErrorKind::Horizon, "cannot find U~ of measure 4 m_" + std::to_string(L) +
                                          " inside the time grid; increase t_max or s_max");
    }
    const TimeSet u_tilde(std::move(ut), dt);
    ledger.u_tilde.push_back(u_tilde);

    // n_L: smallest horizon >= n_l with U~ inside [0, n_L] and condition 3 below one.
    double nL = std::max(w.levels.back().n_k, u_tilde.right_end());
    Source src;
    const double share = model.is_shift() ? cursor + (g.s_max() - cursor) / static_cast<double>(K - l) : -1.0;
    for (;;) {
      if (nL > tg.t_max() + 1e-9) {
        throw Error(ErrorKind::Horizon, "no n_" + std::to_string(L) + " within the time grid satisfies condition 3");
      }
      src = source(L, nL, std::max(nL, cursor), share, betas);
      if (l < 2) break;
      const CVector yp_new = dual_of(src.y);
      const double cond3 = c.max_on(c.abs_orbit(yp_new, xs[l - 1]), w.levels[l - 1].U);
      if (cond3 < 1.0) break;
      nL = align_up(nL * 1.1 + dt, dt);
    }

    const double coef = level_coefficient(L);
    const CVector y_new = src.y;
    const CVector yp_new = dual_of(y_new);
    const CVector cvec = coef * y_new;
    const CVector cpvec = coef * yp_new;
    auto cf = choose_four(xs[l], xps[l], cvec, cpvec, u_tilde, center_bound(L), *model.evaluator, opt.exec);
    const std::size_t cells = cells_for(m_seq[L - 1], dt);
    if (cf.U.cells() < cells) {
      std::ostringstream msg;
      msg << "choose_four kept measure " << cf.U.measure() << " < m_" << L << " = " << m_seq[L - 1];
      throw Error(ErrorKind::ConstructionFailure, msg.str());
    }
    WitnessLevel lv;
    lv.k = L;
    lv.n_k = nL;
    lv.gamma = canonical_gamma(L);
    lv.m = m_seq[L - 1];
    lv.U = cf.U.first_cells(cells);
    lv.signs = cf.signs;
    lv.coefficient = coef;
    lv.beta = src.record.beta;
    w.levels.push_back(lv);

    ys.push_back(y_new);
    yps.push_back(yp_new);
    xs.push_back(xs[l] + static_cast<double>(cf.signs.primal) * cvec);
    xps.push_back(xps[l] + static_cast<double>(cf.signs.dual) * cpvec);
    betas.push_back(src.record.beta);
    ledger.pairs.push_back(src.record);
    if (model.is_shift()) {
      cursor = std::max(cursor, src.record.window_left + src.record.window_plateau + 2.0 * src.record.window_ramp);
    }

    // Ledger for conditions 1_L .. 5_L and the cross terms S_l.
    const auto a_new = c.abs_orbit(xps[L], xs[L]);
    const auto s_first = c.abs_orbit(xps[l], y_new);
    const auto s_second = c.abs_orbit(yp_new, xs[L]);
    std::vector<double> s_sum(s_first.size());
    for (std::size_t k = 0; k < s_sum.size(); ++k) s_sum[k] = s_first[k] + s_second[k];
    for (int i = 1; i <= l; ++i) {
      const double ms = c.max_on(s_sum, w.levels[i - 1].U);
      ledger.cross_terms.push_back({l, i, ms, ms < 3.0});
    }
    for (int i = 1; i <= L; ++i) {
      const auto& Ui = w.levels[i - 1].U;
      add_condition(ledger, "1", L, i, std::min(Ui.measure() - w.levels[i - 1].m, w.levels[i - 1].n_k - Ui.right_end()),
                    0.0, false, false);
    }
    for (int i = 2; i <= L; ++i) {
      const double m2 = c.max_on(c.abs_orbit(yp_limit, xs[i - 1]), w.levels[i - 1].U);
      add_condition(ledger, "2", L, i, m2, 1.0, true, true);
    }
    for (int i = 2; i <= L - 1; ++i) {
      const double m3 = c.max_on(c.abs_orbit(yps[i], xs[i - 1]), w.levels[i - 1].U);
      add_condition(ledger, "3", L, i, m3, 1.0, true, true);
    }
    for (int i = 1; i <= L - 1; ++i) {
      const double m4 = c.min_on(a_new, w.levels[i - 1].U);
      add_condition(ledger, "4", L, i, m4, level_bound(i, L), false, false);
      ledger.level_bounds.push_back({L, i, m4, level_bound(i, L), m4 - level_bound(i, L)});
    }
    const double m5 = c.min_on(a_new, lv.U);
    add_condition(ledger, "5", L, L, m5, center_bound(L), false, false);
    ledger.level_bounds.push_back({L, L, m5, center_bound(L), m5 - center_bound(L)});
  }

  w.x = GridFunction(xs.back(), model.grid(), model.norm_spec);
  w.xp = DualGridFunction(xps.back(), model.grid(), model.norm_spec);

  // Self-check of the witness invariant before returning.
  const auto a = c.abs_orbit(w.xp.values, w.x.values);
  for (const auto& lv : w.levels) {
    const double mn = c.min_on(a, lv.U);
    if (!(mn > lv.gamma) || lv.U.measure() < lv.m - 1e-9) {
      std::ostringstream msg;
      msg << "level " << lv.k << " fails its threshold: min pairing " << mn << " vs gamma " << lv.gamma;
      throw Error(ErrorKind::ConstructionFailure, msg.str());
    }
  }
  const auto& wts = g.quad_weights();
  for (const auto& ypj : yps) ledger.weak_limit_decay.push_back(std::abs(pairing_raw(ypj, xs[1], wts)));
  for (int i = 1; i <= K; ++i) ledger.tail_margins.emplace_back(i, tail_margin(i));
  return w;
}

}  // namespace

double level_bound(int i, int l) {
  double sum = 0.0;
  for (int j = i; j <= l - 1; ++j) sum += pow10_neg(std::pow(2.0, j) - 1.0);
  return center_bound(i) - 3.0 * sum;
}

double tail_margin(int i) {
  double sum = 0.0;
  for (int j = i; j <= i + 10; ++j) sum += pow10_neg(std::pow(2.0, j) - 1.0);
  return center_bound(i) - 3.0 * sum - 5.0 * pow10_neg(std::pow(2.0, i) - 1.0);
}

SlowOrbitWitness theorem1_construct(const ModelDescriptor& model, const std::vector<double>& m_seq, int K,
                                    const TimeGrid& tg, const TheoremOptions& options) {
  if (options.check_s0) check_s0_evidence(model);
  const double dt = tg.dt();
  SourceFn source = [&](int level, double t0, double left_min, double right_max, const std::vector<double>& used) {
    Lemma1Options lo;
    lo.dt = dt;
    lo.left_min = left_min;
    lo.right_max = right_max;
    lo.avoid_betas = used;
    // Distinct frequencies keep the cross pairings of successive windows small.
    lo.beta = model.is_shift() ? 0.5 * (level - 1) : 0.0;
    auto [pair, ok] = lemma1_search(model, options.delta, t0, lo);
    (void)ok;
    return Source{pair.y.values, pair_record(model, pair, level, dt)};
  };
  return run_construction(model, m_seq, K, tg, options, source, "theorem1");
}

SlowOrbitWitness theorem2_construct(const ModelDescriptor& model, const std::vector<double>& m_seq, int K,
                                    const TimeGrid& tg, int n_smooth, double delta, const TheoremOptions& options) {
  if (n_smooth < 0) throw Error(ErrorKind::Domain, "n_smooth must be non-negative");
  if (n_smooth == 0) {
    auto w = theorem1_construct(model, m_seq, K, tg, options);
    w.theorem = "theorem2";
    return w;
  }
  // Reached spectral bound: an eigenvalue on the imaginary axis, or approximate spectrum at 0.
  std::vector<double> reached;
  if (model.is_shift()) {
    const double eps = std::max(1e-3, 4.0 / model.grid()->s_max());
    if (!model.analytic_s || std::abs(*model.analytic_s) > 1e-6 || !model.hilbert_norm() ||
        resolvent_norm(model.generator(), Complex(eps, 0.0)) < 0.5 / eps) {
      throw Error(ErrorKind::Precondition, "spectral bound 0 is not reached on this model");
    }
    reached.push_back(0.0);
  } else {
    const auto eig = eigenvalues(model.generator());
    double s = -std::numeric_limits<double>::infinity();
    for (const auto& l : eig) s = std::max(s, l.real());
    for (const auto& l : eig) {
      if (std::abs(l.real()) <= 1e-6 && s <= 1e-6) reached.push_back(l.imag());
    }
    if (reached.empty()) throw Error(ErrorKind::Precondition, "no eigenvalue with |Re lambda| <= 1e-6");
    std::sort(reached.begin(), reached.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  }
  const double dt = tg.dt();
  std::map<int, CVector> chosen;
  SourceFn source = [&](int level, double t0, double left_min, double right_max, const std::vector<double>&) {
    Source out;
    out.record.level = level;
    out.record.source = "lemma2";
    out.record.t0 = t0;
    if (model.is_shift()) {
      Lemma2Options lo;
      lo.left = left_min;
      lo.t0_hint = t0;
      lo.cert_delta = options.delta;
      lo.right_max = right_max;
      lo.dt = dt;
      auto r = lemma2_construct(model, delta, n_smooth, lo);
      out.y = r.y.values;
      out.record.window_left = r.window_left;
      out.record.window_plateau = r.window_plateau;
      out.record.window_ramp = r.window_ramp;
    } else {
      // Rescale by the reached eigenvalue i beta*; lemma2 then runs on A - i beta*.
      const double beta = reached[static_cast<std::size_t>(level - 1) % reached.size()];
      CMatrix shifted = model.generator().to_dense();
      shifted.diagonal().array() -= Complex(0.0, beta);
      auto sm = build_dense_model(shifted, model.name + "-rescaled", model.norm_spec);
      auto r = lemma2_construct(sm, delta, n_smooth);
      out.y = r.y.values;
      out.record.beta = beta;
    }
    const auto dev = rotation_deviation(*model.evaluator, out.y, out.record.beta, model.norm_spec,
                                        aligned_steps(t0, dt), dt);
    out.record.cert_sup_dev = *std::max_element(dev.begin(), dev.end());
    out.record.certified = out.record.cert_sup_dev < options.delta;
    const auto norms = orbit_norms(*model.evaluator, out.y, model.norm_spec, aligned_steps(t0, dt), dt);
    out.record.norm_min = *std::min_element(norms.begin(), norms.end());
    out.record.norm_max = *std::max_element(norms.begin(), norms.end());
    const CVector r = model.generator().apply(out.y) - Complex(0.0, out.record.beta) * out.y;
    out.record.residual = norm(r, *model.grid(), model.norm_spec);
    chosen[level] = out.y;
    return out;
  };
  auto w = run_construction(model, m_seq, K, tg, options, source, "theorem2");

  // Smooth-series ledger: c_j ||A^k y_j|| over the vectors kept at each level.
  auto& ledger = w.ledger;
  ledger.smooth_order = n_smooth;
  std::vector<std::pair<double, GraphNormScale>> terms;
  for (const auto& lv : w.levels) {
    auto it = chosen.find(lv.k);
    if (lv.coefficient == 0.0 || it == chosen.end()) continue;
    auto scale = check_smoothness_budget(model.generator(), GridFunction(it->second, model.grid(), model.norm_spec),
                                         n_smooth);
    ledger.smooth_budgets.push_back(scale);
    terms.emplace_back(lv.coefficient, std::move(scale));
  }
  for (int k = 1; k <= n_smooth; ++k) {
    std::vector<double> partial, tail(terms.size(), 0.0);
    double acc = 0.0;
    for (const auto& [coef, scale] : terms) {
      acc += coef * scale.norms[static_cast<std::size_t>(k)];
      partial.push_back(acc);
    }
    double rest = 0.0;
    for (std::size_t j = terms.size(); j-- > 0;) {
      rest += terms[j].first * terms[j].second.norms[static_cast<std::size_t>(k)];
      tail[j] = rest;
    }
    ledger.smooth_partial_sums.push_back(std::move(partial));
    ledger.smooth_tails.push_back(std::move(tail));
  }
  return w;
}

std::pair<GridFunction, Theorem0Evidence> theorem0_construct(const ModelDescriptor& model, const DivergenceSpec& h,
                                                             double horizon, const TimeGrid& tg) {
  if (!(horizon >= 1.0)) throw Error(ErrorKind::Domain, "horizon must be at least 1");
  if (horizon > tg.t_max() + 1e-9) throw Error(ErrorKind::Horizon, "horizon beyond the time grid");
  const double dt = tg.dt();
  const auto N = static_cast<int>(std::floor(horizon + 1e-9));
  const std::size_t steps = aligned_steps(static_cast<double>(N), dt);
  const std::size_t unit_steps = aligned_steps(1.0, dt);
  const auto& ev = *model.evaluator;
  const SpaceGrid& g = *model.grid();
  Theorem0Evidence ev0;

  // Operator norm profile: exact for matrices, probe lower bound for shifts.
  std::vector<double> opnorm;
  CVector far_probe;
  if (model.is_shift()) {
    const auto probes = probe_family(model, static_cast<double>(N), 1);
    far_probe = probes.front();
    const double np = norm(far_probe, g, model.norm_spec);
    opnorm = orbit_norms(ev, far_probe, model.norm_spec, steps, dt);
    for (auto& v : opnorm) v /= np;
    ev0.norm_side = "lower";
  } else {
    opnorm = operator_norms(ev, steps, dt);
    ev0.norm_side = "exact";
  }
  ev0.min_operator_norm = *std::min_element(opnorm.begin(), opnorm.end());
  if (ev0.min_operator_norm < 1.0 - 1e-9) {
    std::ostringstream msg;
    msg << "probes cannot certify ||T_t|| >= 1 on [0, " << N << "] (min " << ev0.min_operator_norm << ")";
    throw Error(ErrorKind::Precondition, msg.str());
  }
  ev0.c_global = *std::max_element(opnorm.begin(), opnorm.end());
  ev0.c_window = *std::max_element(opnorm.begin(), opnorm.begin() + static_cast<std::ptrdiff_t>(unit_steps) + 1);

  // alpha_n: smallest alpha <= alpha_{n-1} with h(alpha) >= n^{-1/2}, so n h(alpha_n) >= sqrt(n).
  double prev = 1.0;
  for (int k = 1; k <= N; ++k) {
    const double target = 1.0 / std::sqrt(static_cast<double>(k));
    double lo = 0.0, hi = prev;
    if (h(hi) < target) {
      ev0.alphas.push_back(hi);
      continue;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) >= target ? hi : lo) = mid;
    }
    prev = hi;
    ev0.alphas.push_back(hi);
  }

  // Gliding hump: add a probe whenever the orbit falls below alpha_n C at t = n.
  CVector x = CVector::Zero(static_cast<Eigen::Index>(g.n()));
  for (int k = 1; k <= N; ++k) {
    const double t = static_cast<double>(k);
    const double target = ev0.alphas[static_cast<std::size_t>(k - 1)] * ev0.c_global;
    const double have = norm(ev.apply(t, x), g, model.norm_spec);
    if (have >= target) continue;
    CVector p;
    if (model.is_shift()) {
      p = far_probe;
    } else {
      Eigen::JacobiSVD<CMatrix> svd(ev.propagator(t), Eigen::ComputeFullV);
      p = svd.matrixV().col(0);
      p /= norm(p, g, model.norm_spec);
    }
    const double tp = norm(ev.apply(t, p), g, model.norm_spec);
    x += ((target + have) / tp) * p;
    ev0.hump_times.push_back(k);
  }

  const auto on = orbit_norms(ev, x, model.norm_spec, steps, dt);
  double acc = 0.0;
  ev0.partials.emplace_back(0.0, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    acc += 0.5 * dt * (h(on[k - 1]) + h(on[k]));
    ev0.partials.emplace_back(static_cast<double>(k) * dt, acc);
  }
  double window_sum = 0.0;
  for (int k = 1; k <= N; ++k) {
    const double v = on[aligned_steps(static_cast<double>(k), dt)];
    ev0.norms_at_n.push_back(v);
    ev0.lb_global.push_back(static_cast<double>(k) * h(v / ev0.c_global));
    window_sum += h(v / ev0.c_window);
    ev0.lb_window.push_back(window_sum);
  }
  ev0.lower_bound_global = *std::max_element(ev0.lb_global.begin(), ev0.lb_global.end());
  ev0.lower_bound_window = window_sum;
  return {GridFunction(x, model.grid(), model.norm_spec), ev0};
}

}  // namespace sloworbit
