#include "sloworbit/verification.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "sloworbit/error.hpp"
#include "sloworbit/kernels.hpp"

namespace sloworbit {

std::string_view to_string(BackwardMode m) { return m == BackwardMode::Global ? "Global" : "UnitWindow"; }

namespace {

CVector random_gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(d(rng), d(rng));
  return v;
}

std::vector<CVector> backward_probes(const ModelDescriptor& model, int probes, std::uint64_t seed) {
  if (model.is_shift()) return probe_family(model, 0.0, static_cast<std::size_t>(probes));
  std::mt19937_64 rng(seed);
  std::vector<CVector> out;
  const auto n = static_cast<Eigen::Index>(model.grid()->n());
  for (int j = 0; j < probes; ++j) {
    CVector v = random_gaussian(n, rng);
    out.push_back(v / norm(v, *model.grid(), model.norm_spec));
  }
  return out;
}

// Sum of 10^-(2^j - 1) over j >= i, until the terms underflow.
double tail_sum(int i) {
  double s = 0.0;
  for (int j = i; j < 60; ++j) {
    const double term = std::pow(10.0, -(std::ldexp(1.0, j) - 1.0));
    if (term == 0.0) break;
    s += term;
  }
  return s;
}

}  // namespace

BackwardReport check_backward_estimate(const ModelDescriptor& model, const TimeGrid& tg, BackwardMode mode,
                                       int probes, std::uint64_t seed) {
  if (probes < 1) throw Error(ErrorKind::Domain, "probes must be >= 1");
  const auto& ev = *model.evaluator;
  const double dt = tg.dt();
  const std::size_t steps = tg.size() - 1;
  const std::size_t window = std::min(steps, aligned_steps(1.0, dt));
  const auto xs = backward_probes(model, probes, seed);

  std::vector<std::vector<double>> orbits;
  for (const auto& x : xs) orbits.push_back(orbit_norms(ev, x, model.norm_spec, steps, dt));

  BackwardReport r;
  r.mode = mode;
  const std::size_t c_last = mode == BackwardMode::Global ? steps : window;
  if (model.is_shift()) {
    r.c_side = "lower";
    for (const auto& o : orbits) r.c = std::max(r.c, *std::max_element(o.begin(), o.begin() + c_last + 1));
  } else {
    r.c_side = "exact";
    const auto on = operator_norms(ev, c_last, dt);
    r.c = *std::max_element(on.begin(), on.end());
  }
  r.worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& o : orbits) {
    if (mode == BackwardMode::Global) {
      // Running minimum over t <= t0.
      double lo = o[0];
      std::size_t lo_at = 0;
      for (std::size_t k = 0; k <= steps; ++k) {
        if (o[k] < lo) {
          lo = o[k];
          lo_at = k;
        }
        const double slack = lo - o[k] / r.c;
        ++r.checks;
        if (slack < r.worst_slack) {
          r.worst_slack = slack;
          r.worst_t = tg[lo_at];
          r.worst_t0 = tg[k];
        }
      }
    } else {
      // Sliding minimum over [t0 - 1, t0].
      std::deque<std::size_t> q;
      for (std::size_t k = 0; k <= steps; ++k) {
        while (!q.empty() && o[q.back()] >= o[k]) q.pop_back();
        q.push_back(k);
        while (q.front() + window < k) q.pop_front();
        const double slack = o[q.front()] - o[k] / r.c;
        ++r.checks;
        if (slack < r.worst_slack) {
          r.worst_slack = slack;
          r.worst_t = tg[q.front()];
          r.worst_t0 = tg[k];
        }
      }
    }
  }
  r.pass = r.worst_slack >= -1e-9;
  return r;
}

Eq2Result check_eq2_bound(const ModelDescriptor& model, const CVector& x, double beta, double t, double dt) {
  if (!(t >= 0.0) || !(dt > 0.0)) throw Error(ErrorKind::Domain, "t must be >= 0 and dt > 0");
  const auto& ev = *model.evaluator;
  const SpaceGrid& g = *model.grid();
  Eq2Result r;
  const CVector dev = ev.apply(t, x) - std::exp(Complex(0.0, beta * t)) * x;
  r.lhs = norm(dev, g, model.norm_spec);
  const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t / dt - 1e-9)));
  const double step = t > 0.0 ? t / static_cast<double>(steps) : dt;
  r.sup_norm = 1.0;  // T_0 = I
  if (model.is_shift()) {
    const auto probes = probe_family(model, 0.0, 8);
    for (const auto& p : probes) {
      const auto o = orbit_norms(ev, p, model.norm_spec, steps, step);
      r.sup_norm = std::max(r.sup_norm, *std::max_element(o.begin(), o.end()));
    }
  } else {
    const auto on = operator_norms(ev, steps, step);
    r.sup_norm = std::max(r.sup_norm, *std::max_element(on.begin(), on.end()));
  }
  const CVector residual = model.generator().apply(x) - Complex(0.0, beta) * x;
  r.rhs = t * r.sup_norm * norm(residual, g, model.norm_spec);
  r.pass = r.lhs <= r.rhs + 1e-6;
  return r;
}

WitnessAudit audit_witness(const SlowOrbitWitness& w, const ModelDescriptor& model, const TimeGrid& tg) {
  const SpaceGrid& g = *model.grid();
  if (std::abs(w.dt - tg.dt()) > 1e-12) throw Error(ErrorKind::Alignment, "witness dt differs from the time grid");
  if (static_cast<std::size_t>(w.x.values.size()) != g.n() || static_cast<std::size_t>(w.xp.values.size()) != g.n()) {
    throw Error(ErrorKind::Dimension, "witness vectors do not match the model grid");
  }
  const double dt = tg.dt();
  const std::size_t steps = tg.size() - 1;
  const auto& wts = g.quad_weights();
  const CVector& x = w.x.values;
  const CVector& xp = w.xp.values;
  const auto n = x.size();

  // Independent propagation: index arithmetic for shifts, a fresh exp(dt A) stepped for matrices.
  std::size_t last = 0;
  for (const auto& lv : w.levels) {
    for (auto k : lv.U.indices()) last = std::max(last, k);
  }
  WitnessAudit audit;
  if (last > steps) {
    audit.message = "time set extends beyond the time grid";
    audit.first_failure_t = static_cast<double>(last) * dt;
    return audit;
  }
  std::vector<double> pairing(last + 1, 0.0);
  if (model.is_shift()) {
    const double ratio = dt / g.h();
    const auto per_step = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(per_step)) > 1e-9) {
      throw Error(ErrorKind::Alignment, "dt is not a multiple of the space step");
    }
    for (std::size_t k = 0; k <= last; ++k) {
      const std::size_t c = k * per_step;
      Complex acc{};
      for (Eigen::Index i = 0; i + static_cast<Eigen::Index>(c) < n; ++i) {
        acc += xp[i] * x[i + static_cast<Eigen::Index>(c)] * wts[static_cast<std::size_t>(i)];
      }
      pairing[k] = std::abs(acc);
    }
  } else {
    const CMatrix step = (dt * model.generator().to_dense()).exp();
    CVector v = x;
    for (std::size_t k = 0; k <= last; ++k) {
      if (k > 0) v = step * v;
      Complex acc{};
      for (Eigen::Index i = 0; i < n; ++i) acc += xp[i] * v[i] * wts[static_cast<std::size_t>(i)];
      pairing[k] = std::abs(acc);
    }
  }

  audit.pass = true;
  auto fail = [&](double t, const std::string& msg) {
    if (audit.pass) {
      audit.pass = false;
      audit.first_failure_t = t;
      audit.message = msg;
    }
  };
  for (const auto& lv : w.levels) {
    LevelAudit la;
    la.k = lv.k;
    la.m = lv.m;
    la.gamma = lv.gamma;
    la.measure = static_cast<double>(lv.U.cells()) * dt;
    la.min_pairing = std::numeric_limits<double>::infinity();
    for (auto k : lv.U.indices()) {
      if (pairing[k] < la.min_pairing) {
        la.min_pairing = pairing[k];
        la.argmin_t = static_cast<double>(k) * dt;
      }
    }
    const bool measure_ok = la.measure >= lv.m - 1e-9;
    la.pass = measure_ok && la.min_pairing > lv.gamma;
    if (!measure_ok) {
      std::ostringstream msg;
      msg << "mu(U_" << lv.k << ") = " << la.measure << " < m_" << lv.k << " = " << lv.m;
      fail(lv.U.empty() ? 0.0 : static_cast<double>(lv.U.indices().front()) * dt, msg.str());
    }
    if (!(la.min_pairing > lv.gamma)) {
      // First offending time in increasing order.
      for (auto k : lv.U.indices()) {
        if (!(pairing[k] > lv.gamma)) {
          std::ostringstream msg;
          msg << "|<x', T_t x>| = " << pairing[k] << " <= gamma_" << lv.k << " = " << lv.gamma
              << " at t = " << static_cast<double>(k) * dt;
          fail(static_cast<double>(k) * dt, msg.str());
          break;
        }
      }
    }
    audit.levels.push_back(la);
  }
  for (std::size_t i = 1; i <= w.levels.size(); ++i) {
    TailAudit ta;
    ta.i = static_cast<int>(i);
    const double e = std::ldexp(1.0, ta.i) - 1.0;
    ta.bound = 9.0 * std::pow(10.0, -e) - 3.0 * tail_sum(ta.i);
    ta.target = 5.0 * std::pow(10.0, -e);
    ta.pass = ta.bound > ta.target;
    if (!ta.pass) fail(-1.0, "tail bound fails at level " + std::to_string(i));
    audit.tails.push_back(ta);
  }
  return audit;
}

WitnessAudit verify_witness(const SlowOrbitWitness& w, const ModelDescriptor& model, const TimeGrid& tg) {
  auto audit = audit_witness(w, model, tg);
  if (!audit.pass) {
    std::ostringstream msg;
    msg << "witness check failed";
    if (audit.first_failure_t >= 0.0) msg << " at t = " << audit.first_failure_t;
    msg << ": " << audit.message;
    throw Error(ErrorKind::Verification, msg.str());
  }
  return audit;
}

DivergenceLedger divergence_ledger(const SlowOrbitWitness& w, const ModelDescriptor& model, const DivergenceSpec& h,
                                   const TimeGrid& tg) {
  const double dt = tg.dt();
  const std::size_t steps = tg.size() - 1;
  const auto z = weak_orbit(*model.evaluator, w.xp.values, w.x.values, steps, dt);
  DivergenceLedger d;
  double acc = 0.0;
  d.partials.emplace_back(0.0, 0.0);
  double prev = h(std::abs(z[0]));
  for (std::size_t k = 1; k <= steps; ++k) {
    const double cur = h(std::abs(z[k]));
    acc += 0.5 * dt * (prev + cur);
    prev = cur;
    d.partials.emplace_back(tg[k], acc);
  }
  for (const auto& lv : w.levels) d.lower_bound += lv.U.measure() * h(lv.gamma);
  d.final_partial = acc;
  d.pass = d.final_partial >= d.lower_bound - 1e-6;
  return d;
}

WeakL1Report weak_l1_check(const ModelDescriptor& model, int n_samples, double T, double tol, std::uint64_t seed) {
  if (model.name != "gvw") throw Error(ErrorKind::Unsupported, "weak L1 check needs the gvw model");
  if (n_samples < 1) throw Error(ErrorKind::Domain, "n_samples must be >= 1");
  const SpaceGrid& g = *model.grid();
  if (!(T > 0.0) || T > g.s_max()) throw Error(ErrorKind::Domain, "T must lie in (0, s_max]");
  const auto& ev = *model.evaluator;
  const double dt = model.default_dt;
  const std::size_t steps = aligned_steps(std::floor(T / dt + 1e-9) * dt, dt);

  WeakL1Report r;
  r.support_end = g.s_max() / 4.0;
  r.sweep_time = r.support_end;
  const auto support_cells = static_cast<Eigen::Index>(std::floor(r.support_end / g.h() + 1e-9));
  const auto n = static_cast<Eigen::Index>(g.n());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t sweep_k = std::min(steps, aligned_steps(r.sweep_time, dt));
  for (int s = 0; s < n_samples; ++s) {
    CVector x = CVector::Zero(n);
    for (Eigen::Index i = 0; i < support_cells; ++i) x[i] = Complex(u(rng), u(rng));
    CVector xp(n);
    for (Eigen::Index i = 0; i < n; ++i) xp[i] = Complex(u(rng), u(rng));
    const auto z = weak_orbit(ev, xp, x, steps, dt);
    // Tails from the end backwards; the largest is the one starting at the sweep time.
    double tail = 0.0, worst = 0.0;
    for (std::size_t k = steps; k > sweep_k; --k) {
      tail += 0.5 * dt * (std::abs(z[k]) + std::abs(z[k - 1]));
      worst = std::max(worst, tail);
    }
    r.tails.push_back(worst);
    r.max_tail = std::max(r.max_tail, worst);
  }
  r.pass = r.max_tail < tol;

  r.probe_time = std::floor(T / 2.0 / dt + 1e-9) * dt;
  for (const auto& p : probe_family(model, r.probe_time + 0.1, 16)) {
    const double ratio = norm(ev.apply(r.probe_time, p), g, model.norm_spec) / norm(p, g, model.norm_spec);
    r.non_ues_ratio = std::max(r.non_ues_ratio, ratio);
  }
  r.non_ues = r.non_ues_ratio >= 0.9;
  return r;
}

}  // namespace sloworbit
