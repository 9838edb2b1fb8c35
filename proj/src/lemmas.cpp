#include "sloworbit/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sloworbit/error.hpp"
#include "sloworbit/kernels.hpp"
#include "sloworbit/spectral.hpp"

namespace sloworbit {

namespace {

double sup_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double residual_norm(const ModelDescriptor& model, const CVector& y, double beta) {
  const CVector r = model.generator().apply(y) - Complex(0.0, beta) * y;
  return norm(r, *model.grid(), model.norm_spec);
}

void fill_certificate(const ModelDescriptor& model, ApproxEigenpair& pair, double dt) {
  const std::size_t steps = aligned_steps(pair.t0, dt);
  const auto& ev = *model.evaluator;
  pair.cert_sup_dev = sup_of(rotation_deviation(ev, pair.y.values, pair.beta, model.norm_spec, steps, dt));
  pair.residual = residual_norm(model, pair.y.values, pair.beta);
  pair.generator_norm = norm(model.generator().apply(pair.y.values), *model.grid(), model.norm_spec);
  pair.residual_budget = pair.delta / (std::max(pair.t0, dt) * pair.sup_norm);
  pair.certified = pair.cert_sup_dev < pair.delta && pair.residual <= pair.residual_budget * (1.0 + 1e-9);
}

bool better(const ApproxEigenpair& a, const ApproxEigenpair& b) {
  if (a.certified != b.certified) return a.certified;
  return a.cert_sup_dev < b.cert_sup_dev;
}

std::pair<ApproxEigenpair, bool> shift_search(const ModelDescriptor& model, double delta, double t0,
                                              const Lemma1Options& opt, double dt) {
  const SpaceGrid& g = *model.grid();
  const double left = std::max(opt.left_min < 0.0 ? t0 : opt.left_min, t0);
  const double right = opt.right_max < 0.0 ? g.s_max() : std::min(opt.right_max, g.s_max());
  if (!(right > left)) throw Error(ErrorKind::Horizon, "no room for a window beyond t0; increase s_max");
  ApproxEigenpair best;
  bool have = false;
  // Ramps grow geometrically; the plateau matches the ramp. The last candidate fills the room.
  double r = std::max(4.0 * g.h(), 0.5);
  for (bool last = false; !last; r *= 1.1) {
    if (left + 3.0 * r >= right) {
      r = (right - left) / 3.0;
      last = true;
    }
    if (r < 2.0 * g.h()) break;
    ApproxEigenpair p;
    p.beta = opt.beta;
    p.delta = delta;
    p.t0 = t0;
    p.sup_norm = 1.0;  // ||T_t|| <= 1 for every shift model in the zoo
    p.method = "plateau-window";
    p.window_left = left;
    p.window_plateau = r;
    p.window_ramp = r;
    p.y = GridFunction(make_plateau_window(g, left, r, r, opt.beta, model.norm_spec), model.grid(),
                       model.norm_spec);
    fill_certificate(model, p, dt);
    if (!have || better(p, best)) {
      best = p;
      have = true;
    }
    if (p.certified) return {p, true};
  }
  if (!have) throw Error(ErrorKind::Horizon, "window room below grid resolution");
  return {best, false};
}

std::pair<ApproxEigenpair, bool> dense_search(const ModelDescriptor& model, double delta, double t0,
                                              const Lemma1Options& opt, double dt) {
  const auto& a = model.generator();
  const auto& ev = *model.evaluator;
  const double sup_norm = sup_of(operator_norms(ev, aligned_steps(t0, dt), dt));
  const double s = spectral_bound(a);
  const auto range = default_beta_range(model);
  ApproxEigenpair best;
  bool have = false;
  auto avoided = [&](double b) {
    return std::any_of(opt.avoid_betas.begin(), opt.avoid_betas.end(),
                       [&](double x) { return std::abs(x - b) < 0.5; });
  };
  for (double off : opt.alpha_offsets) {
    const double alpha = s + off;
    const auto scan = scan_resolvent(a, alpha, range, 81);
    std::size_t pick = scan.betas.size();
    for (std::size_t j = 0; j < scan.betas.size(); ++j) {
      if (avoided(scan.betas[j])) continue;
      if (pick == scan.betas.size() || scan.norms[j] > scan.norms[pick]) pick = j;
    }
    if (pick == scan.betas.size()) continue;
    double beta = scan.betas[pick];
    if (!scan.singular[pick]) {
      const double lo = scan.betas[pick > 0 ? pick - 1 : 0];
      const double hi = scan.betas[std::min(pick + 1, scan.betas.size() - 1)];
      beta = refine_resolvent_peak(a, alpha, lo, hi).first;
    }
    // Smallest right singular vector of A - i beta, taken from the block that attains it.
    CVector y = CVector::Zero(static_cast<Eigen::Index>(a.dim()));
    auto smallest = [&](const CMatrix& m) {
      CMatrix shifted = m;
      shifted.diagonal().array() -= Complex(0.0, beta);
      Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
      const Eigen::Index last = svd.singularValues().size() - 1;
      return std::pair<double, CVector>(svd.singularValues()(last), svd.matrixV().col(last));
    };
    if (a.kind() == GridOperator::Kind::BlockDiagonal) {
      double best_sigma = std::numeric_limits<double>::infinity();
      const auto offsets = a.block_offsets();
      for (std::size_t b = 0; b < a.blocks().size(); ++b) {
        auto [sigma, v] = smallest(a.blocks()[b]);
        if (sigma < best_sigma) {
          best_sigma = sigma;
          y.setZero();
          y.segment(static_cast<Eigen::Index>(offsets[b]), v.size()) = v;
        }
      }
    } else {
      y = smallest(a.matrix()).second;
    }
    // Fix the global phase so the largest entry is real and positive (deterministic output).
    Eigen::Index imax = 0;
    y.cwiseAbs().maxCoeff(&imax);
    if (std::abs(y[imax]) > 0.0) y *= std::conj(y[imax]) / std::abs(y[imax]);
    y /= norm(y, *model.grid(), model.norm_spec);
    ApproxEigenpair p;
    p.beta = beta;
    p.delta = delta;
    p.t0 = t0;
    p.sup_norm = sup_norm;
    p.method = "singular-vector";
    p.y = GridFunction(y, model.grid(), model.norm_spec);
    fill_certificate(model, p, dt);
    if (!have || better(p, best)) {
      best = p;
      have = true;
    }
    if (p.certified) return {p, true};
  }
  if (!have) throw Error(ErrorKind::ConstructionFailure, "every scan peak was excluded");
  return {best, false};
}

}  // namespace

CVector make_plateau_window(const SpaceGrid& grid, double left, double plateau, double ramp, double beta,
                            const NormSpec& spec) {
  if (!(ramp > 0.0) || plateau < 0.0) throw Error(ErrorKind::Domain, "window needs ramp > 0 and plateau >= 0");
  const auto n = static_cast<Eigen::Index>(grid.n());
  CVector v = CVector::Zero(n);
  const double a = left, b = left + ramp, c = b + plateau, d = c + ramp;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = grid.node(static_cast<std::size_t>(i));
    double w = 0.0;
    if (s > a && s < b) {
      w = 0.5 * (1.0 - std::cos(std::numbers::pi * (s - a) / ramp));
    } else if (s >= b && s <= c) {
      w = 1.0;
    } else if (s > c && s < d) {
      w = 0.5 * (1.0 + std::cos(std::numbers::pi * (s - c) / ramp));
    }
    if (w != 0.0) v[i] = w * std::exp(kI * (beta * s));
  }
  const double nv = norm(v, grid, spec);
  if (!(nv > 0.0)) throw Error(ErrorKind::Degenerate, "window has no support on the grid");
  return v / nv;
}

std::pair<ApproxEigenpair, bool> lemma1_search(const ModelDescriptor& model, double delta, double t0,
                                               const Lemma1Options& options) {
  if (!(delta > 0.0)) throw Error(ErrorKind::Domain, "delta must be positive");
  if (!(t0 >= 0.0)) throw Error(ErrorKind::Domain, "t0 must be non-negative");
  const double dt = options.dt > 0.0 ? options.dt : model.default_dt;
  if (model.is_shift()) {
    if (t0 >= model.grid()->s_max()) throw Error(ErrorKind::Horizon, "t0 beyond the model horizon");
    return shift_search(model, delta, t0, options, dt);
  }
  return dense_search(model, delta, t0, options, dt);
}

ApproxEigenpair lemma1_construct(const ModelDescriptor& model, double delta, double t0, const Lemma1Options& options) {
  auto [pair, ok] = lemma1_search(model, delta, t0, options);
  if (!ok) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "no approximate eigenvector within budget: best residual " << pair.residual << " (budget "
        << pair.residual_budget << "), best deviation " << pair.cert_sup_dev << " (delta " << delta << ")";
    throw Error(ErrorKind::ConstructionFailure, msg.str());
  }
  return pair;
}

GraphNormScale check_smoothness_budget(const GridOperator& a, const GridFunction& y, int n) {
  if (n < 0) throw Error(ErrorKind::Domain, "smoothness order must be non-negative");
  GraphNormScale out;
  out.order = n;
  CVector z = y.values;
  out.norms.push_back(norm(y));
  for (int i = 1; i <= n; ++i) {
    z = a.apply(z);
    out.norms.push_back(norm(z, *y.grid, y.norm_spec));
  }
  return out;
}

Lemma2Result lemma2_construct(const ModelDescriptor& model, double delta, int n, const Lemma2Options& opt) {
  if (!(delta > 0.0)) throw Error(ErrorKind::Domain, "delta must be positive");
  if (n < 1) throw Error(ErrorKind::Domain, "smoothness order must be >= 1");
  const auto& a = model.generator();
  const SpaceGrid& g = *model.grid();
  Lemma2Result res;
  if (model.hilbert_norm() || !model.is_shift()) {
    // A window of length s_max caps the truncated shift resolvent near s_max, so probe no closer than 4 / s_max.
    const double eps = model.is_shift() ? std::max(opt.epsilon, 4.0 / g.s_max()) : opt.epsilon;
    res.resolvent_at_epsilon = resolvent_norm(a, Complex(eps, 0.0));
    if (res.resolvent_at_epsilon < 0.5 / eps) {
      std::ostringstream msg;
      msg << "0 is not in the approximate spectrum: ||R(" << eps << ")|| = " << res.resolvent_at_epsilon
          << " < " << 0.5 / eps;
      throw Error(ErrorKind::Infeasible, msg.str());
    }
  }
  auto all_below = [&](const GraphNormScale& b) {
    for (std::size_t i = 1; i < b.norms.size(); ++i) {
      if (!(b.norms[i] < delta)) return false;
    }
    return true;
  };

  if (!model.is_shift()) {
    // Smallest singular vector of the stacked map x -> (Ax, ..., A^n x).
    const CMatrix full = a.to_dense();
    CMatrix gram = CMatrix::Zero(full.rows(), full.cols());
    CMatrix power = CMatrix::Identity(full.rows(), full.cols());
    for (int i = 1; i <= n; ++i) {
      power = full * power;
      gram += power.adjoint() * power;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    res.stacked_sigma = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
    CVector y = es.eigenvectors().col(0);
    y /= norm(y, g, model.norm_spec);
    res.y = GridFunction(y, model.grid(), model.norm_spec);
    res.budget = check_smoothness_budget(a, res.y, n);
    if (!all_below(res.budget)) {
      std::ostringstream msg;
      msg << "no unit vector with ||A^i y|| < " << delta << " for i <= " << n << " (stacked sigma "
          << res.stacked_sigma << ")";
      throw Error(ErrorKind::Infeasible, msg.str());
    }
    return res;
  }

  const double dt = opt.dt > 0.0 ? opt.dt : model.default_dt;
  const double right = opt.right_max < 0.0 ? g.s_max() : std::min(opt.right_max, g.s_max());
  const double left = std::max(opt.left, opt.t0_hint);
  auto make = [&](double plateau, double ramp) {
    Lemma2Result r = res;
    r.window_left = left;
    r.window_plateau = plateau;
    r.window_ramp = ramp;
    r.y = GridFunction(make_plateau_window(g, left, plateau, ramp, 0.0, model.norm_spec), model.grid(),
                       model.norm_spec);
    r.budget = check_smoothness_budget(a, r.y, n);
    if (opt.t0_hint > 0.0) {
      r.cert_sup_dev = sup_of(rotation_deviation(*model.evaluator, r.y.values, 0.0, model.norm_spec,
                                                 aligned_steps(opt.t0_hint, dt), dt));
    }
    return r;
  };
  if (opt.plateau > 0.0 && opt.ramp > 0.0) {
    if (left + opt.plateau + 2.0 * opt.ramp > right) throw Error(ErrorKind::Horizon, "window exceeds s_max");
    auto r = make(opt.plateau, opt.ramp);
    if (!all_below(r.budget)) throw Error(ErrorKind::Infeasible, "window misses the smoothness budget");
    return r;
  }
  std::optional<Lemma2Result> best;
  double ramp = std::max(4.0 * g.h(), 0.5);
  for (bool last = false; !last; ramp *= 1.1) {
    if (left + 3.0 * ramp >= right) {
      ramp = (right - left) / 3.0;
      last = true;
    }
    if (ramp < 2.0 * g.h()) break;
    auto r = make(ramp, ramp);
    if (!all_below(r.budget)) continue;
    if (opt.t0_hint <= 0.0 || r.cert_sup_dev < opt.cert_delta) return r;
    if (!best || r.cert_sup_dev < best->cert_sup_dev) best = r;
  }
  if (best) return *best;
  throw Error(ErrorKind::Infeasible, "no window within s_max meets the smoothness budget");
}

double canonical_gamma(int k) { return 5.0 / std::pow(10.0, std::pow(2.0, k) - 1.0); }

std::vector<ScheduleEntry> proposition1_schedule(const DivergenceSpec& h, const std::vector<double>& gammas,
                                                 double dt) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0)) throw Error(ErrorKind::Domain, "gammas must be positive");
    if (i > 0 && !(gammas[i] < gammas[i - 1])) throw Error(ErrorKind::Domain, "gammas must decrease strictly");
  }
  std::vector<ScheduleEntry> out;
  bool any = false;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    ScheduleEntry e;
    e.k = static_cast<int>(i) + 1;
    e.gamma = gammas[i];
    e.h_gamma = h(gammas[i]);
    if (!(e.h_gamma > 0.0)) {
      e.skipped = true;
    } else {
      e.m = static_cast<double>(e.k) / e.h_gamma;
      if (dt > 0.0) e.m = std::ceil(e.m / dt - 1e-9) * dt;
      any = true;
    }
    out.push_back(e);
  }
  if (!any) throw Error(ErrorKind::Infeasible, "h vanishes at every gamma: divergence unobtainable");
  return out;
}

std::vector<int> reindex_schedule(const std::vector<double>& gammas_prime, int max_level) {
  std::vector<int> out;
  for (double gp : gammas_prime) {
    int best = 0;
    for (int n = 1; n <= max_level; ++n) {
      if (canonical_gamma(n) >= gp) best = n;
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace sloworbit
