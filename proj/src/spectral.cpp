#include "sloworbit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sloworbit/error.hpp"

namespace sloworbit {

namespace {

constexpr double kSingularTol = 1e-12;

double smallest_singular_value(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

// Number of eigenvalues below x of the symmetric tridiagonal with diagonal d and
// constant off-diagonal magnitude e.
std::size_t sturm_count(double d0, double d, double e2, std::size_t n, double x) {
  std::size_t count = 0;
  double q = d0 - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    if (q == 0.0) q = std::numeric_limits<double>::min();
    q = d - x - e2 / q;
    if (q < 0.0) ++count;
  }
  return count;
}

double shift_resolvent_norm(const SpaceGrid& g, Complex lambda) {
  const double h = g.h();
  const Complex a = 1.0 + lambda * h;
  const double a2 = std::norm(a);
  const std::size_t n = g.n();
  double lo = 0.0;
  double hi = (std::abs(a) + 1.0) * (std::abs(a) + 1.0);
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(a2, a2 + 1.0, a2, n, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double sigma = std::sqrt(0.5 * (lo + hi));
  if (sigma < kSingularTol) throw Error(ErrorKind::Singular, "lambda is numerically in the spectrum");
  return h / sigma;
}

std::vector<std::pair<double, double>> log_profile(const std::vector<double>& norms, double dt) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    if (norms[k] > 0.0) out.emplace_back(static_cast<double>(k) * dt, std::log(norms[k]));
  }
  return out;
}

}  // namespace

std::vector<Complex> eigenvalues(const GridOperator& a) {
  std::vector<Complex> out;
  auto collect = [&](const CMatrix& m) {
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::Singular, "eigenvalue solver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  };
  switch (a.kind()) {
    case GridOperator::Kind::Dense: collect(a.matrix()); break;
    case GridOperator::Kind::BlockDiagonal:
      for (const auto& b : a.blocks()) collect(b);
      break;
    case GridOperator::Kind::StructuredShift:
      throw Error(ErrorKind::Unsupported, "eigenvalues of the structured shift are not computed");
  }
  return out;
}

double spectral_bound(const GridOperator& a) {
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& l : eigenvalues(a)) s = std::max(s, l.real());
  return s;
}

double spectral_bound(const ModelDescriptor& model) {
  if (model.analytic_s) return *model.analytic_s;
  return spectral_bound(model.generator());
}

double resolvent_norm(const GridOperator& a, Complex lambda) {
  auto block_norm = [&](const CMatrix& m) {
    CMatrix r = -m;
    r.diagonal().array() += lambda;
    const double sigma = smallest_singular_value(r);
    if (sigma < kSingularTol) throw Error(ErrorKind::Singular, "lambda is numerically in the spectrum");
    return 1.0 / sigma;
  };
  switch (a.kind()) {
    case GridOperator::Kind::Dense: return block_norm(a.matrix());
    case GridOperator::Kind::BlockDiagonal: {
      double best = 0.0;
      for (const auto& b : a.blocks()) best = std::max(best, block_norm(b));
      return best;
    }
    case GridOperator::Kind::StructuredShift: return shift_resolvent_norm(*a.grid(), lambda);
  }
  return 0.0;
}

ResolventScan scan_resolvent(const GridOperator& a, double alpha, std::pair<double, double> beta_range, int n_beta,
                             Exec exec) {
  if (n_beta < 3) throw Error(ErrorKind::Domain, "scan needs at least 3 beta samples");
  const auto [b0, b1] = beta_range;
  if (!(b1 > b0)) throw Error(ErrorKind::Domain, "empty beta range");
  ResolventScan scan;
  scan.alpha = alpha;
  for (int j = 0; j < n_beta; ++j) scan.betas.push_back(b0 + (b1 - b0) * j / (n_beta - 1));
  scan.norms = resolvent_norms(a, alpha, scan.betas, scan.singular, kResolventSentinel, exec);
  const auto peak = static_cast<std::size_t>(
      std::max_element(scan.norms.begin(), scan.norms.end()) - scan.norms.begin());
  scan.peak_beta = scan.betas[peak];
  scan.peak_norm = scan.norms[peak];
  scan.peak_singular = scan.singular[peak];
  if (scan.peak_singular) return scan;

  const auto [bm, fm] = refine_resolvent_peak(a, alpha, scan.betas[peak > 0 ? peak - 1 : 0],
                                              scan.betas[std::min(peak + 1, scan.betas.size() - 1)]);
  if (fm > scan.peak_norm) {
    scan.peak_beta = bm;
    scan.peak_norm = fm;
    scan.peak_singular = fm >= kResolventSentinel;
  }
  return scan;
}

std::pair<double, double> refine_resolvent_peak(const GridOperator& a, double alpha, double lo, double hi) {
  auto f = [&](double b) {
    try {
      return resolvent_norm(a, Complex(alpha, b));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Singular) throw;
      return kResolventSentinel;
    }
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 100 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi)); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  const double bm = 0.5 * (lo + hi);
  return {bm, f(bm)};
}

std::pair<double, double> default_beta_range(const ModelDescriptor& model) {
  if (model.is_shift()) return {-2.0, 2.0};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& l : eigenvalues(model.generator())) {
    lo = std::min(lo, l.imag());
    hi = std::max(hi, l.imag());
  }
  return {lo - 1.0, hi + 1.0};
}

double fit_slope(const std::vector<std::pair<double, double>>& points, double t_lo, double t_hi) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t n = 0;
  for (const auto& [t, y] : points) {
    if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    ++n;
  }
  if (n < 4) throw Error(ErrorKind::Degenerate, "slope fit needs at least 4 points");
  const double nn = static_cast<double>(n);
  const double den = nn * stt - st * st;
  if (!(std::abs(den) > 0.0)) throw Error(ErrorKind::Degenerate, "slope fit with coincident times");
  return (nn * sty - st * sy) / den;
}

TimeGrid default_time_grid(const ModelDescriptor& model) {
  if (model.name == "shift") return TimeGrid(model.grid()->s_max() / 2.0, model.default_dt);
  if (model.name == "gvw") return TimeGrid(model.grid()->s_max() / 4.0, 0.05);
  if (model.name == "zabczyk") return TimeGrid(2.0 * model.params.k_max, 0.1);
  return TimeGrid(10.0, 0.1);
}

Omega0Fit estimate_omega0(const ModelDescriptor& model, const TimeGrid& tg) {
  const std::size_t steps = tg.size() - 1;
  std::vector<double> norms;
  Omega0Fit fit;
  if (model.is_shift()) {
    if (tg.t_max() >= model.grid()->s_max()) throw Error(ErrorKind::Horizon, "time grid beyond s_max");
    const bool spikes = model.name == "gvw";
    const auto probes = probe_family(model, spikes ? 0.0 : tg.t_max(), spikes ? 32 : 8);
    norms.assign(steps + 1, 0.0);
    for (const auto& p : probes) {
      const double np = norm(p, *model.grid(), model.norm_spec);
      const auto on = orbit_norms(*model.evaluator, p, model.norm_spec, steps, tg.dt());
      for (std::size_t k = 0; k <= steps; ++k) norms[k] = std::max(norms[k], on[k] / np);
    }
    fit.bound_side = "lower";
  } else {
    norms = operator_norms(*model.evaluator, steps, tg.dt());
    fit.bound_side = "exact";
  }
  fit.profile = log_profile(norms, tg.dt());
  fit.t_lo = 0.5 * tg.t_max();
  fit.t_hi = tg.t_max();
  fit.omega0 = fit_slope(fit.profile, fit.t_lo, fit.t_hi);
  fit.points = static_cast<std::size_t>(std::count_if(fit.profile.begin(), fit.profile.end(), [&](const auto& p) {
    return p.first >= fit.t_lo - 1e-12;
  }));
  return fit;
}

Omega1Fit estimate_omega1(const ModelDescriptor& model, int k, std::size_t n_samples, const TimeGrid& tg,
                          std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::Domain, "smoothing order must be >= 1");
  if (n_samples == 0) throw Error(ErrorKind::Domain, "need at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  const SpaceGrid& g = *model.grid();
  const std::size_t steps = tg.size() - 1;
  Omega1Fit fit;
  fit.order = k;
  fit.samples = n_samples;
  fit.t_lo = 0.5 * tg.t_max();
  fit.t_hi = tg.t_max();
  const double s = spectral_bound(model);
  const Complex lambda0(s + 1.0, 0.0);
  fit.omega1 = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_samples; ++j) {
    CVector x;
    if (model.is_shift()) {
      // Smooth compact bumps lie in D(A^k) for every k; keep them beyond the sweep.
      const double lo = std::max(0.5 * g.s_max(), tg.t_max());
      const double width = std::max(8.0 * g.h(), (g.s_max() - lo) * (0.2 + 0.3 * unit(rng)));
      const double center = lo + 0.5 * width + (g.s_max() - lo - width) * unit(rng);
      x = smooth_bump(g, center, width, model.norm_spec) * Complex(normal(rng), normal(rng));
      fit.smoothing = "smooth compactly supported bumps";
    } else {
      x = CVector(static_cast<Eigen::Index>(g.n()));
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = Complex(normal(rng), normal(rng));
      for (int r = 0; r < k; ++r) x = model.generator().resolvent_apply(lambda0, x);
      fit.smoothing = "R(s + 1)^k v";
    }
    const auto on = orbit_norms(*model.evaluator, x, model.norm_spec, steps, tg.dt());
    const double slope = fit_slope(log_profile(on, tg.dt()), fit.t_lo, fit.t_hi);
    fit.slopes.push_back(slope);
    fit.omega1 = std::max(fit.omega1, slope);
  }
  return fit;
}

SpectralReport spectral_report(const ModelDescriptor& model, const SpectralOptions& options) {
  SpectralReport r;
  r.model = model.name;
  r.s = spectral_bound(model);
  r.s_source = model.analytic_s ? "analytic" : "eigenvalues";
  const TimeGrid tg = options.t_max > 0.0 ? TimeGrid(options.t_max, options.dt > 0.0 ? options.dt : model.default_dt)
                                          : default_time_grid(model);
  if (model.hilbert_norm()) {
    const auto range = default_beta_range(model);
    const int n_beta = options.n_beta > 0 ? options.n_beta : (model.is_shift() ? 21 : 41);
    r.s0_estimate = std::numeric_limits<double>::infinity();
    for (double off : options.alpha_offsets) {
      auto scan = scan_resolvent(model.generator(), r.s + off, range, n_beta);
      r.s0_estimate = std::min(r.s0_estimate, scan.alpha - 1.0 / scan.peak_norm);
      r.s0_indicator.push_back(std::move(scan));
    }
    r.s0_available = true;
  }
  r.omega0 = estimate_omega0(model, tg);
  r.omega1 = estimate_omega1(model, options.omega1_order, options.omega1_samples, tg, options.seed);
  for (const auto& [t, logn] : r.omega0.profile) {
    r.growth_constant = std::max(r.growth_constant, std::exp(logn - r.omega0.omega0 * t));
  }
  return r;
}

std::vector<DiagramEntry> diagram_check(const SpectralReport& r, double tol) {
  std::vector<DiagramEntry> out;
  const double w0 = r.omega0.omega0;
  const double w1 = r.omega1.omega1;
  auto leq = [&](std::string name, double lhs, double rhs, std::string note = {}) {
    const double slack = rhs - lhs;
    out.push_back({std::move(name), slack >= -tol, slack, std::move(note)});
  };
  leq("s <= omega1", r.s, w1);
  leq("omega1 <= omega0", w1, w0);
  if (r.s0_available) {
    leq("s <= s0", r.s, r.s0_estimate, "s0 evidence level: min over scans of alpha - 1/peak");
    for (const auto& scan : r.s0_indicator) {
      if (!(scan.alpha > w0 + tol)) continue;
      const double bound = r.growth_constant / (scan.alpha - w0);
      char name[96];
      std::snprintf(name, sizeof name, "resolvent bound at alpha = %.6g", scan.alpha);
      leq(name, scan.peak_norm, bound, "peak <= M/(alpha - omega0)");
    }
  } else {
    out.push_back({"s <= s0", true, 0.0, "not evaluated: resolvent norm needs a Hilbert norm"});
  }
  return out;
}

}  // namespace sloworbit
