// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "sloworbit/choose_four.hpp"
#include "sloworbit/error.hpp"
#include "sloworbit/kernels.hpp"
#include "sloworbit/lemmas.hpp"
#include "sloworbit/report.hpp"
#include "sloworbit/spectral.hpp"
#include "sloworbit/theorems.hpp"
#include "sloworbit/verification.hpp"
#include "sloworbit/zoo.hpp"

using namespace sloworbit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Shared criterion-1 run.
struct Reference {
  ModelDescriptor model = build_shift_model(400.0, 4000);
  TimeGrid tg{200.0, 0.1};
  std::vector<double> m{5.0, 10.0, 20.0};
  std::optional<SlowOrbitWitness> witness;
  double seconds = 0.0;

  const SlowOrbitWitness& get() {
    if (!witness) {
      const auto t0 = std::chrono::steady_clock::now();
      witness = theorem1_construct(model, m, 3, tg);
      seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return *witness;
  }
};

// Independent rotation deviation: index shifts for the shift model, a fresh exp(dt A) for matrices.
double direct_rotation_dev(const ModelDescriptor& model, const CVector& y, double beta, double t0, double dt) {
  const SpaceGrid& g = *model.grid();
  const auto steps = static_cast<std::size_t>(std::llround(t0 / dt));
  double worst = 0.0;
  if (model.is_shift()) {
    const auto per = static_cast<Eigen::Index>(std::llround(dt / g.h()));
    const Eigen::Index n = y.size();
    for (std::size_t k = 0; k <= steps; ++k) {
      const Eigen::Index c = static_cast<Eigen::Index>(k) * per;
      const Complex rot = std::exp(Complex(0.0, beta * static_cast<double>(k) * dt));
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Complex ti = i + c < n ? y[i + c] : Complex{};
        acc += std::norm(ti - rot * y[i]) * g.h();
      }
      worst = std::max(worst, std::sqrt(acc));
    }
  } else {
    const CMatrix step = (dt * model.generator().to_dense()).exp();
    CVector v = y;
    for (std::size_t k = 0; k <= steps; ++k) {
      if (k > 0) v = step * v;
      const Complex rot = std::exp(Complex(0.0, beta * static_cast<double>(k) * dt));
      worst = std::max(worst, norm(CVector(v - rot * y), g, model.norm_spec));
    }
  }
  return worst;
}

}  // namespace

int main() {
  Reference ref;

  run(1, "theorem1 witness end to end on the shift model", [&] {
    const auto& w = ref.get();
    const auto audit = verify_witness(w, ref.model, ref.tg);
    const double gammas[3] = {0.5, 5e-3, 5e-7};
    bool ok = audit.pass && audit.levels.size() == 3;
    std::ostringstream d;
    for (std::size_t k = 0; k < audit.levels.size(); ++k) {
      const auto& l = audit.levels[k];
      ok = ok && l.measure >= ref.m[k] - 1e-9 && std::abs(l.gamma - gammas[k]) < 1e-15 * gammas[k] &&
           l.min_pairing > gammas[k];
      d << "mu(U" << l.k << ")=" << fmt(l.measure) << " min=" << fmt(l.min_pairing) << " > " << fmt(l.gamma) << "; ";
    }
    ok = ok && ref.seconds <= 60.0;
    d << "construction " << fmt(ref.seconds) << " s";
    return Outcome{ok, d.str()};
  });

  run(2, "level bounds after level 3", [&] {
    const auto& w = ref.get();
    double b1 = -1.0, b2 = -1.0, s1 = -1.0, s2 = -1.0;
    for (const auto& r : w.ledger.level_bounds) {
      if (r.after_level != 3) continue;
      if (r.i == 1) b1 = r.measured_min, s1 = r.slack;
      if (r.i == 2) b2 = r.measured_min, s2 = r.slack;
    }
    const bool ok = b1 >= 0.597 && b2 >= 6e-3 && s1 >= 0.0 && s2 >= 0.0 &&
                    std::abs(level_bound(1, 3) - 0.597) < 1e-15 && std::abs(level_bound(2, 3) - 6e-3) < 1e-15;
    return Outcome{ok, "U1 min " + fmt(b1) + " >= 0.597, U2 min " + fmt(b2) + " >= 0.006"};
  });

  run(3, "choosing from four", [&] {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> len(1, 400);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t cells = len(rng);
      const double gamma = std::pow(10.0, 3.0 * u(rng) - 3.0);
      std::array<std::vector<double>, 4> vals;
      for (std::size_t t = 0; t < cells; ++t) {
        // a = <x', T x>, b = <x', T c>, c = <c', T x>, e = <c', T c> with |e| >= gamma.
        const Complex a(3 * u(rng), 3 * u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
        const Complex e = std::polar(gamma * (1.0 + std::abs(u(rng))), 3.2 * u(rng));
        for (std::size_t q = 0; q < 4; ++q) {
          const double p = kSignOrder[q].primal, d = kSignOrder[q].dual;
          vals[q].push_back(std::abs(a + p * b + d * c + p * d * e));
        }
      }
      const auto first = static_cast<std::size_t>(trial % 37);
      const auto r = choose_four_from_values(vals, TimeSet::range(first, first + cells, 0.1), gamma);
      if (4 * r.U.cells() < cells) ++bad;
    }
    // Bilinearity on real orbits: sum_{p,d} p d <x' + d c', T (x + p c)> = 4 <c', T c>.
    const auto model = build_shift_model(40.0, 400);
    const auto& g = *model.grid();
    CVector x(400), xp(400), c(400), cp(400);
    for (Eigen::Index i = 0; i < 400; ++i) {
      x[i] = Complex(u(rng), u(rng));
      xp[i] = Complex(u(rng), u(rng));
      c[i] = Complex(u(rng), u(rng));
      cp[i] = Complex(u(rng), u(rng));
    }
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < 300; k += 7) idx.push_back(k);
    const auto center = weak_orbit_at(*model.evaluator, cp, c, idx, 0.1);
    double err = 0.0, scale = 0.0;
    std::array<std::vector<Complex>, 4> z;
    for (std::size_t q = 0; q < 4; ++q) {
      const double p = kSignOrder[q].primal, d = kSignOrder[q].dual;
      z[q] = weak_orbit_at(*model.evaluator, CVector(xp + d * cp), CVector(x + p * c), idx, 0.1);
    }
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Complex s{};
      for (std::size_t q = 0; q < 4; ++q) s += double(kSignOrder[q].primal * kSignOrder[q].dual) * z[q][j];
      err = std::max(err, std::abs(s - 4.0 * center[j]));
      scale = std::max(scale, std::abs(center[j]));
    }
    (void)g;
    const double rel = err / std::max(1.0, scale);
    return Outcome{bad == 0 && rel <= 1e-12,
                   std::to_string(1000 - bad) + "/1000 instances with mu(U) >= mu(U~)/4; identity error " + fmt(rel)};
  });

  run(4, "approximate eigenvector certificate and deviation bound", [&] {
    std::ostringstream d;
    bool ok = true;
    const auto shift = build_shift_model(1000.0, 10000);
    const auto zab = build_zabczyk_model(20);
    for (const auto* model : {&shift, &zab}) {
      const auto p = lemma1_construct(*model, 0.1, 20.0);
      const double dev = direct_rotation_dev(*model, p.y.values, p.beta, 20.0, 0.1);
      ok = ok && dev < 0.1;
      d << model->name << ": sup dev " << fmt(dev) << "; ";
    }
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    int passed = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = 2 + trial % 5;
      CMatrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng)) / std::sqrt(double(n));
      const auto model = build_dense_model(a, "random");
      CVector x(n);
      for (int i = 0; i < n; ++i) x[i] = Complex(nd(rng), nd(rng));
      const auto r = check_eq2_bound(model, x, 4.0 * ud(rng) - 2.0, 3.0 * ud(rng), 0.01);
      passed += r.pass ? 1 : 0;
    }
    ok = ok && passed == 1000;
    d << "deviation bound " << passed << "/1000";
    return Outcome{ok, d.str()};
  });

  run(5, "smooth approximate eigenvector budget", [&] {
    const auto shift = build_shift_model(1000.0, 10000);
    Lemma2Options lo;
    lo.plateau = 200.0;
    lo.ramp = 100.0;
    lo.left = 100.0;
    const auto r = lemma2_construct(shift, 0.1, 3, lo);
    const auto& nrm = r.budget.norms;
    bool ok = nrm.size() == 4 && std::abs(nrm[0] - 1.0) < 1e-9 && nrm[1] < 0.1 && nrm[2] < 0.1 && nrm[3] < 0.1;
    std::string id_result = "no error";
    try {
      lemma2_construct(build_dense_model(CMatrix::Identity(4, 4), "identity"), 0.1, 3);
      ok = false;
    } catch (const Error& e) {
      id_result = std::string(to_string(e.kind()));
      ok = ok && e.kind() == ErrorKind::Infeasible;
    }
    return Outcome{ok, "||y|| " + fmt(nrm[0]) + ", ||Ay|| " + fmt(nrm[1]) + ", ||A^2y|| " + fmt(nrm[2]) +
                           ", ||A^3y|| " + fmt(nrm[3]) + "; A = I -> " + id_result};
  });

  run(6, "spectral inequality diagram", [&] {
    std::ostringstream d;
    bool ok = true;
    for (const auto& model : {build_shift_model(400.0, 4000), build_gvw_model(8.0, 80000), build_zabczyk_model(20),
                              build_dense_model(-CMatrix::Identity(3, 3), "minus-identity")}) {
      const auto rep = spectral_report(model);
      bool pass = true;
      for (const auto& e : diagram_check(rep, 1e-3)) pass = pass && e.pass;
      ok = ok && pass;
      d << model.name << (pass ? " ok" : " FAIL") << "; ";
      if (model.name == "minus-identity") {
        const bool all = std::abs(rep.s + 1) <= 1e-6 && std::abs(rep.s0_estimate + 1) <= 1e-6 &&
                         std::abs(rep.omega1.omega1 + 1) <= 1e-6 && std::abs(rep.omega0.omega0 + 1) <= 1e-6;
        ok = ok && all;
        d << "-I: s " << fmt(rep.s) << " s0 " << fmt(rep.s0_estimate) << " w1 " << fmt(rep.omega1.omega1) << " w0 "
          << fmt(rep.omega0.omega0) << "; ";
      }
    }
    double prev = -1.0;
    for (int k : {5, 10, 20}) {
      const auto model = build_zabczyk_model(k);
      const double s = spectral_bound(model);
      // Dense oracle: SVD of a fresh exponential of the full generator.
      const CMatrix a = model.generator().to_dense();
      std::vector<std::pair<double, double>> pts, oracle;
      const auto on = operator_norms(*model.evaluator, 100, 0.1);
      for (std::size_t j = 10; j <= 100; ++j) {
        const double t = 0.1 * double(j);
        pts.emplace_back(t, std::log(on[j]));
        if (j % 10 == 0) {
          Eigen::JacobiSVD<CMatrix> svd((t * a).exp());
          oracle.emplace_back(t, std::log(svd.singularValues()[0]));
        }
      }
      const double slope = fit_slope(pts, 1.0, 10.0);
      const double oracle_slope = fit_slope(oracle, 1.0, 10.0);
      const bool agree = std::abs(slope - oracle_slope) < 0.05;
      ok = ok && agree && slope > prev;
      if (k == 20) ok = ok && std::abs(s) <= 1e-9 && slope >= 0.8;
      d << "zabczyk(" << k << ") slope " << fmt(slope) << " (oracle " << fmt(oracle_slope) << ")" << (k == 20 ? ", s " + fmt(s) : "")
        << "; ";
      prev = slope;
    }
    return Outcome{ok, d.str()};
  });

  run(7, "GVW dichotomy", [&] {
    const auto gvw = build_gvw_model(8.0, 80000);
    const auto r = weak_l1_check(gvw, 50, gvw.grid()->s_max() / 2.0, 1e-6);
    return Outcome{r.pass && r.non_ues, "max tail " + fmt(r.max_tail) + " < 1e-6; ||T_t x||/||x|| at t = " +
                                            fmt(r.probe_time) + ": " + fmt(r.non_ues_ratio)};
  });

  run(8, "divergence floor", [&] {
    const auto& w = ref.get();
    const auto d = divergence_ledger(w, ref.model, DivergenceSpec::identity(), ref.tg);
    const bool ok = std::abs(d.lower_bound - 2.55001) <= 1e-6 && d.final_partial >= d.lower_bound;
    return Outcome{ok, "floor " + fmt(d.lower_bound) + ", quadrature at t_max " + fmt(d.final_partial)};
  });

  run(9, "determinism", [&] {
    const auto& w1 = ref.get();
    const auto w2 = theorem1_construct(ref.model, ref.m, 3, ref.tg);
    const auto dir = std::filesystem::temp_directory_path() / "sloworbit_acceptance";
    const nlohmann::json cfg{{"seed", 1}};
    write_witness(w1, ref.model, ref.tg, dir / "a", cfg);
    write_witness(w2, ref.model, ref.tg, dir / "b", cfg);
    bool same = true;
    for (const char* f : {"witness.json", "x.csv", "xp.csv", "orbit.csv"}) {
      std::ifstream a(dir / "a" / f, std::ios::binary), b(dir / "b" / f, std::ios::binary);
      std::stringstream sa, sb;
      sa << a.rdbuf();
      sb << b.rdbuf();
      same = same && sa.str() == sb.str() && !sa.str().empty();
    }
    std::filesystem::remove_all(dir);
    return Outcome{same, same ? "witness.json, x.csv, xp.csv, orbit.csv byte-identical" : "outputs differ"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
