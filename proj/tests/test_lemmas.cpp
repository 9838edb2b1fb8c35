#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "sloworbit/divergence.hpp"
#include "sloworbit/error.hpp"
#include "sloworbit/kernels.hpp"
#include "sloworbit/lemmas.hpp"
#include "sloworbit/zoo.hpp"

using namespace sloworbit;

namespace {

// Continuous raised-cosine plateau window.
double window(double s, double left, double plateau, double ramp) {
  const double b = left + ramp, c = b + plateau, d = c + ramp;
  if (s <= left || s >= d) return 0.0;
  if (s < b) return 0.5 * (1.0 - std::cos(std::numbers::pi * (s - left) / ramp));
  if (s <= c) return 1.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (s - c) / ramp));
}

// ||w(. + t) - w|| / ||w|| by fine midpoint quadrature.
double continuous_shift_dev(double t, double left, double plateau, double ramp) {
  const double end = left + plateau + 2 * ramp;
  const int n = 400000;
  const double h = end / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) * h;
    const double w = window(s, left, plateau, ramp);
    num += std::pow(window(s + t, left, plateau, ramp) - w, 2) * h;
    den += w * w * h;
  }
  return std::sqrt(num / den);
}

double dense_dev(const ModelDescriptor& m, const CVector& y, double beta, double t0, double dt) {
  const CMatrix step = (dt * m.generator().to_dense()).exp();
  CVector v = y;
  double worst = 0.0;
  for (int k = 0; k * dt <= t0 + 1e-12; ++k) {
    if (k > 0) v = step * v;
    worst = std::max(worst, (v - std::exp(Complex(0, beta * k * dt)) * y).norm());
  }
  return worst;
}

}  // namespace

TEST_CASE("plateau window on the shift model rotates slowly") {
  const auto m = build_shift_model(1000.0, 10000);
  const auto& g = *m.grid();
  const CVector y = make_plateau_window(g, 50.0, 200.0, 300.0, 0.0, m.norm_spec);
  CHECK(norm(y, g, m.norm_spec) == doctest::Approx(1.0).epsilon(1e-12));
  const auto dev = rotation_deviation(*m.evaluator, y, 0.0, m.norm_spec, 200, 0.1);
  const double measured = *std::max_element(dev.begin(), dev.end());
  const double oracle = continuous_shift_dev(20.0, 50.0, 200.0, 300.0);
  CHECK(measured < 0.1);
  CHECK(measured == doctest::Approx(oracle).epsilon(1e-2));
}

TEST_CASE("exact eigenvector of a rotation") {
  CMatrix a(1, 1);
  a(0, 0) = Complex(0, 1);
  const auto m = build_dense_model(a, "rotation");
  const auto p = lemma1_construct(m, 0.1, 5.0);
  CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.residual < 1e-6);
  CHECK(p.cert_sup_dev < 1e-5);
  CHECK(std::abs(p.y.values[0]) == doctest::Approx(1.0));
  CHECK(p.certified);
}

TEST_CASE("Zabczyk approximate eigenvector") {
  const auto m = build_zabczyk_model(12);
  const auto p = lemma1_construct(m, 0.1, 5.0);
  CHECK(norm(p.y) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(p.beta - std::round(p.beta)) < 0.5);
  CHECK(p.cert_sup_dev < 0.1);
  CHECK(p.residual <= p.residual_budget * (1 + 1e-9));
  const double oracle = dense_dev(m, p.y.values, p.beta, 5.0, 0.01);
  CHECK(oracle < 0.1);
  // deviation bound chain on the returned pair.
  CHECK(oracle <= 5.0 * p.sup_norm * p.residual + 1e-6);
  CHECK(p.generator_norm >= 0.0);
}

TEST_CASE("lemma1 reports the best residual when it fails") {
  const auto m = build_dense_model(-CMatrix::Identity(2, 2), "minus-identity");
  try {
    lemma1_construct(m, 0.1, 20.0);
    FAIL("expected a construction failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstructionFailure);
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("smoothness budgets") {
  CMatrix a(1, 1);
  a(0, 0) = Complex(0, 1);
  const auto rot = build_dense_model(a, "rotation");
  const auto s = check_smoothness_budget(rot.generator(), GridFunction(CVector::Ones(1), rot.grid(), rot.norm_spec), 4);
  REQUIRE(s.norms.size() == 5);
  for (double v : s.norms) CHECK(v == doctest::Approx(1.0));

  const auto m = build_shift_model(400.0, 4000);
  const auto& g = *m.grid();
  const double ramp = 50.0, plateau = 100.0;
  const CVector y = make_plateau_window(g, 20.0, plateau, ramp, 0.0, m.norm_spec);
  const auto b = check_smoothness_budget(m.generator(), GridFunction(y, m.grid(), m.norm_spec), 3);
  // ||w'|| / ||w|| for the continuous window.
  const double wn = std::sqrt(plateau + 0.75 * ramp);
  const double d1 = std::numbers::pi / (2 * ramp) * std::sqrt(ramp) / wn;
  CHECK(b.norms[1] == doctest::Approx(d1).epsilon(0.02));
  CHECK(b.norms[2] < b.norms[1]);
  CHECK(b.norms[3] < b.norms[2]);

  CVector spike = CVector::Zero(4000);
  spike[100] = 1.0 / std::sqrt(g.h());
  const auto rough = check_smoothness_budget(m.generator(), GridFunction(spike, m.grid(), m.norm_spec), 2);
  CHECK(rough.norms[1] > 10.0);
}

TEST_CASE("lemma2 constructions") {
  const auto shift = build_shift_model(1000.0, 10000);
  Lemma2Options lo;
  lo.plateau = 200.0;
  lo.ramp = 100.0;
  lo.left = 50.0;
  const auto r = lemma2_construct(shift, 0.1, 3, lo);
  CHECK(norm(r.y) == doctest::Approx(1.0).epsilon(1e-9));
  for (int i = 1; i <= 3; ++i) CHECK(r.budget.norms[static_cast<std::size_t>(i)] < 0.1);

  const auto zero = build_dense_model(CMatrix::Zero(3, 3), "zero");
  const auto z = lemma2_construct(zero, 0.1, 2);
  CHECK(norm(z.y) == doctest::Approx(1.0));
  CHECK(z.budget.norms[1] == 0.0);
  CHECK(z.budget.norms[2] == 0.0);

  CHECK_THROWS_AS(lemma2_construct(build_dense_model(CMatrix::Identity(3, 3), "id"), 0.1, 3), Error);
  CHECK_THROWS_AS(lemma2_construct(zero, 0.0, 2), Error);
}

TEST_CASE("proposition 1 schedules") {
  const auto lin = proposition1_schedule(DivergenceSpec::identity(), {0.5, 5e-3, 5e-7});
  CHECK(lin[0].m == doctest::Approx(2.0));
  CHECK(lin[1].m == doctest::Approx(400.0));
  CHECK(lin[2].m == doctest::Approx(6e6));
  for (const auto& e : lin) CHECK(e.m * e.h_gamma >= e.k - 1e-9);

  const auto flat = proposition1_schedule(DivergenceSpec::table({0.0, 1.0}, {1.0, 1.0}), {0.5, 0.25, 0.125});
  for (const auto& e : flat) CHECK(e.m == doctest::Approx(e.k));

  std::vector<double> gammas;
  for (int k = 1; k <= 3; ++k) gammas.push_back(canonical_gamma(k));
  const auto sq = proposition1_schedule(DivergenceSpec::power(2.0), gammas);
  for (const auto& e : sq) {
    CHECK(e.m == doctest::Approx(e.k * std::pow(10.0, 2.0 * (std::pow(2.0, e.k) - 1)) / 25.0).epsilon(1e-12));
  }
  const auto aligned = proposition1_schedule(DivergenceSpec::identity(), {0.3}, 0.25);
  CHECK(aligned[0].m == doctest::Approx(3.5));

  const auto part = proposition1_schedule(DivergenceSpec::indicator(0.01), {0.5, 5e-3});
  CHECK_FALSE(part[0].skipped);
  CHECK(part[1].skipped);
  CHECK_THROWS_AS(proposition1_schedule(DivergenceSpec::indicator(1.0), {0.5, 0.1}), Error);
  CHECK_THROWS_AS(proposition1_schedule(DivergenceSpec::identity(), {0.1, 0.5}), Error);
}

TEST_CASE("canonical thresholds and re-indexing") {
  CHECK(canonical_gamma(1) == doctest::Approx(0.5));
  CHECK(canonical_gamma(2) == doctest::Approx(5e-3));
  CHECK(canonical_gamma(3) == doctest::Approx(5e-7));
  const auto idx = reindex_schedule({0.6, 0.5, 0.01, 1e-4, 1e-8});
  CHECK(idx == std::vector<int>{0, 1, 1, 2, 3});
}

TEST_CASE("divergence functions") {
  CHECK(DivergenceSpec::parse("identity")(0.3) == doctest::Approx(0.3));
  CHECK(DivergenceSpec::parse("power:3")(0.5) == doctest::Approx(0.125));
  CHECK(DivergenceSpec::parse("indicator:0.2")(0.2) == 1.0);
  CHECK(DivergenceSpec::parse("indicator:0.2")(0.1) == 0.0);
  CHECK(DivergenceSpec::parse("log1p")(1.0) == doctest::Approx(std::log(2.0)));
  const auto t = DivergenceSpec::table({0.0, 1.0, 2.0}, {0.0, 2.0, 3.0});
  CHECK(t(0.5) == doctest::Approx(1.0));
  CHECK(t(5.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(DivergenceSpec::table({0.0, 1.0}, {2.0, 1.0}), Error);
  CHECK_THROWS_AS(DivergenceSpec::table({0.0, 1.0}, {-1.0, 1.0}), Error);
  CHECK_THROWS_AS(DivergenceSpec::parse("cube"), Error);

  const auto path = std::filesystem::temp_directory_path() / "sloworbit_h.csv";
  std::ofstream(path) << "u,h\n0,0\n1,1\n2,1.5\n";
  CHECK(DivergenceSpec::parse("table:" + path.string())(1.5) == doctest::Approx(1.25));
  std::ofstream(path) << "u,h\n0,1\n1,0\n";
  CHECK_THROWS_AS(DivergenceSpec::table_file(path.string()), Error);
  std::filesystem::remove(path);
}
