#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <Eigen/SVD>

#include "sloworbit/error.hpp"
#include "sloworbit/spectral.hpp"
#include "sloworbit/zoo.hpp"

using namespace sloworbit;

TEST_CASE("shift model") {
  CHECK_THROWS_AS(build_shift_model(10.0, 8), Error);
  const auto m = build_shift_model(100.0, 1000);
  CHECK(m.is_shift());
  CHECK(m.hilbert_norm());
  CHECK(m.analytic_s.value() == 0.0);
  const auto& g = *m.grid();
  const CVector x = smooth_bump(g, 10.0, 8.0, m.norm_spec);
  double prev = 2.0;
  for (double t : {0.0, 5.0, 10.0, 14.0, 20.0, 99.0}) {
    const double v = norm(m.evaluator->apply(t, x), g, m.norm_spec);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  CHECK(prev == 0.0);
}

TEST_CASE("gvw model norms") {
  CHECK_THROWS_AS(build_gvw_model(8.0, 800, 1.0), Error);
  const auto m = build_gvw_model(40.0, 4000, 2.0);
  const auto& g = *m.grid();
  CHECK_FALSE(m.hilbert_norm());

  // Spike probes far out keep most of their norm: the Lp part dominates the weighted L1 part.
  for (const auto& p : probe_family(m, 20.0, 4)) {
    CHECK(norm(m.evaluator->apply(0.0, p), g, m.norm_spec) == doctest::Approx(1.0));
  }
  const auto spikes = probe_family(m, 0.0, 16);
  double best = 0.0;
  for (const auto& p : spikes) best = std::max(best, norm(m.evaluator->apply(0.1, p), g, m.norm_spec));
  CHECK(best >= 0.9);

  // Weighted L1 part of T_t x decays like e^{-t} for x supported in [0, 10].
  const auto l1 = NormSpec::weighted_l1(WeightTag::Exp);
  CVector x = CVector::Zero(4000);
  for (int i = 300; i < 1000; ++i) x[i] = 1.0;
  const double base = norm(x, g, l1);
  for (double t : {1.0, 2.0, 2.5}) {
    CHECK(norm(m.evaluator->apply(t, x), g, l1) == doctest::Approx(base * std::exp(-t)).epsilon(1e-9));
  }
}

TEST_CASE("zabczyk model") {
  CHECK_THROWS_AS(build_zabczyk_model(1), Error);
  CHECK_THROWS_AS(build_zabczyk_model(65), Error);
  const auto m = build_zabczyk_model(12);
  CHECK(m.grid()->n() == 78);
  for (const auto& l : eigenvalues(m.generator())) CHECK(std::abs(l.real()) < 1e-9);
  CMatrix e(2, 2);
  e << 1.0, 1.0, 0.0, 1.0;
  Eigen::JacobiSVD<CMatrix> svd(e);
  CHECK(svd.singularValues()[0] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(build_zabczyk_model(2).evaluator->operator_norm(1.0) >= svd.singularValues()[0] - 1e-12);
}

TEST_CASE("matrix files") {
  const auto dir = std::filesystem::temp_directory_path() / "sloworbit_zoo_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "scalar.json") << R"({"n":1,"re":[[-1]],"im":[[0]]})";
    std::ofstream(dir / "jordan.json") << R"({"n":2,"re":[[0,1],[0,0]],"im":[[0,0],[0,0]]})";
    std::ofstream(dir / "bad.json") << R"({"n":2,"re":[[0,1],[0,0]]")";
    std::ofstream(dir / "rect.json") << R"({"n":2,"re":[[0,1,2],[0,0,1]],"im":[[0,0,0],[0,0,0]]})";
  }
  const auto scalar = load_matrix_model((dir / "scalar.json").string());
  CHECK(spectral_bound(scalar) == doctest::Approx(-1.0));
  const auto jordan = load_matrix_model((dir / "jordan.json").string());
  CMatrix s2 = CMatrix::Zero(2, 2);
  s2(0, 1) = 1.0;
  CHECK(jordan.generator().matrix() == s2);
  CHECK_THROWS_AS(load_matrix_model((dir / "bad.json").string()), Error);
  try {
    load_matrix_model((dir / "rect.json").string());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Dimension);
  }
  CHECK(parse_matrix_json(matrix_to_json(s2)) == s2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("model params round trip") {
  ModelParams p;
  p.name = "gvw";
  p.s_max = 8.0;
  p.n = 800;
  p.p = 3.0;
  const auto back = model_params_from_json(model_params_json(p));
  CHECK(back.name == "gvw");
  CHECK(back.n == 800);
  CHECK(back.p == 3.0);
  const auto m = build_model(back);
  CHECK(m.name == "gvw");
  CHECK(zoo_catalog().at("models").size() >= 3);
}
