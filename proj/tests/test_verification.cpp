#include <doctest.h>

#include <cmath>

#include "sloworbit/error.hpp"
#include "sloworbit/theorems.hpp"
#include "sloworbit/verification.hpp"
#include "support.hpp"

using namespace sloworbit;

namespace {

const SlowOrbitWitness& reference_witness() {
  static const SlowOrbitWitness w =
      theorem1_construct(build_shift_model(400.0, 4000), {5.0, 10.0, 20.0}, 3, TimeGrid(200.0, 0.1));
  return w;
}

}  // namespace

TEST_CASE("backward estimates") {
  const auto minus = build_dense_model(-CMatrix::Identity(2, 2), "minus-identity");
  const TimeGrid tg(5.0, 0.1);
  for (auto mode : {BackwardMode::Global, BackwardMode::UnitWindow}) {
    const auto r = check_backward_estimate(minus, tg, mode, 4);
    CHECK(r.c == doctest::Approx(1.0));
    CHECK(r.pass);
    CHECK(r.worst_slack >= 0.0);
  }
  const auto shift = build_shift_model(100.0, 1000);
  const auto g = check_backward_estimate(shift, TimeGrid(40.0, 0.1), BackwardMode::Global, 4);
  CHECK(g.c == doctest::Approx(1.0));
  CHECK(std::abs(g.worst_slack) < 1e-12);
  CHECK(g.c_side == "lower");

  const auto z = build_zabczyk_model(12);
  const auto w = check_backward_estimate(z, TimeGrid(20.0, 0.1), BackwardMode::UnitWindow, 6);
  CHECK(w.worst_slack >= -1e-9);
  CHECK(w.c_side == "exact");
  CHECK(check_backward_estimate(build_gvw_model(8.0, 800), TimeGrid(4.0, 0.01), BackwardMode::Global, 4).pass);
  CHECK_THROWS_AS(check_backward_estimate(z, TimeGrid(2.0, 0.1), BackwardMode::Global, 0), Error);
}

TEST_CASE("eigenvector deviation bound") {
  CMatrix a(1, 1);
  a(0, 0) = Complex(0, 1);
  const auto rot = build_dense_model(a, "rotation");
  const auto exact = check_eq2_bound(rot, CVector::Ones(1), 1.0, 3.0, 0.1);
  CHECK(exact.lhs < 1e-14);
  CHECK(exact.pass);

  CMatrix s2 = CMatrix::Zero(2, 2);
  s2(0, 1) = 1.0;
  CVector x(2);
  x << 0.0, 1.0;
  const auto r = check_eq2_bound(build_dense_model(s2, "s2"), x, 0.0, 1.0, 0.01);
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.sup_norm == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-9));
  CHECK(r.pass);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int passed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    CMatrix m = testing::random_matrix(6, rng) * 0.4;
    m -= (m + m.adjoint()) * 0.5;  // skew part
    m -= 0.2 * CMatrix::Identity(6, 6);
    const auto model = build_dense_model(m, "dissipative");
    passed += check_eq2_bound(model, testing::random_vector(6, rng), 4 * u(rng) - 2, 3 * u(rng), 0.01).pass;
  }
  CHECK(passed == 100);
}

TEST_CASE("witness verification passes on constructions and catches corruption") {
  const auto m = build_shift_model(400.0, 4000);
  const TimeGrid tg(200.0, 0.1);
  const auto& w = reference_witness();
  const auto audit = verify_witness(w, m, tg);
  CHECK(audit.pass);
  for (const auto& t : audit.tails) CHECK(t.pass);

  // Extend U_1 past where the pairing is large.
  auto bad = w;
  auto idx = bad.levels[0].U.indices();
  const std::size_t far = 1900;
  idx.push_back(far);
  bad.levels[0].U = TimeSet(idx, tg.dt());
  const auto failed = audit_witness(bad, m, tg);
  CHECK_FALSE(failed.pass);
  CHECK(failed.first_failure_t == doctest::Approx(190.0));
  try {
    verify_witness(bad, m, tg);
    FAIL("expected a verification failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Verification);
    CHECK(std::string(e.what()).find("t = 190") != std::string::npos);
  }

  auto short_set = w;
  short_set.levels[1].U = short_set.levels[1].U.first_cells(50);
  CHECK_FALSE(audit_witness(short_set, m, tg).pass);
}

TEST_CASE("divergence ledger") {
  const auto m = build_shift_model(400.0, 4000);
  const TimeGrid tg(200.0, 0.1);
  const auto& w = reference_witness();
  const auto d = divergence_ledger(w, m, DivergenceSpec::identity(), tg);
  CHECK(d.lower_bound == doctest::Approx(2.55001).epsilon(1e-12));
  CHECK(d.pass);
  CHECK(d.partials.size() == tg.size());
  for (std::size_t k = 1; k < d.partials.size(); ++k) CHECK(d.partials[k].second >= d.partials[k - 1].second);

  const auto ind = divergence_ledger(w, m, DivergenceSpec::indicator(canonical_gamma(2)), tg);
  CHECK(ind.lower_bound >= w.levels[0].U.measure() + w.levels[1].U.measure() - 1e-12);
  CHECK(ind.pass);
}

TEST_CASE("weak L1 stability of the gvw model") {
  const auto gvw = build_gvw_model(8.0, 80000);
  const auto r = weak_l1_check(gvw, 5, 4.0, 1e-6);
  CHECK(r.pass);
  CHECK(r.max_tail == 0.0);
  CHECK(r.non_ues);
  CHECK(r.non_ues_ratio >= 0.9);
  CHECK_THROWS_AS(weak_l1_check(build_shift_model(100.0, 1000), 5, 50.0, 1e-6), Error);
}
