#include <doctest.h>

#include "sloworbit/choose_four.hpp"
#include "sloworbit/error.hpp"
#include "sloworbit/kernels.hpp"
#include "sloworbit/zoo.hpp"
#include "support.hpp"

using namespace sloworbit;

TEST_CASE("degenerate tie picks ++") {
  const auto m = build_shift_model(20.0, 200);
  std::mt19937_64 rng(31);
  const CVector x = testing::random_vector(200, rng), xp = testing::random_vector(200, rng);
  const CVector zero = CVector::Zero(200);
  const auto u = TimeSet::range(0, 10, 0.1);
  const auto r = choose_four(x, xp, zero, zero, u, 1e-9, *m.evaluator);
  CHECK(r.signs == SignPair{1, 1});
  CHECK(r.qualifying_cells[0] == r.qualifying_cells[3]);
}

TEST_CASE("bilinearity identity behind the pigeonhole") {
  const auto m = build_zabczyk_model(6);
  std::mt19937_64 rng(32);
  const auto n = static_cast<Eigen::Index>(m.grid()->n());
  const CVector xl = testing::random_vector(n, rng), xlp = testing::random_vector(n, rng);
  const CVector c = testing::random_vector(n, rng), cp = testing::random_vector(n, rng);
  const std::vector<std::size_t> idx{0, 5, 9, 20};
  const auto ev = [&](const CVector& a, const CVector& b) { return weak_orbit_at(*m.evaluator, a, b, idx, 0.1); };
  const auto pp = ev(xlp + cp, xl + c), pq = ev(xlp + cp, xl - c), qp = ev(xlp - cp, xl + c), qq = ev(xlp - cp, xl - c);
  const auto center = ev(cp, c);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Complex lhs = 4.0 * center[j];
    const Complex rhs = pp[j] - pq[j] - qp[j] + qq[j];
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)) * 10);
  }
}

TEST_CASE("synthetic pigeonhole against exhaustive evaluation") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double gamma = 0.05;
  std::array<std::vector<double>, 4> vals;
  for (int t = 0; t < 100; ++t) {
    const Complex a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng));
    const Complex e = std::polar(gamma * (1 + std::abs(u(rng))), 3.0 * u(rng));
    for (std::size_t q = 0; q < 4; ++q) {
      vals[q].push_back(std::abs(a + double(kSignOrder[q].primal) * b + double(kSignOrder[q].dual) * c +
                                 double(kSignOrder[q].primal * kSignOrder[q].dual) * e));
    }
  }
  const auto ut = TimeSet::range(40, 140, 0.1);
  const auto r = choose_four_from_values(vals, ut, gamma);
  // Exhaustive oracle: count qualifying points per pair, first maximum wins.
  std::size_t best = 0, best_q = 0;
  for (std::size_t q = 0; q < 4; ++q) {
    std::size_t cnt = 0;
    for (double v : vals[q]) cnt += v >= gamma ? 1 : 0;
    if (cnt > best) best = cnt, best_q = q;
  }
  CHECK(r.U.cells() == best);
  CHECK(r.signs == kSignOrder[best_q]);
  CHECK(r.U.cells() >= 25);
  for (auto k : r.U.indices()) CHECK(ut.contains(k));
}

TEST_CASE("no qualifying pair is a construction failure") {
  std::array<std::vector<double>, 4> vals{std::vector<double>(5, 0.0), std::vector<double>(5, 0.0),
                                          std::vector<double>(5, 0.0), std::vector<double>(5, 0.0)};
  try {
    choose_four_from_values(vals, TimeSet::range(0, 5, 1.0), 0.1);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstructionFailure);
  }
}

TEST_CASE("sign pair text") {
  CHECK(SignPair{1, -1}.str() == "+-");
  CHECK(SignPair::parse("-+") == SignPair{-1, 1});
  CHECK_THROWS_AS(SignPair::parse("+"), Error);
}
