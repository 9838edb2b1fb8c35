#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sloworbit/error.hpp"
#include "sloworbit/grid_function.hpp"
#include "sloworbit/timeset.hpp"
#include "support.hpp"

using namespace sloworbit;

TEST_CASE("time grid points and alignment") {
  TimeGrid tg(2.0, 0.1);
  CHECK(tg.size() == 21);
  CHECK(tg[20] == doctest::Approx(2.0));
  for (std::size_t k = 1; k < tg.size(); ++k) CHECK(tg[k] - tg[k - 1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(tg.index_of(0.7) == 7);
  CHECK_THROWS_AS(tg.index_of(0.75), Error);
  CHECK(tg.ceil_index(0.75) == 8);
  CHECK_THROWS_AS(TimeGrid(1.0, 0.0), Error);
}

TEST_CASE("space grid quadrature weights sum to s_max") {
  auto g = make_space_grid(10.0, 37);
  double sum = 0.0;
  for (double w : g->quad_weights()) {
    CHECK(w > 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(g->h() == doctest::Approx(10.0 / 37));
}

TEST_CASE("norms on small grids") {
  auto g = make_space_grid(2.0, 2);
  CVector one = CVector::Ones(2);
  CHECK(norm(one, *g, NormSpec::lp(1.0)) == doctest::Approx(2.0));

  // Indicator bump under the GVW norm: sum of a weighted L1 and an L2 quadrature.
  auto fine = make_space_grid(8.0, 800);
  CVector bump = CVector::Zero(800);
  for (int i = 200; i < 300; ++i) bump[i] = 1.0;
  const auto spec = NormSpec::intersection({NormSpec::weighted_l1(WeightTag::Exp), NormSpec::lp(2.0)});
  double l1 = 0.0, l2 = 0.0;
  for (int i = 200; i < 300; ++i) {
    l1 += std::exp(0.01 * i) * 0.01;
    l2 += 0.01;
  }
  CHECK(norm(bump, *fine, spec) == doctest::Approx(l1 + std::sqrt(l2)).epsilon(1e-12));

  std::mt19937_64 rng(7);
  const CVector x = testing::random_vector(800, rng);
  for (const auto& s : {NormSpec::euclidean(), NormSpec::lp(1.0), NormSpec::lp(3.5), spec}) {
    const Complex a(-1.7, 0.4);
    CHECK(norm(CVector(a * x), *fine, s) == doctest::Approx(std::abs(a) * norm(x, *fine, s)).epsilon(1e-12));
    CHECK(norm(CVector::Zero(800), *fine, s) == 0.0);
  }
  CHECK_THROWS_AS(NormSpec::lp(0.5).validate(), Error);
  CHECK_THROWS_AS(NormSpec::intersection({}).validate(), Error);
}

TEST_CASE("pairing is bilinear and matches a hand-rolled sum") {
  auto g = testing::unit_grid(4);
  std::mt19937_64 rng(1);
  const CVector a = testing::random_vector(4, rng), b = testing::random_vector(4, rng), c = testing::random_vector(4, rng);
  Complex oracle{};
  for (int i = 0; i < 4; ++i) oracle += a[i] * b[i];
  const DualGridFunction xp(a, g, NormSpec::euclidean());
  const GridFunction x(b, g, NormSpec::euclidean());
  CHECK(std::abs(pairing(xp, x) - oracle) < 1e-14);
  CHECK(pairing(xp, GridFunction::zero(g, NormSpec::euclidean())) == Complex{});
  const Complex s(0.3, -2.0), t(1.1, 0.5);
  const DualGridFunction mix(s * a + t * c, g, NormSpec::euclidean());
  const Complex lhs = pairing(mix, x);
  const Complex rhs = s * pairing(xp, x) + t * pairing(DualGridFunction(c, g, NormSpec::euclidean()), x);
  CHECK(std::abs(lhs - rhs) < 1e-12);
  CHECK_THROWS_AS(pairing(xp, GridFunction::zero(testing::unit_grid(5), NormSpec::euclidean())), Error);
}

TEST_CASE("duality bound and norming functionals") {
  auto g = make_space_grid(8.0, 200);
  std::mt19937_64 rng(2);
  const auto gvw = NormSpec::intersection({NormSpec::weighted_l1(WeightTag::Exp), NormSpec::lp(2.0)});
  for (const auto& spec : {NormSpec::euclidean(), NormSpec::lp(1.0), NormSpec::lp(2.5), NormSpec::lp(6.0), gvw}) {
    for (int trial = 0; trial < 20; ++trial) {
      const CVector f = testing::random_vector(200, rng), x = testing::random_vector(200, rng);
      const double bound = dual_norm(f, *g, spec) * norm(x, *g, spec);
      CHECK(std::abs(pairing_raw(f, x, g->quad_weights())) <= bound * (1 + 1e-9));
    }
    const GridFunction y(testing::random_vector(200, rng), g, spec);
    const GridFunction unit = y.with_values(y.values / norm(y));
    const auto yp = dual_vector(unit);
    CHECK(std::abs(pairing(yp, unit) - 1.0) < 1e-9);
    CHECK(dual_norm(yp) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("dual vectors of simple Euclidean vectors") {
  auto g = testing::unit_grid(2);
  CVector e1(2);
  e1 << 1.0, 0.0;
  const auto d1 = dual_vector(GridFunction(e1, g, NormSpec::euclidean()));
  CHECK(std::abs(d1.values[0] - 1.0) < 1e-15);
  CHECK(std::abs(d1.values[1]) < 1e-15);

  CVector y(2);
  y << 0.6, Complex(0.0, 0.8);
  const auto d = dual_vector(GridFunction(y, g, NormSpec::euclidean()));
  CHECK(std::abs(pairing(d, GridFunction(y, g, NormSpec::euclidean())) - 1.0) < 1e-12);
  CHECK(d.values.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(dual_vector(GridFunction::zero(g, NormSpec::euclidean())), Error);
}

TEST_CASE("L1 dual norm of a sign pattern matches random search") {
  auto g = make_space_grid(10.0, 50);
  CVector y = CVector::Zero(50);
  for (int i = 5; i < 12; ++i) y[i] = 1.0;
  for (int i = 30; i < 40; ++i) y[i] = -2.0;
  const GridFunction gy(y, g, NormSpec::lp(1.0));
  const auto yp = dual_vector(gy.with_values(y / norm(gy)));
  std::mt19937_64 rng(3);
  double best = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    CVector x = testing::random_vector(50, rng);
    x /= norm(x, *g, NormSpec::lp(1.0));
    best = std::max(best, std::abs(pairing_raw(yp.values, x, g->quad_weights())));
  }
  CHECK(best <= dual_norm(yp) + 1e-12);
  // A single-cell spike attains the sup norm of the functional.
  CHECK(dual_norm(yp) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid function CSV round trip") {
  auto g = make_space_grid(3.0, 7);
  std::mt19937_64 rng(4);
  const CVector v = testing::random_vector(7, rng);
  std::stringstream s;
  write_csv(s, v, *g);
  CHECK(s.str().rfind("s,re,im\n", 0) == 0);
  const CVector back = read_csv(s, *g);
  CHECK(back == v);
  std::stringstream bad("s,re,im\n0,1\n");
  CHECK_THROWS_AS(read_csv(bad, *g), Error);
}

TEST_CASE("time sets count cells exactly") {
  const auto u = TimeSet({7, 3, 4, 5, 3, 10}, 0.5);
  CHECK(u.cells() == 5);
  CHECK(u.measure() == doctest::Approx(2.5));
  const auto iv = u.intervals();
  REQUIRE(iv.size() == 3);
  CHECK(iv[0].first == doctest::Approx(1.5));
  CHECK(iv[0].second == doctest::Approx(3.0));
  CHECK(TimeSet::from_intervals(iv, 0.5).indices() == u.indices());
  CHECK(u.first_cells(2).indices() == std::vector<std::size_t>{3, 4});
  CHECK(u.right_end() == doctest::Approx(5.5));
  CHECK(u.united(TimeSet::range(0, 2, 0.5)).cells() == 7);
  CHECK(u.contains(7));
  CHECK_FALSE(u.contains(6));
}
