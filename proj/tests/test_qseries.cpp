#include <gtest/gtest.h>

#include <random>

#include "ellgen/qy_series.hpp"
#include "ellgen/ratfun_y.hpp"
#include "ellgen/modforms.hpp"

using namespace ellgen;

namespace {

rational r(long n, long d = 1) { return make_rational(n, d); }

qy_series poly(std::int64_t qd, std::int64_t yd, std::int64_t qmax, std::vector<qy_series::term> t) {
  return qy_series::from_terms(qd, yd, qmax, std::move(t));
}

void expect_same(const qy_series& a, const qy_series& b) {
  const auto d = first_difference(a, b);
  EXPECT_FALSE(d) << "q=" << d->q << " y=" << d->y << " lhs=" << d->lhs << " rhs=" << d->rhs;
}

// Small random series with integer q and half-integer y exponents.
qy_series random_series(std::mt19937_64& rng, std::int64_t qmax) {
  std::uniform_int_distribution<int> q(0, static_cast<int>(qmax)), y(-3, 3), c(-5, 5), n(1, 6);
  std::vector<qy_series::term> t;
  const int k = n(rng);
  for (int i = 0; i < k; ++i) t.push_back({q(rng), y(rng), r(c(rng))});
  return poly(1, 2, qmax, t);
}

}  // namespace

TEST(Rational, CanonicalForm) {
  EXPECT_EQ(to_string(make_rational(6, -4)), "-3/2");
  EXPECT_EQ(to_string(parse_rational("10/4")), "5/2");
  EXPECT_THROW(make_rational(1, 0), error);
  EXPECT_THROW(parse_rational("1/0"), error);
  EXPECT_EQ(binomial(r(-2), 3), r(-4));
}

TEST(CheckedInt, OverflowTraps) {
  checked_int a(std::numeric_limits<std::int64_t>::max());
  EXPECT_THROW(a += checked_int(1), error);
  checked_int b(1LL << 40);
  EXPECT_THROW(b *= checked_int(1LL << 40), error);
}

TEST(QYSeries, AddCancels) {
  const auto a = poly(1, 1, 5, {{0, 0, r(1)}, {1, 0, r(1)}});
  const auto b = poly(1, 1, 5, {{0, 0, r(1)}, {1, 0, r(-1)}});
  expect_same(a + b, qy_series::constant(r(2), 5));
  EXPECT_EQ((a + b).size(), 1u);
}

TEST(QYSeries, HalfIntegerYExponents) {
  const auto s = poly(1, 2, 0, {{0, 1, r(1)}, {0, -1, r(1)}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.terms()[0].y, -1);
  EXPECT_EQ(s.terms()[1].y, 1);
  EXPECT_EQ(s.coeff_at(0, r(1, 2)), r(1));
}

TEST(QYSeries, MixedDenominatorsRescale) {
  const auto a = qy_series::monomial(r(1), 1, 8, 1, 2, 80);
  const auto b = qy_series::monomial(r(1), 1, 3, 1, 1, 30);
  const auto p = a * b;
  EXPECT_EQ(p.q_den(), 24);
  EXPECT_EQ(p.coeff_at(r(11, 24), r(3, 2)), r(1));
}

TEST(QYSeries, TelescopingProduct) {
  const int N = 7;
  std::vector<qy_series::term> t;
  for (int k = 0; k <= N; ++k) t.push_back({k, 0, r(1)});
  const auto geo = poly(1, 1, N, t);
  expect_same(times_one_minus<rational>(geo, r(1), 1, 0), qy_series::constant(r(1), N));
}

TEST(QYSeries, SquareOfHalfPowers) {
  const auto s = poly(1, 2, 3, {{0, 1, r(1)}, {0, -1, r(-1)}});
  expect_same(s * s, poly(1, 1, 3, {{0, 1, r(1)}, {0, 0, r(-2)}, {0, -1, r(1)}}));
}

TEST(QYSeries, TruncationIsTracked) {
  const auto a = poly(1, 1, 4, {{0, 0, r(1)}, {2, 0, r(1)}});
  const auto b = poly(1, 1, 6, {{1, 0, r(1)}});
  EXPECT_EQ((a * b).q_max(), 5);  // min(4 + 1, 6 + 0)
  EXPECT_EQ((a + b).q_max(), 4);
}

TEST(QYSeries, Reciprocals) {
  const int N = 6;
  const auto one_minus_q = poly(1, 1, N, {{0, 0, r(1)}, {1, 0, r(-1)}});
  const auto inv = recip(one_minus_q);
  for (int k = 0; k <= N; ++k) EXPECT_EQ(inv.coeff(k, 0), r(1));
  const auto y = qy_series::monomial(r(1), 0, 1, 1, 1);
  expect_same(recip(y), qy_series::monomial(r(1), 0, 1, -1, 1));
  const auto one_minus_yq = poly(1, 1, N, {{0, 0, r(1)}, {1, 1, r(-1)}});
  const auto g = recip(one_minus_yq);
  for (int j = 0; j <= N; ++j) EXPECT_EQ(g.coeff(j, j), r(1));
  const auto one_minus_y = poly(1, 1, N, {{0, 0, r(1)}, {0, 1, r(-1)}});
  EXPECT_THROW(recip(one_minus_y), error);
}

TEST(QYSeries, GoverGinverse) {
  const int N = 5;
  const auto g = big_g(N);
  const auto unit = divide(g, poly(1, 1, N, {{0, 0, r(1)}, {0, 1, r(-1)}}));
  expect_same(unit * recip(unit), qy_series::constant(r(1), N));
}

TEST(QYSeries, GeomFactorConventions) {
  const auto a = geom_factor(r(1), r(2), r(8));
  for (int j = 0; j <= 4; ++j) EXPECT_EQ(a.coeff_at(r(2 * j), r(j)), r(1));
  const auto b = geom_factor(r(1), r(-1), r(5));
  EXPECT_EQ(b.coeff_at(0, 0), r(0));
  for (int j = 1; j <= 5; ++j) EXPECT_EQ(b.coeff_at(r(j), r(-j)), r(-1));
  const auto c = geom_factor(r(0), r(1), r(4));
  for (int j = 0; j <= 4; ++j) EXPECT_EQ(c.coeff_at(r(j), 0), r(1));
  EXPECT_THROW(geom_factor(r(1), r(0), r(3)), error);
}

TEST(QYSeries, GeomFactorTimesFactorIsOne) {
  const int N = 9;
  for (int a : {-2, 0, 1, 3})
    for (int k : {-3, -1, 1, 2}) {
      const auto g = geom_factor_units<rational>(1, 1, a, k, N);
      // For k < 0 the shifted copy lives at q >= 0 as well, so no scratch space is needed.
      const auto back = (g - g.shifted(k, a)).truncated(N - std::abs(k));
      expect_same(back, qy_series::constant(r(1), N - std::abs(k)));
    }
}

TEST(QYSeries, Substitute) {
  const auto a = poly(1, 1, 4, {{0, 0, r(1)}, {1, 1, r(1)}});
  const auto s = substitute(a, 2, 3);
  expect_same(s, poly(1, 1, 8, {{0, 0, r(1)}, {2, 3, r(1)}}));
  EXPECT_EQ(s.q_max(), 8);
  const int N = 6;
  const auto th = theta_hat(N);
  expect_same(substitute(th, 1, -1), th.scaled(r(-1)));
  qy_series g2 = qy_series::constant(r(1), 2 * N);
  for (int k = 1; 2 * k <= 2 * N + 2; ++k) {
    g2 = times_one_minus<rational>(g2, r(1), 2 * (k - 1), 2);
    g2 = times_one_minus<rational>(g2, r(1), 2 * k, -2);
    g2 = over_one_minus<rational>(over_one_minus<rational>(g2, r(1), 2 * k, 0), r(1), 2 * k, 0);
  }
  expect_same(substitute(big_g(N), 2, 2), g2);
}

TEST(QYSeries, SubstituteComposes) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i) {
    const auto a = random_series(rng, 4);
    expect_same(substitute(substitute(a, 2, -1), 3, 2), substitute(a, 6, -2));
  }
}

TEST(QYSeries, ShiftYByQ) {
  const auto y = qy_series::monomial(r(1), 0, 1, 1, 1, 4);
  const auto s = shift_y_by_q(y, 0);
  EXPECT_EQ(s.coeff(1, 1), r(1));
  const auto yinv = qy_series::monomial(r(1), 0, 1, -1, 1, 4);
  const auto t = shift_y_by_q(yinv, -1);
  EXPECT_EQ(t.coeff(-1, -1), r(1));
}

TEST(QYSeries, EvalY) {
  const auto p = poly(1, 1, 0, {{0, 0, r(1)}, {0, 1, r(1)}, {0, 2, r(1)}});
  EXPECT_EQ(eval_y(p, r(1)).coeff(0, 0), r(3));
  const auto h = poly(1, 2, 0, {{0, 1, r(1)}, {0, -1, r(1)}});
  EXPECT_EQ(eval_y_root(h, r(-1)).coeff(0, 0), r(-2));
  EXPECT_THROW(eval_y(h, r(-1)), error);
  const int N = 6;
  // G(-1, q) = prod (1 + q^(k-1)) (1 + q^k) / (1 - q^k)^2
  qy_series expect = qy_series::constant(r(1), N);
  for (int k = 1; k <= N + 1; ++k) {
    expect = times_one_minus<rational>(expect, r(-1), k - 1, 0);
    if (k > N) break;
    expect = times_one_minus<rational>(expect, r(-1), k, 0);
    expect = over_one_minus<rational>(expect, r(1), k, 0);
    expect = over_one_minus<rational>(expect, r(1), k, 0);
  }
  expect_same(eval_y(big_g(N), r(-1)), expect);
}

TEST(QYSeries, RingAxiomsOnRandomSeries) {
  std::mt19937_64 rng(20240101);
  for (int i = 0; i < 60; ++i) {
    const auto a = random_series(rng, 5), b = random_series(rng, 4), c = random_series(rng, 6);
    expect_same((a + b) + c, a + (b + c));
    expect_same(a * (b + c), a * b + a * c);
    expect_same(a * b, b * a);
    expect_same((a * b) * c, a * (b * c));
  }
}

TEST(QYSeries, ReciprocalProperty) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 40; ++i) {
    auto a = random_series(rng, 5).truncated(5);
    std::vector<qy_series::term> t{{0, 1, r(std::uniform_int_distribution<int>(1, 3)(rng))}};
    for (const auto& x : a.terms())
      if (x.q > 0) t.push_back(x);
    a = poly(1, 2, 5, t);
    expect_same(a * recip(a), qy_series::constant(r(1), 5));
  }
}

TEST(RatFunY, ReducesCommonFactors) {
  const auto one_minus_y = poly(1, 1, 3, {{0, 0, r(1)}, {0, 1, r(-1)}});
  const auto num = one_minus_y * one_minus_y * poly(1, 1, 3, {{0, 0, r(2)}, {1, 1, r(1)}});
  const ratfun_y f(num, 3);
  const auto red = f.reduced();
  EXPECT_EQ(red.pole_order(), 1);
  const ratfun_y g(num, 2);
  EXPECT_EQ(g.reduced().pole_order(), 0);
  expect_same(g.reduced().numerator(), poly(1, 1, 3, {{0, 0, r(2)}, {1, 1, r(1)}}));
}
