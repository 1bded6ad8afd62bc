#include <gtest/gtest.h>

#include <random>

#include "ellgen/genus_engine.hpp"
#include "ellgen/symprod.hpp"

using namespace ellgen;

namespace {

rational r(long n, long d = 1) { return make_rational(n, d); }

void expect_same(const qy_series& a, const qy_series& b) {
  const auto d = first_difference(a, b);
  EXPECT_FALSE(d) << "q=" << d->q << " y=" << d->y << " lhs=" << d->lhs << " rhs=" << d->rhs;
}

genus_coefficients point(std::int64_t q_order) {
  return genus_coefficients::from_series(qy_series::constant(r(1), q_order), 0);
}

genus_coefficients model_genus(const manifold_model& m, int N) {
  return genus_coefficients::from_series(elliptic_genus_model(m, N), m.dim());
}

}  // namespace

TEST(GenusCoefficients, Validation) {
  const auto g = point(4);
  EXPECT_EQ(g.q_order, 4);
  EXPECT_EQ(g.series.y_den(), 2);
  EXPECT_THROW(genus_coefficients::from_series(qy_series::constant(r(1)), 0), error);
  EXPECT_THROW(genus_coefficients::from_series(qy_series::constant(r(1, 2), 3), 0), error);
  EXPECT_THROW(genus_coefficients::from_series(qy_series::constant(r(1), 3), 1), error);
  EXPECT_THROW(genus_coefficients::from_series(qy_series::monomial(r(1), 1, 2, 0, 1, 4), 0), error);
}

TEST(Dmvv, PointGivesPartitionNumbers) {
  const int n = 10;
  const auto s = dmvv_product(point(n), n, 1);
  const long expect[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (int k = 0; k <= n; ++k) {
    EXPECT_EQ(s[k].coeff(0, 0), r(expect[k])) << "p^" << k;
    EXPECT_EQ(s[k].coeff(1, 0), r(0));
  }
}

TEST(Dmvv, FirstPowerIsInput) {
  const int N = 2;
  const auto k3 = model_genus(manifold_model::hypersurface(3, 4), 2 * N);
  const auto s = dmvv_product(k3, 2, N);
  expect_same(s[1], k3.series.truncated(N));
}

TEST(Dmvv, HilbertSchemeEulerNumbersOfK3) {
  const auto k3 = model_genus(manifold_model::hypersurface(3, 4), 3);
  const auto s = dmvv_product(k3, 3, 1);
  const long expect[] = {1, 24, 324, 3200};
  for (int n = 0; n <= 3; ++n) {
    const auto e = eval_y_root(s[n].reduced(), r(1));
    EXPECT_EQ(e.coeff(0, 0), r(expect[n])) << "p^" << n;
    EXPECT_EQ(e.coeff(1, 0), r(0));
  }
}

TEST(Dmvv, NeedsEnoughInputOrder) {
  try {
    dmvv_product(point(5), 3, 2);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::insufficient_input_order);
  }
  EXPECT_NO_THROW(dmvv_product(point(6), 3, 2));
}

TEST(SymProduct, SeriesFormEqualsPartitionSum) {
  const int N = 3, T = 4;
  for (const auto& m : {manifold_model::projective_space(1), manifold_model::projective_space(2),
                        manifold_model::hypersurface(3, 4)}) {
    const auto g = model_genus(m, N);
    const auto a = sym_product_series(g, T, N);
    const auto b = sym_product_direct(g.series, T, N);
    for (int n = 0; n <= T; ++n) expect_same(a[n], b[n]);
  }
}

TEST(SymProduct, RandomIntegralTables) {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> c(-3, 3), q(0, 3), y(-2, 1), k(1, 5);
  const int N = 3, T = 4;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<qy_series::term> t;
    const int terms = k(rng);
    for (int i = 0; i < terms; ++i) t.push_back({q(rng), 2 * y(rng) + 1, r(c(rng))});
    const auto g = genus_coefficients::from_series(qy_series::from_terms(1, 2, N, t), 1);
    const auto a = sym_product_series(g, T, N);
    const auto b = sym_product_direct(g.series, T, N);
    for (int n = 0; n <= T; ++n) expect_same(a[n], b[n]);
  }
}

TEST(SymProduct, ChiYTowerOfP1IsProjectiveSpaces) {
  const int T = 5;
  const auto s = sym_product_series(model_genus(manifold_model::projective_space(1), 0), T, 0);
  const auto tower = chi_y_tower(s, 1);
  for (int n = 0; n <= T; ++n) EXPECT_EQ(tower[n], chi_y_model(manifold_model::projective_space(n))) << n;
}

TEST(ChiY, SymmetricSquareOfK3) {
  const auto s = chi_y_symprod({2, -20, 2}, 2);
  const long expect[] = {3, -40, 214, -40, 3};
  for (int p = 0; p <= 4; ++p) EXPECT_EQ(s[2].coeff(0, p), r(expect[p]));
}

TEST(ChiY, AgreesWithTower) {
  const int T = 4;
  const auto k3 = model_genus(manifold_model::hypersurface(3, 4), 0);
  const auto tower = chi_y_tower(sym_product_series(k3, T, 0), 2);
  const auto direct = chi_y_symprod({2, -20, 2}, T);
  for (int n = 0; n <= T; ++n)
    for (int p = 0; p <= 2 * n; ++p) EXPECT_EQ(tower[n][p], direct[n].coeff(0, p)) << n << "," << p;
}

TEST(Specializations, MacdonaldAndZagier) {
  const auto m = macdonald_series(24, 3);
  EXPECT_EQ(m[2].coeff(0, 0), r(300));
  EXPECT_EQ(m[3].coeff(0, 0), r(2600));
  // P^1: sigma = 0, e = 2, and Sym^n P^1 = P^n has signature 1 or 0
  const auto z = zagier_series(0, 2, 6);
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(z[n].coeff(0, 0), r(n % 2 == 0 ? 1 : 0)) << n;
  try {
    zagier_series(1, 2, 3);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::parity_mismatch);
  }
}

TEST(Specializations, TowerEvaluations) {
  const int T = 6;
  const auto chi = chi_y_symprod({1, -1, 1}, T);  // P^2
  const auto mac = macdonald_series(3, T);
  const auto zag = zagier_series(1, 3, T);
  for (int n = 0; n <= T; ++n) {
    std::vector<rational> p;
    for (int k = 0; k <= 2 * n; ++k) p.push_back(chi[n].coeff(0, k));
    EXPECT_EQ(eval_poly(p, r(-1)), mac[n].coeff(0, 0)) << n;
    EXPECT_EQ(eval_poly(p, r(1)), zag[n].coeff(0, 0)) << n;
  }
}
