#include <gtest/gtest.h>

#include "ellgen/modforms.hpp"

using namespace ellgen;

namespace {

rational r(long n, long d = 1) { return make_rational(n, d); }

void expect_same(const qy_series& a, const qy_series& b) {
  const auto d = first_difference(a, b);
  EXPECT_FALSE(d) << "q=" << d->q << " y=" << d->y << " lhs=" << d->lhs << " rhs=" << d->rhs;
}

}  // namespace

TEST(ThetaHat, LowestTerm) {
  const auto th = theta_hat(3);
  EXPECT_EQ(th.q_den(), 8);
  EXPECT_EQ(th.coeff_at(r(1, 8), r(1, 2)), r(1));
  EXPECT_EQ(th.coeff_at(r(1, 8), r(-1, 2)), r(-1));
  EXPECT_EQ(th.q_valuation(), 1);
}

TEST(ThetaHat, TripleProduct) {
  for (int N : {0, 1, 5, 30}) expect_same(theta_hat(N), theta_hat_sum_form(N));
}

TEST(ThetaHat, Odd) { expect_same(substitute(theta_hat(10), 1, -1), theta_hat(10).scaled(r(-1))); }

TEST(Eta, DeltaCoefficients) {
  const auto d = delta(5);
  const long expect[] = {0, 1, -24, 252, -1472, 4830};
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(d.coeff(n, 0), r(expect[n])) << "q^" << n;
}

TEST(Eta, E4Coefficients) {
  const auto e = eisenstein_e4(3);
  EXPECT_EQ(e.coeff(0, 0), r(1));
  EXPECT_EQ(e.coeff(1, 0), r(240));
  EXPECT_EQ(e.coeff(2, 0), r(2160));
  EXPECT_EQ(e.coeff(3, 0), r(6720));
}

TEST(Eta, EtaCubedFromThetaDerivative) {
  const int N = 20;
  const auto e3 = eta_power(3, N);
  expect_same(theta_hat_x_linear(N), e3);
  // q^(1/8) (1 - 3q + 5q^3 - 7q^6 + 9q^10 ...)
  EXPECT_EQ(e3.coeff_at(r(1, 8), 0), r(1));
  EXPECT_EQ(e3.coeff_at(r(9, 8), 0), r(-3));
  EXPECT_EQ(e3.coeff_at(r(25, 8), 0), r(5));
  EXPECT_EQ(e3.coeff_at(r(49, 8), 0), r(-7));
  EXPECT_EQ(e3.coeff_at(r(17, 8), 0), r(0));
}

TEST(BigG, FirstRows) {
  const auto g = big_g(3);
  // q^0: 1 - y
  EXPECT_EQ(g.coeff(0, 0), r(1));
  EXPECT_EQ(g.coeff(0, 1), r(-1));
  // q^1: (1 - y)(2 - y - 1/y) = 2 - 3y + y^2 - 1/y + 1
  EXPECT_EQ(g.coeff(1, -1), r(-1));
  EXPECT_EQ(g.coeff(1, 0), r(3));
  EXPECT_EQ(g.coeff(1, 1), r(-3));
  EXPECT_EQ(g.coeff(1, 2), r(1));
}

TEST(WeakJacobi, LeadingTerms) {
  const auto f = weak_jacobi_basis(4);
  EXPECT_EQ(f.phi_m2_1.y_den(), 1);
  EXPECT_EQ(f.phi_m2_1.q_den(), 1);
  EXPECT_EQ(f.phi_m2_1.coeff(0, 1), r(1));
  EXPECT_EQ(f.phi_m2_1.coeff(0, 0), r(-2));
  EXPECT_EQ(f.phi_m2_1.coeff(0, -1), r(1));
  EXPECT_EQ(f.phi_m2_1.coeff(1, 2), r(-2));
  EXPECT_EQ(f.phi_m2_1.coeff(1, 1), r(8));
  EXPECT_EQ(f.phi_m2_1.coeff(1, 0), r(-12));
  EXPECT_EQ(f.phi_0_1.coeff(0, 1), r(1));
  EXPECT_EQ(f.phi_0_1.coeff(0, 0), r(10));
  EXPECT_EQ(f.phi_0_1.coeff(0, -1), r(1));
  EXPECT_EQ(f.phi_0_1.coeff(1, 2), r(10));
  EXPECT_EQ(f.phi_0_1.coeff(1, 1), r(-64));
  EXPECT_EQ(f.phi_0_1.coeff(1, 0), r(108));
  EXPECT_TRUE(f.phi_10_1.row(0).empty());
  EXPECT_TRUE(f.phi_12_1.row(0).empty());
}

TEST(WeakJacobi, TransformationLaws) {
  const int N = 12;
  const auto f = weak_jacobi_basis(N);
  for (const auto* phi : {&f.phi_m2_1, &f.phi_0_1, &f.phi_10_1, &f.phi_12_1}) {
    EXPECT_FALSE(elliptic_law_failure(*phi, 1, 1));
    EXPECT_FALSE(y_inversion_failure(*phi, 1));
    EXPECT_FALSE(negative_q_failure(*phi));
  }
  const auto th = theta_hat(N);
  EXPECT_FALSE(elliptic_law_failure(th, r(1, 2), -1));
  EXPECT_TRUE(elliptic_law_failure(th, r(1, 2), 1));
}

TEST(WeakJacobi, LawDetectsPerturbation) {
  auto phi = weak_jacobi_basis(6).phi_0_1;
  phi = phi + qy_series::monomial(r(1), 3, 1, 0, 1, 6);
  const auto d = elliptic_law_failure(phi, 1, 1);
  ASSERT_TRUE(d);
}

TEST(CharSeries, QZeroRow) {
  const auto q = two_var_char_series(2, 1);
  // Q(0) = y^(-1/2) - y^(1/2); the x-linear term is (y^(-1/2) + y^(1/2)) / 2
  EXPECT_EQ(q[0].coeff_at(0, r(-1, 2)), r(1));
  EXPECT_EQ(q[0].coeff_at(0, r(1, 2)), r(-1));
  EXPECT_EQ(q[1].coeff_at(0, r(-1, 2)), r(1, 2));
  EXPECT_EQ(q[1].coeff_at(0, r(1, 2)), r(1, 2));
}

TEST(Normalization, DegreeZeroIsOne) { expect_same(normalization_factor(0, 4, 10), qy_series::constant(r(1), 4)); }

TEST(Normalization, InvertsTheta) {
  const int N = 3;
  const std::int64_t ylim = 12;
  const auto f = normalization_factor(1, N, ylim);
  // f * theta_hat = -eta^3 inside the certified y window
  const auto lhs = (f * theta_hat(N)).y_truncated(ylim - 2);
  expect_same(lhs, eta_power(3, N).scaled(r(-1)));
}

TEST(ClosedForms, Threefold) {
  expect_same(threefold_formula(0, 4), qy_series::zero(1, 2, 4));
  const int N = 5;
  const auto th = theta_hat(N + 1);
  const auto ratio = divide(substitute(th, 1, 2), th).truncated(8 * N).reduced();
  expect_same(threefold_formula(r(-200), N), ratio.scaled(r(-100)));
}

TEST(ClosedForms, FourfoldIsWeakJacobiIndexTwo) {
  const int N = 4;
  const auto f = fourfold_formula(2, 2610, N);
  EXPECT_FALSE(elliptic_law_failure(f, 2, 1));
  EXPECT_FALSE(y_inversion_failure(f, 1));
}
