#include <gtest/gtest.h>

#include "ellgen/genus_engine.hpp"
#include "ellgen/toric.hpp"

using namespace ellgen;

namespace {

rational r(long n, long d = 1) { return make_rational(n, d); }

void expect_same(const qy_series& a, const qy_series& b) {
  const auto d = first_difference(a, b);
  EXPECT_FALSE(d) << "q=" << d->q << " y=" << d->y << " lhs=" << d->lhs << " rhs=" << d->rhs;
}

chern_poly<rational> poly(std::initializer_list<std::pair<chern_monomial, rational>> xs) {
  chern_poly<rational> p;
  for (const auto& [m, c] : xs) p[m] = c;
  return p;
}

const manifold_model P1 = manifold_model::projective_space(1);
const manifold_model P2 = manifold_model::projective_space(2);
const manifold_model K3 = manifold_model::hypersurface(3, 4);
const manifold_model Quintic = manifold_model::hypersurface(4, 5);

}  // namespace

TEST(MultiplicativeSequence, Todd) {
  const auto t = sequence_from_series(todd_series(3), 3);
  EXPECT_EQ(t[1], poly({{{1, 0, 0}, r(1, 2)}}));
  EXPECT_EQ(t[2], poly({{{2, 0, 0}, r(1, 12)}, {{0, 1, 0}, r(1, 12)}}));
  EXPECT_EQ(t[3], poly({{{1, 1, 0}, r(1, 24)}}));
}

TEST(MultiplicativeSequence, LAndAhatInDegreeTwo) {
  // L_1 = p_1/3 and A-hat_1 = -p_1/24 with p_1 = c_1^2 - 2 c_2
  const auto l = sequence_from_series(l_series(2), 2);
  EXPECT_EQ(l[1], chern_poly<rational>{});
  EXPECT_EQ(l[2], poly({{{2, 0}, r(1, 3)}, {{0, 1}, r(-2, 3)}}));
  const auto a = sequence_from_series(ahat_series(2), 2);
  EXPECT_EQ(a[2], poly({{{2, 0}, r(-1, 24)}, {{0, 1}, r(1, 12)}}));
}

TEST(MultiplicativeSequence, TooShallowThrows) { EXPECT_THROW(sequence_from_series(todd_series(1), 3), error); }

TEST(ChernNumbers, Standard) {
  EXPECT_EQ(euler_number(P2), 3);
  EXPECT_EQ(euler_number(K3), 24);
  EXPECT_EQ(euler_number(Quintic), -200);
  EXPECT_EQ(euler_number(manifold_model::hypersurface(5, 6)), 2610);
  EXPECT_EQ(euler_number(manifold_model::product({P1, P1})), 4);
  const auto cn = chern_numbers(P2);
  EXPECT_EQ(cn.at({2, 0}), 9);
  EXPECT_EQ(cn.at({0, 1}), 3);
}

TEST(RationalGenera, ClassicalValues) {
  EXPECT_EQ(genus_of_model(todd_series(4), manifold_model::projective_space(4)), r(1));
  EXPECT_EQ(genus_of_model(l_series(2), P2), r(1));
  EXPECT_EQ(genus_of_model(l_series(3), K3), r(-16));
  EXPECT_EQ(genus_of_model(ahat_series(3), K3), r(2));
  EXPECT_EQ(genus_of_model(todd_series(3), K3), r(2));
  EXPECT_EQ(genus_of_model(todd_series(1), manifold_model::product({P1, P1})), r(1));
}

TEST(EllipticGenus, PointAndP1) {
  const auto pt = elliptic_genus_model(manifold_model::projective_space(0), 3);
  expect_same(pt, qy_series::constant(r(1), 3));
  const auto e = elliptic_genus_model(P1, 2);
  EXPECT_EQ(e.coeff_at(0, r(-1, 2)), r(1));
  EXPECT_EQ(e.coeff_at(0, r(1, 2)), r(1));
}

TEST(EllipticGenus, CalabiYauIndexLaw) {
  const int N = 4;
  const auto k3 = elliptic_genus_model(K3, N);
  EXPECT_FALSE(elliptic_law_failure(k3, 1, 1));
  // K3: 2 phi_{0,1}
  expect_same(k3, weak_jacobi_basis(N).phi_0_1.scaled(r(2)));
  const auto q = elliptic_genus_model(Quintic, N);
  EXPECT_FALSE(elliptic_law_failure(q, r(3, 2), -1));
}

TEST(EllipticGenus, Multiplicative) {
  const int N = 3;
  const auto prod = elliptic_genus_model(manifold_model::product({P1, P2}), N);
  expect_same(prod, elliptic_genus_model(P1, N) * elliptic_genus_model(P2, N));
}

TEST(ChiY, Calibration) {
  EXPECT_EQ(chi_y_model(P1), (std::vector<rational>{r(1), r(-1)}));
  EXPECT_EQ(chi_y_model(P2), (std::vector<rational>{r(1), r(-1), r(1)}));
  EXPECT_EQ(chi_y_model(K3), (std::vector<rational>{r(2), r(-20), r(2)}));
  const auto q = chi_y_model(Quintic);
  EXPECT_EQ(q, (std::vector<rational>{r(0), r(100), r(-100), r(0)}));
}

TEST(ChiY, EulerAndSignature) {
  const auto chi = chi_y_model(K3);
  rational e = 0, s = 0;
  for (std::size_t p = 0; p < chi.size(); ++p) {
    e += (p % 2 == 0 ? chi[p] : rational(-chi[p]));
    s += chi[p];
  }
  EXPECT_EQ(e, r(24));
  EXPECT_EQ(s, r(-16));
  EXPECT_EQ(chi[0], r(2));
}

TEST(HodgeChern, K3AndQuintic) {
  EXPECT_TRUE(hodge_chern_check(K3, {{1, 0, 1}, {0, 20, 0}, {1, 0, 1}}));
  EXPECT_TRUE(hodge_chern_check(Quintic, {{1, 0, 0, 1}, {0, 1, 101, 0}, {0, 101, 1, 0}, {1, 0, 0, 1}}));
  EXPECT_TRUE(hodge_chern_details(K3, {{1, 0, 1}, {0, 20, 0}, {1, 0, 1}}).chi_y_matches);
  EXPECT_THROW(hodge_chern_check(K3, {{1, 0, 1}, {1, 20, 0}, {1, 0, 1}}), error);
  EXPECT_THROW(hodge_chern_check(K3, {{1, 0}, {0, 1}}), error);
}

TEST(Lso, CharacteristicSeriesGenus) {
  const int N = 8;
  expect_same(lso_char_genus(P2, N), delta_series(N));
  EXPECT_EQ(lso_char_genus(manifold_model::projective_space(0), 2).coeff(0, 0), r(1));
}

TEST(Lso, SpecializedEllipticGenus) {
  const int N = 6;
  expect_same(lso_genus_model(P2, N), delta_series(N).scaled(r(-2)));
  expect_same(lso_genus_model(manifold_model::product({P1, P1}), N), qy_series::zero(1, 1, N));
  EXPECT_THROW(lso_genus_model(P1, N), error);
}
