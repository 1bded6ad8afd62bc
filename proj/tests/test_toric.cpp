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

fan make_fan(int rank, std::vector<ivec> rays, std::vector<cone> cones, bool complete = true) {
  fan f;
  f.rank = rank;
  f.rays = std::move(rays);
  f.max_cones = std::move(cones);
  f.complete = complete;
  return f;
}

fan p1() { return make_fan(1, {{1}, {-1}}, {{0}, {1}}); }
fan p2() { return make_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}); }
fan p1xp1() { return make_fan(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }
fan p112() { return make_fan(2, {{1, 0}, {-1, -2}, {0, 1}}, {{0, 1}, {1, 2}, {0, 2}}); }
fan f2() { return make_fan(2, {{1, 0}, {-1, -2}, {0, 1}, {0, -1}}, {{0, 3}, {1, 3}, {1, 2}, {0, 2}}); }
fan p3() {
  return make_fan(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
                  {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

const manifold_model P1 = manifold_model::projective_space(1);

}  // namespace

TEST(Fan, Validation) {
  EXPECT_NO_THROW(p2().validate());
  EXPECT_TRUE(p2().is_smooth());
  EXPECT_FALSE(p112().is_smooth());
  EXPECT_THROW(make_fan(2, {{2, 0}, {0, 1}}, {{0, 1}}, false).validate(), error);
  EXPECT_THROW(make_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}}).validate(), error);
  try {
    make_fan(2, {{1, 0}, {2, 1}, {1, 1}}, {{0, 1, 2}}, false).validate();
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::non_simplicial);
  }
}

TEST(Fan, AllConesIncludeFaces) {
  // 1 origin + 3 rays + 3 maximal cones
  EXPECT_EQ(p2().all_cones().size(), 7u);
  EXPECT_EQ(p3().all_cones().size(), 15u);
}

TEST(Fan, DualBasis) {
  const fan f = p112();
  const auto m = dual_basis(f, {0, 1});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], (qvec{r(1), r(-1, 2)}));
  EXPECT_EQ(m[1], (qvec{r(0), r(-1, 2)}));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(dot(m[i], f.rays[j]), r(i == j ? 1 : 0));
  EXPECT_THROW(dual_basis(f, {0}), error);
}

TEST(SmoothToric, MatchesChernRootOracle) {
  const int N = 4;
  expect_same(ell_smooth_toric(p1(), N).series, elliptic_genus_model(P1, N));
  expect_same(ell_smooth_toric(p2(), N).series, elliptic_genus_model(manifold_model::projective_space(2), N));
  expect_same(ell_smooth_toric(p1xp1(), N).series, elliptic_genus_model(manifold_model::product({P1, P1}), N));
  expect_same(ell_smooth_toric(p3(), 2).series, elliptic_genus_model(manifold_model::projective_space(3), 2));
}

TEST(SmoothToric, ChiYAtQZero) {
  const auto s = ell_smooth_toric(p2(), 0).series;
  EXPECT_EQ(chi_y_from_ell(s, 2), (std::vector<rational>{r(1), r(-1), r(1)}));
}

TEST(SmoothToric, PoleIsClearedAndSumStabilizes) {
  const int N = 3;
  for (const fan& f : {p1(), p2(), p1xp1()}) {
    const auto res = ell_smooth_toric(f, N);
    EXPECT_LE(res.aggregate_pole_order, f.rank);
    EXPECT_EQ(res.final_pole_order, 0);
    expect_same(toric_lattice_sum(f, N, false, {}, res.radius + 2).series, res.series);
  }
}

TEST(SmoothToric, RejectsSingularFan) {
  try {
    ell_smooth_toric(p112(), 2);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::non_smooth_fan);
  }
}

TEST(SmoothToric, RejectsIncompleteFan) {
  EXPECT_THROW(ell_smooth_toric(make_fan(2, {{1, 0}, {0, 1}}, {{0, 1}}, false), 2), error);
}

TEST(SmoothToric, StabilizationCap) {
  toric_options opt;
  opt.enum_cap = 1;
  try {
    ell_smooth_toric(p2(), 6, opt);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::stabilization_failure);
  }
}

TEST(SmoothToric, ThreadCountDoesNotChangeResult) {
  toric_options one, four;
  four.threads = 4;
  expect_same(ell_smooth_toric(p1xp1(), 3, one).series, ell_smooth_toric(p1xp1(), 3, four).series);
}

TEST(GorensteinToric, CrepantResolutionAgrees) {
  const int N = 3;
  expect_same(ell_gorenstein_toric(p112(), N).series, ell_smooth_toric(f2(), N).series);
  // on a smooth fan the box sum reduces to the smooth formula
  expect_same(ell_gorenstein_toric(p2(), N).series, ell_smooth_toric(p2(), N).series);
}

TEST(GorensteinToric, RejectsNonGorenstein) {
  const fan p113 = make_fan(2, {{1, 0}, {0, 1}, {-1, -3}}, {{0, 1}, {1, 2}, {0, 2}});
  try {
    ell_gorenstein_toric(p113, 2);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_gorenstein);
  }
}

TEST(QIdentity, P2Identity) {
  const auto rep = verify_p2_identity(20);
  EXPECT_TRUE(rep.holds);
  EXPECT_FALSE(rep.first_difference);
  EXPECT_EQ(rep.rhs.coeff(2, 0), r(1));
  EXPECT_EQ(rep.rhs.coeff(4, 0), r(3));
}

TEST(Lso, DeltaSeries) {
  const auto d = delta_series(4);
  EXPECT_EQ(d.coeff(0, 0), r(-1, 8));
  EXPECT_EQ(d.coeff(1, 0), r(-3));
  EXPECT_EQ(d.coeff(2, 0), r(-3));
  EXPECT_EQ(d.coeff(3, 0), r(-12));
}

TEST(Lso, ToricSumAgreesWithSpecializedGenus) {
  const int N = 5;
  const auto p2l = ellhat_lso(p2(), N);
  expect_same(p2l.series, lso_genus_model(manifold_model::projective_space(2), N));
  expect_same(p2l.series, delta_series(N).scaled(r(-2)));
  expect_same(ellhat_lso(p1xp1(), N).series, qy_series::zero(1, 1, N));
}
