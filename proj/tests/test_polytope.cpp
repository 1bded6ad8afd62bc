#include <gtest/gtest.h>

#include "ellgen/genus_engine.hpp"
#include "ellgen/modforms.hpp"
#include "ellgen/polytope.hpp"

using namespace ellgen;

namespace {

rational r(long n, long d = 1) { return make_rational(n, d); }

void expect_same(const qy_series& a, const qy_series& b) {
  const auto d = first_difference(a, b);
  EXPECT_FALSE(d) << "q=" << d->q << " y=" << d->y << " lhs=" << d->lhs << " rhs=" << d->rhs;
}

// Newton polytope of the degree n+1 hypersurface in P^n, in n coordinates.
imat simplex_polytope(int n) {
  imat v;
  for (int i = 0; i < n; ++i) {
    ivec p(static_cast<std::size_t>(n), -1);
    p[static_cast<std::size_t>(i)] = n;
    v.push_back(p);
  }
  v.push_back(ivec(static_cast<std::size_t>(n), -1));
  return v;
}

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  return errc::internal;
}

}  // namespace

TEST(Reflexive, SimplexAndDual) {
  const auto p = make_reflexive(simplex_polytope(2));
  EXPECT_EQ(p.dim, 2);
  EXPECT_EQ(p.vertices.size(), 3u);
  EXPECT_EQ(p.facet_normals.size(), 3u);
  const auto d = dualize(p);
  EXPECT_EQ(d.vertices.size(), 3u);
  EXPECT_TRUE(same_vertices(dualize(d), p));
  for (const auto& v : d.vertices) {
    std::int64_t s = 0;
    for (auto x : v) s += std::abs(x);
    EXPECT_LE(s, 2);
  }
}

TEST(Reflexive, DropsNonVertices) {
  auto pts = simplex_polytope(2);
  pts.push_back({0, 0});
  pts.push_back({1, 0});
  EXPECT_EQ(make_reflexive(pts).vertices.size(), 3u);
}

TEST(Reflexive, SquareIsNotSelfDual) {
  const auto sq = make_reflexive({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  const auto dia = dualize(sq);
  EXPECT_FALSE(same_vertices(sq, dia));
  EXPECT_EQ(dia.vertices.size(), 4u);
  EXPECT_TRUE(same_vertices(dualize(dia), sq));
}

TEST(Reflexive, Errors) {
  EXPECT_EQ(code_of([] { make_reflexive({{2, 0}, {0, 2}, {-2, -2}}); }), errc::not_reflexive);
  EXPECT_EQ(code_of([] { make_reflexive({{1, 1}, {-1, -1}, {2, 2}}); }), errc::degenerate_input);
  EXPECT_EQ(code_of([] { make_reflexive({{1, 0}, {0, 1}, {2, 2}}); }), errc::degenerate_input);
  EXPECT_EQ(code_of([] { make_reflexive({}); }), errc::degenerate_input);
}

TEST(Hypersurface, EllipticCurveVanishes) {
  const int N = 4;
  const auto p = make_reflexive(simplex_polytope(2));
  expect_same(ell_hypersurface(p, N).series, qy_series::zero(1, 1, N));
}

TEST(Hypersurface, QuarticMatchesAdjunctionOracle) {
  const int N = 3;
  const auto p = make_reflexive(simplex_polytope(3));
  const auto oracle = elliptic_genus_model(manifold_model::hypersurface(3, 4), N);
  hypersurface_options dual, primal;
  dual.path = hypersurface_options::method::cone_dual;
  primal.path = hypersurface_options::method::cone_primal;
  // the primal layout on the dual polytope computes the mirror, equal for K3
  const auto a = ell_hypersurface(p, N, dual);
  EXPECT_EQ(a.method, "cone_dual");
  expect_same(a.series, oracle);
  expect_same(ell_hypersurface(dualize(p), N, primal).series, oracle);
  expect_same(a.series, weak_jacobi_basis(N).phi_0_1.scaled(r(2)));
}

TEST(Hypersurface, QuinticMatchesOracleAndClosedForm) {
  const int N = 2;
  const auto p = make_reflexive(simplex_polytope(4));
  const auto s = ell_hypersurface(p, N).series;
  expect_same(s, elliptic_genus_model(manifold_model::hypersurface(4, 5), N));
  expect_same(s, threefold_formula(r(-200), N));
}

TEST(Hypersurface, PerMPathOnPolygons) {
  hypersurface_options per_m;
  per_m.path = hypersurface_options::method::per_m;
  const auto tri = make_reflexive(simplex_polytope(2));
  const auto r1 = ell_hypersurface(tri, 3, per_m);
  EXPECT_EQ(r1.method, "per_m");
  expect_same(r1.series, qy_series::zero(1, 1, 3));
  const auto sq = make_reflexive({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  expect_same(ell_hypersurface(sq, 2).series, qy_series::zero(1, 1, 2));
  expect_same(ell_hypersurface(dualize(sq), 2).series, qy_series::zero(1, 1, 2));
}

TEST(Hypersurface, ThreadCountDoesNotChangeResult) {
  const auto p = make_reflexive(simplex_polytope(3));
  hypersurface_options one, many;
  many.threads = 3;
  expect_same(ell_hypersurface(p, 2, one).series, ell_hypersurface(p, 2, many).series);
}

TEST(Mirror, SignFollowsDimension) {
  const auto q = mirror_check(make_reflexive(simplex_polytope(4)), 2);
  EXPECT_EQ(q.sign, -1);
  EXPECT_TRUE(q.holds);
  const auto k = mirror_check(make_reflexive(simplex_polytope(3)), 2);
  EXPECT_EQ(k.sign, 1);
  EXPECT_TRUE(k.holds);
}

TEST(Jacobi, CalabiYauPassesAndP2Fails) {
  const int N = 3;
  const auto k3 = ell_hypersurface(make_reflexive(simplex_polytope(3)), N).series;
  EXPECT_TRUE(jacobi_property_check(k3, 2, N).holds);
  const auto quintic = ell_hypersurface(make_reflexive(simplex_polytope(4)), N).series;
  EXPECT_TRUE(jacobi_property_check(quintic, 3, N).holds);
  const auto p2 = elliptic_genus_model(manifold_model::projective_space(2), N);
  const auto bad = jacobi_property_check(p2, 2, N);
  EXPECT_FALSE(bad.holds);
  EXPECT_FALSE(bad.failed.empty());
  EXPECT_THROW(jacobi_property_check(k3.truncated(1), 2, N), error);
}
