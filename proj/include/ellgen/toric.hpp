#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ellgen/lattice.hpp"
#include "ellgen/modforms.hpp"
#include "ellgen/parallel.hpp"
#include "ellgen/qy_series.hpp"
#include "ellgen/ratfun_y.hpp"

namespace ellgen {

using cone = std::vector<int>;  // sorted ray indices

struct fan {
  int rank = 0;
  std::vector<ivec> rays;
  std::vector<cone> max_cones;
  bool complete = false;

  /// Checks primitivity, indices, and that every listed cone is simplicial.
  void validate() const {
    if (rank < 1) throw error(errc::validation_error, "fan rank must be positive");
    for (const auto& r : rays) {
      if (static_cast<int>(r.size()) != rank) throw error(errc::validation_error, "ray of wrong length");
      if (!is_primitive(r)) throw error(errc::validation_error, "ray is not primitive");
    }
    for (const auto& c : max_cones) {
      for (int i : c)
        if (i < 0 || i >= static_cast<int>(rays.size())) throw error(errc::validation_error, "cone index out of range");
      if (rank_of(c) != static_cast<int>(c.size())) throw error(errc::non_simplicial, "cone rays are dependent");
    }
    if (rank <= 2 && complete && !complete_low_rank())
      throw error(errc::validation_error, "fan declared complete but its cones do not cover the plane/line");
  }

  imat generators(const cone& c) const {
    imat g;
    for (int i : c) g.push_back(rays[static_cast<std::size_t>(i)]);
    return g;
  }

  int rank_of(const cone& c) const { return c.empty() ? 0 : ellgen::rank(generators(c)); }

  bool is_smooth() const {
    for (const auto& c : max_cones) {
      if (static_cast<int>(c.size()) != rank) return false;
      const rational det = determinant(generators(c));
      if (det != 1 && det != -1) return false;
    }
    return true;
  }

  /// All faces of the listed cones, including the zero cone.
  std::vector<cone> all_cones() const {
    std::set<cone> s;
    for (auto c : max_cones) {
      std::sort(c.begin(), c.end());
      const std::size_t k = c.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        cone f;
        for (std::size_t i = 0; i < k; ++i)
          if (mask & (std::size_t{1} << i)) f.push_back(c[i]);
        s.insert(f);
      }
    }
    return {s.begin(), s.end()};
  }

  /// Exact completeness test for rank 1 and 2.
  bool complete_low_rank() const {
    if (rank == 1) {
      bool pos = false, neg = false;
      for (const auto& c : max_cones)
        for (int i : c) (rays[static_cast<std::size_t>(i)][0] > 0 ? pos : neg) = true;
      return pos && neg;
    }
    // Every ray must border exactly two 2-cones, and the 2-cones must not overlap.
    std::map<int, int> border;
    rational total_turn = 0;
    for (const auto& c : max_cones) {
      if (c.size() != 2) return false;
      ++border[c[0]];
      ++border[c[1]];
    }
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (border[static_cast<int>(i)] != 2) return false;
    // Angles: the cones partition the circle iff walking ray to ray around the
    // circle visits each cone once. Sort rays by angle and check adjacency.
    std::vector<int> order(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) order[i] = static_cast<int>(i);
    auto half = [](const ivec& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const ivec &u = rays[static_cast<std::size_t>(a)], &v = rays[static_cast<std::size_t>(b)];
      if (half(u) != half(v)) return half(u) < half(v);
      return u[0] * v[1] - u[1] * v[0] > 0;
    });
    std::set<cone> listed;
    for (auto c : max_cones) {
      std::sort(c.begin(), c.end());
      listed.insert(c);
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      cone c{order[i], order[(i + 1) % order.size()]};
      std::sort(c.begin(), c.end());
      const ivec &u = rays[static_cast<std::size_t>(order[i])], &v = rays[static_cast<std::size_t>(order[(i + 1) % order.size()])];
      if (u[0] * v[1] - u[1] * v[0] <= 0) return false;  // gap of angle >= pi
      if (!listed.count(c)) return false;
    }
    (void)total_turn;
    return listed.size() == order.size();
  }
};

/// Dual basis m_i of a full-dimensional simplicial cone: m_i . n_j = delta_ij
/// (rows of the inverse transpose). Integral exactly when the cone is smooth.
inline qmat dual_basis(const fan& f, const cone& c) {
  if (static_cast<int>(c.size()) != f.rank || f.rank_of(c) != f.rank)
    throw error(errc::non_simplicial, "dual basis needs a full-dimensional simplicial cone");
  auto inv = inverse(f.generators(c));
  if (!inv) throw error(errc::non_simplicial, "cone generators are dependent");
  // N m^T = I with rows n_j: m_i is column i of N^{-1}.
  qmat m(c.size(), qvec(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) m[i][j] = (*inv)[j][i];
  return m;
}

struct toric_options {
  int enum_cap = 48;     // largest enumeration radius tried
  unsigned threads = 1;
};

struct toric_result {
  qy_series series;
  int radius = 0;                // radius at which two consecutive growths were stable
  int aggregate_pole_order = 0;  // pole order of the summed nets before multiplying by G^d
  int final_pole_order = 0;      // after multiplying by G^d (must be 0)
  std::size_t lattice_points = 0;
};

namespace detail {

// Points m with max_i |m . n_i| == R.
inline std::vector<ivec> shell(const fan& f, std::int64_t R) {
  const int d = f.rank;
  // Bound |m_j| through an invertible subset of rays.
  imat basis;
  for (const auto& r : f.rays) {
    basis.push_back(r);
    if (rank(basis) != static_cast<int>(basis.size())) basis.pop_back();
    if (static_cast<int>(basis.size()) == d) break;
  }
  if (static_cast<int>(basis.size()) != d) throw error(errc::degenerate_input, "rays do not span the lattice");
  auto inv = *inverse(basis);
  std::vector<std::int64_t> bound(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    rational s = 0;
    for (int i = 0; i < d; ++i) s += abs(inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    bound[static_cast<std::size_t>(j)] = floor_rational(s * R);
  }
  std::vector<ivec> out;
  ivec m(static_cast<std::size_t>(d));
  std::function<void(int)> rec = [&](int j) {
    if (j == d) {
      std::int64_t mx = 0;
      for (const auto& r : f.rays) mx = std::max<std::int64_t>(mx, std::abs(dot(m, r)));
      if (mx == R) out.push_back(m);
      return;
    }
    for (std::int64_t v = -bound[static_cast<std::size_t>(j)]; v <= bound[static_cast<std::size_t>(j)]; ++v) {
      m[static_cast<std::size_t>(j)] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

// Sums term(m) over growing shells until two consecutive shells change nothing
// through q^N. Returns the total and the final radius.
template <class Term>
std::pair<qy_series, int> stabilized_sum(const fan& f, int N, const toric_options& opt, Term&& term,
                                         std::size_t* points, int fixed_radius = -1) {
  qy_series total;
  bool first = true;
  int stable = 0;
  for (int R = 0;; ++R) {
    if (fixed_radius < 0 && R > opt.enum_cap)
      throw error(errc::stabilization_failure,
                  "no two consecutive stable growths up to radius " + std::to_string(opt.enum_cap));
    const auto pts = shell(f, R);
    if (points) *points += pts.size();
    auto parts = parallel_map(pts.size(), opt.threads, [&](std::size_t i) { return term(pts[i]); });
    qy_series shell_sum;
    bool shell_first = true;
    for (auto& p : parts) {
      if (shell_first) {
        shell_sum = std::move(p);
        shell_first = false;
      } else {
        shell_sum = shell_sum + p;
      }
    }
    const bool changed = !shell_first && !shell_sum.truncated(N).empty();
    if (!shell_first) total = first ? shell_sum : total + shell_sum;
    if (!shell_first) first = false;
    if (fixed_radius >= 0) {
      if (R == fixed_radius) return {total, R};
      continue;
    }
    stable = changed ? 0 : stable + 1;
    if (stable >= 2 && R >= 2) return {total, R};
  }
}

inline qy_series one_minus_y_pow(int j, int N) {
  qy_series s = qy_series::constant(1, N);
  for (int i = 0; i < j; ++i) s = times_one_minus<rational>(s, rational(1), 0, 1);
  return s;
}

struct cone_data {
  cone rays;
  int sign = 1;
  std::vector<box_point> box;  // lattice points of the half-open parallelepiped
  std::vector<std::int64_t> box_deg;
};

inline std::vector<cone_data> prepare_cones(const fan& f, bool gorenstein) {
  std::vector<cone_data> out;
  std::map<cone, qvec> deg_of_max;
  if (gorenstein) {
    for (auto c : f.max_cones) {
      std::sort(c.begin(), c.end());
      auto deg = solve_functional(f.generators(c), qvec(c.size(), rational(1)));
      if (!deg) throw error(errc::not_gorenstein, "no degree functional on a cone");
      for (const auto& x : *deg)
        if (!is_integer(x)) throw error(errc::not_gorenstein, "degree functional is not integral");
      deg_of_max[c] = *deg;
    }
  }
  for (const auto& c : f.all_cones()) {
    cone_data cd;
    cd.rays = c;
    cd.sign = ((f.rank - static_cast<int>(c.size())) % 2 == 0) ? 1 : -1;
    if (gorenstein) {
      const imat g = f.generators(c);
      cd.box = c.empty() ? std::vector<box_point>{box_point{ivec(static_cast<std::size_t>(f.rank), 0), {}}}
                         : box_points(g);
      qvec deg;
      for (auto mc : f.max_cones) {
        std::sort(mc.begin(), mc.end());
        if (std::includes(mc.begin(), mc.end(), c.begin(), c.end())) {
          deg = deg_of_max[mc];
          break;
        }
      }
      for (const auto& b : cd.box) cd.box_deg.push_back(c.empty() ? 0 : to_int64(dot(deg, b.n)));
    } else {
      cd.box = {box_point{ivec(static_cast<std::size_t>(f.rank), 0), {}}};
      cd.box_deg = {0};
    }
    out.push_back(std::move(cd));
  }
  return out;
}

// Numerator of the net at m over the common denominator (1 - y)^d.
inline qy_series net_numerator(const fan& f, const std::vector<cone_data>& cones, const ivec& m, int N,
                               const std::vector<qy_series>& one_minus_y) {
  const int d = f.rank;
  qy_series acc = qy_series::zero(1, 1, N);
  for (const auto& cd : cones) {
    int zeros = 0;
    std::vector<std::int64_t> ks;
    for (int i : cd.rays) {
      const std::int64_t k = dot(m, f.rays[static_cast<std::size_t>(i)]);
      if (k == 0) ++zeros;
      else ks.push_back(k);
    }
    for (std::size_t b = 0; b < cd.box.size(); ++b) {
      const std::int64_t mb = dot(m, cd.box[b].n);
      const std::int64_t lim = N - std::min<std::int64_t>(0, mb);
      qy_series t = qy_series::monomial(rational(cd.sign), mb, 1, cd.box_deg[b], 1, lim);
      for (auto k : ks) t = t * geom_factor_units<rational>(1, 1, 1, k, lim);
      t = (t * one_minus_y[static_cast<std::size_t>(d - zeros)]).truncated(N);
      acc = acc + t;
    }
  }
  return acc;
}

inline toric_result finish_toric(const fan& f, const qy_series& numerator, int radius, std::size_t points, int N) {
  const int d = f.rank;
  toric_result r;
  r.radius = radius;
  r.lattice_points = points;
  for (const auto& t : numerator.terms())
    if (t.q < 0) throw error(errc::internal, "negative q-power survived the lattice sum");
  const ratfun_y agg(numerator.truncated(N), d);
  r.aggregate_pole_order = agg.reduced().pole_order();
  const ratfun_y full = agg * pow(big_g(N), d);
  const ratfun_y red = full.reduced();
  r.final_pole_order = red.pole_order();
  if (r.final_pole_order != 0) throw error(errc::internal, "(1 - y) poles did not clear after multiplying by G^d");
  r.series = red.numerator().truncated(N).rescaled(1, 2).shifted(0, -d).reduced();
  return r;
}

}  // namespace detail

inline toric_result toric_lattice_sum(const fan& f, int N, bool gorenstein, const toric_options& opt = {},
                                      int fixed_radius = -1) {
  f.validate();
  if (!f.complete) throw error(errc::validation_error, "toric genus formula needs a complete fan");
  const auto cones = detail::prepare_cones(f, gorenstein);
  std::vector<qy_series> omy;
  for (int j = 0; j <= f.rank; ++j) omy.push_back(detail::one_minus_y_pow(j, N));
  std::size_t points = 0;
  auto [num, R] = detail::stabilized_sum(
      f, N, opt, [&](const ivec& m) { return detail::net_numerator(f, cones, m, N, omy); }, &points, fixed_radius);
  return detail::finish_toric(f, num, R, points, N);
}

/// Elliptic genus of a smooth complete toric variety, exact through q^N.
inline toric_result ell_smooth_toric(const fan& f, int N, const toric_options& opt = {}) {
  f.validate();
  if (!f.is_smooth()) throw error(errc::non_smooth_fan, "a maximal cone is not unimodular");
  return toric_lattice_sum(f, N, false, opt);
}

/// Elliptic genus of a complete simplicial Gorenstein toric variety via box points.
inline toric_result ell_gorenstein_toric(const fan& f, int N, const toric_options& opt = {}) {
  return toric_lattice_sum(f, N, true, opt);
}

struct lso_result {
  qy_series series;
  int radius = 0;
  std::size_t lattice_points = 0;
};

namespace detail {

// 1/(1 + q^k) with nonnegative q-powers; k = 0 gives 1/2.
inline qy_series one_over_one_plus_q(std::int64_t k, int N) {
  std::vector<qy_series::term> t;
  if (k == 0) {
    t.push_back({0, 0, rational(1, 2)});
  } else if (k > 0) {
    for (std::int64_t j = 0; j * k <= N; ++j) t.push_back({j * k, 0, rational(j % 2 == 0 ? 1 : -1)});
  } else {
    for (std::int64_t j = 1; -j * k <= N; ++j) t.push_back({-j * k, 0, rational(j % 2 == 1 ? 1 : -1)});
  }
  return qy_series::from_terms(1, 1, N, std::move(t));
}

}  // namespace detail

/// sum_m sum_C (-1)^codim C prod_i 1/(1 + q^(m . n_i)) for a smooth complete fan.
inline lso_result ellhat_lso(const fan& f, int N, const toric_options& opt = {}, int fixed_radius = -1) {
  f.validate();
  if (!f.is_smooth()) throw error(errc::non_smooth_fan, "a maximal cone is not unimodular");
  if (!f.complete) throw error(errc::validation_error, "toric genus formula needs a complete fan");
  const auto cones = f.all_cones();
  auto term = [&](const ivec& m) {
    qy_series acc = qy_series::zero(1, 1, N);
    for (const auto& c : cones) {
      qy_series t = qy_series::constant(rational(((f.rank - static_cast<int>(c.size())) % 2 == 0) ? 1 : -1), N);
      for (int i : c) t = t * detail::one_over_one_plus_q(dot(m, f.rays[static_cast<std::size_t>(i)]), N);
      acc = acc + t;
    }
    return acc;
  };
  std::size_t points = 0;
  auto [s, R] = detail::stabilized_sum(f, N, opt, term, &points, fixed_radius);
  return {s.truncated(N), R, points};
}

/// The delta series -1/8 - 3 sum_n sigma_odd(n) q^n.
inline qy_series delta_series(int N) {
  std::vector<qy_series::term> t{{0, 0, rational(-1, 8)}};
  for (int n = 1; n <= N; ++n) {
    std::int64_t s = 0;
    for (int dv = 1; dv <= n; dv += 2)
      if (n % dv == 0) s += dv;
    t.push_back({n, 0, rational(-3 * s)});
  }
  return qy_series::from_terms(1, 1, N, std::move(t));
}

struct identity_report {
  bool holds = false;
  qy_series lhs;
  qy_series rhs;
  std::optional<discrepancy> first_difference;
};

/// sum_{m,n>=1} q^(m+n)/((1+q^m)(1+q^n)(1+q^(m+n))) against sum_r q^(2r) sigma(r), through q^N.
inline identity_report verify_p2_identity(int N) {
  identity_report r;
  r.lhs = qy_series::zero(1, 1, N);
  for (int m = 1; m < N; ++m)
    for (int n = 1; m + n <= N; ++n) {
      qy_series t = qy_series::monomial(rational(1), m + n, 1, 0, 1, N);
      t = t * detail::one_over_one_plus_q(m, N) * detail::one_over_one_plus_q(n, N) *
          detail::one_over_one_plus_q(m + n, N);
      r.lhs = r.lhs + t;
    }
  std::vector<qy_series::term> t;
  for (int k = 1; 2 * k <= N; ++k) {
    std::int64_t s = 0;
    for (int dv = 1; dv <= k; ++dv)
      if (k % dv == 0) s += dv;
    t.push_back({2 * k, 0, rational(s)});
  }
  r.rhs = qy_series::from_terms(1, 1, N, std::move(t));
  r.first_difference = first_difference(r.lhs, r.rhs);
  r.holds = !r.first_difference;
  return r;
}

}  // namespace ellgen
