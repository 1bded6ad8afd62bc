#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ellgen/checked_int.hpp"
#include "ellgen/lattice.hpp"
#include "ellgen/modforms.hpp"
#include "ellgen/parallel.hpp"
#include "ellgen/qy_series.hpp"
#include "ellgen/ratfun_y.hpp"
#include "ellgen/toric.hpp"

namespace ellgen {

/// Lattice polytope with the origin as its unique interior point and every
/// facet at lattice distance one.
struct reflexive_polytope {
  int dim = 0;          // ambient dimension d + 1
  imat vertices;        // in M1
  imat facet_normals;   // in N1, <v, nu> >= -1 with equality on the facet
};

namespace detail {

// Primitive integer normal to the hyperplane through the given points, if they
// are affinely independent and span a hyperplane.
inline std::optional<ivec> hyperplane_normal(const imat& pts) {
  const std::size_t D = pts[0].size();
  qmat a;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    qvec row;
    for (std::size_t j = 0; j < D; ++j) row.emplace_back(static_cast<long>(pts[i][j] - pts[0][j]));
    a.push_back(std::move(row));
  }
  if (row_reduce(a) != static_cast<int>(D) - 1) return std::nullopt;
  // One free column: back-substitute with it set to 1.
  std::vector<int> pivot_col;
  for (std::size_t i = 0; i + 1 < D; ++i) {
    std::size_t c = 0;
    while (is_zero(a[i][c])) ++c;
    pivot_col.push_back(static_cast<int>(c));
  }
  std::size_t free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(free_col)) != pivot_col.end()) ++free_col;
  qvec x(D, rational(0));
  x[free_col] = 1;
  for (std::size_t i = 0; i + 1 < D; ++i) x[static_cast<std::size_t>(pivot_col[i])] = -a[i][free_col];
  integer l = 1;
  for (const auto& v : x) l = lcm(l, integer(v.get_den()));
  ivec n(D);
  std::int64_t g = 0;
  for (std::size_t j = 0; j < D; ++j) {
    n[j] = to_int64(rational(x[j] * l));
    g = std::gcd(g, n[j]);
  }
  for (auto& v : n) v /= g;
  return n;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Computes the facets by exhaustive hyperplane search and validates
/// reflexivity. Non-vertex input points are dropped.
inline reflexive_polytope make_reflexive(imat points) {
  if (points.empty()) throw error(errc::degenerate_input, "polytope has no vertices");
  const std::size_t D = points[0].size();
  for (const auto& p : points)
    if (p.size() != D) throw error(errc::validation_error, "vertices of different lengths");
  {
    imat diffs;
    for (const auto& p : points) {
      ivec v(D);
      for (std::size_t j = 0; j < D; ++j) v[j] = p[j] - points[0][j];
      diffs.push_back(v);
    }
    if (rank(diffs) != static_cast<int>(D)) throw error(errc::degenerate_input, "polytope is not full-dimensional");
  }
  std::set<ivec> normals;
  detail::for_each_subset(points.size(), D, [&](const std::vector<std::size_t>& idx) {
    imat sub;
    for (auto i : idx) sub.push_back(points[i]);
    auto a = detail::hyperplane_normal(sub);
    if (!a) return;
    const std::int64_t c = dot(*a, sub[0]);
    bool ge = true, le = true;
    for (const auto& p : points) {
      const std::int64_t v = dot(*a, p);
      ge = ge && v >= c;
      le = le && v <= c;
    }
    if (!ge && !le) return;
    ivec n = *a;
    std::int64_t cc = c;
    if (!ge) {
      for (auto& x : n) x = -x;
      cc = -cc;
    }
    if (cc >= 0) throw error(errc::degenerate_input, "origin is not in the interior of the polytope");
    if (cc != -1)
      throw error(errc::not_reflexive, "facet at lattice distance " + std::to_string(-cc) + " from the origin");
    normals.insert(n);
  });
  reflexive_polytope p;
  p.dim = static_cast<int>(D);
  p.facet_normals.assign(normals.begin(), normals.end());
  for (const auto& v : points) {
    imat tight;
    for (const auto& n : p.facet_normals)
      if (dot(v, n) == -1) tight.push_back(n);
    if (!tight.empty() && rank(tight) == static_cast<int>(D) &&
        std::find(p.vertices.begin(), p.vertices.end(), v) == p.vertices.end())
      p.vertices.push_back(v);
  }
  return p;
}

/// The dual polytope: its vertices are the facet normals.
inline reflexive_polytope dualize(const reflexive_polytope& p) { return make_reflexive(p.facet_normals); }

/// True when both polytopes have the same vertex set.
inline bool same_vertices(const reflexive_polytope& a, const reflexive_polytope& b) {
  imat x = a.vertices, y = b.vertices;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

/// Generators (v, 1) of the cone over a polytope.
inline imat cone_generators(const imat& vertices) {
  imat g;
  for (auto v : vertices) {
    v.push_back(1);
    g.push_back(std::move(v));
  }
  return g;
}

struct hypersurface_options {
  unsigned threads = 1;
  int enum_cap = 64;             // largest lattice radius tried by the per-m path
  std::int64_t extra_radius = 0; // enumerate this far past the natural bound
  enum class method { automatic, cone_dual, cone_primal, per_m };
  method path = method::automatic;
};

struct hypersurface_result {
  qy_series series;
  std::string method;
  std::int64_t radius = 0;        // largest |pairing| reached
  std::int64_t y_window = 0;      // certified y + q window of the raw sum (real units)
  std::size_t residue_classes = 0;
};

namespace detail {

// Integer-coefficient series in common units; every coefficient with
// q <= qcap and y + q <= cap is exact, and every term, known or not,
// satisfies y + q >= -kappa.
struct window_series {
  struct term {
    std::int64_t q, y;
    checked_int c;
  };
  std::vector<term> terms;  // sorted by (q, y)
  std::int64_t qcap = 0;
  std::int64_t cap = 0;
  std::int64_t kappa = 0;

  static window_series one(std::int64_t qcap, std::int64_t cap) {
    window_series s;
    s.qcap = qcap;
    s.cap = cap;
    s.terms.push_back({0, 0, checked_int(1)});
    return s;
  }

  void normalize() {
    std::sort(terms.begin(), terms.end(), [](const term& a, const term& b) { return a.q < b.q || (a.q == b.q && a.y < b.y); });
    std::vector<term> out;
    for (auto& t : terms) {
      if (t.q > qcap || t.y + t.q > cap) continue;
      if (!out.empty() && out.back().q == t.q && out.back().y == t.y) out.back().c += t.c;
      else out.push_back(t);
    }
    std::erase_if(out, [](const term& t) { return t.c.value() == 0; });
    terms = std::move(out);
  }

  void recompute_kappa() {
    kappa = 0;
    for (const auto& t : terms) kappa = std::max(kappa, -(t.y + t.q));
  }
};

inline window_series operator*(const window_series& a, const window_series& b) {
  window_series r;
  r.qcap = std::min(a.qcap, b.qcap);
  r.cap = std::min(a.cap - b.kappa, b.cap - a.kappa);
  r.kappa = a.kappa + b.kappa;
  if (a.terms.empty() || b.terms.empty()) return r;
  // Dense accumulation over (q, y + q).
  std::int64_t smin = -r.kappa;
  const std::int64_t width = r.cap - smin + 1;
  if (width <= 0) return r;
  std::vector<std::int64_t> acc(static_cast<std::size_t>((r.qcap + 1) * width), 0);
  std::vector<char> used(acc.size(), 0);
  for (const auto& x : a.terms) {
    for (const auto& z : b.terms) {
      const std::int64_t q = x.q + z.q;
      if (q > r.qcap) break;
      const std::int64_t s = x.y + z.y + q;
      if (s > r.cap) continue;
      const std::size_t k = static_cast<std::size_t>(q * width + (s - smin));
      std::int64_t prod;
      if (__builtin_mul_overflow(x.c.value(), z.c.value(), &prod) || __builtin_add_overflow(acc[k], prod, &acc[k]))
        throw error(errc::overflow, "lattice-sum coefficient overflow");
      used[k] = 1;
    }
  }
  for (std::int64_t q = 0; q <= r.qcap; ++q)
    for (std::int64_t s = smin; s <= r.cap; ++s) {
      const std::size_t k = static_cast<std::size_t>(q * width + (s - smin));
      if (used[k] && acc[k] != 0) r.terms.push_back({q, s - q, checked_int(acc[k])});
    }
  return r;
}

inline window_series& operator+=(window_series& a, const window_series& b) {
  a.qcap = std::min(a.qcap, b.qcap);
  a.cap = std::min(a.cap, b.cap);
  a.kappa = std::max(a.kappa, b.kappa);
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  a.normalize();
  return a;
}

// Simplicial cone data in units of 1/e.
struct simplicial_frame {
  imat gens;                 // rows w_i (D of them)
  std::int64_t e = 1;        // common denominator of gens^{-1}
  imat cols;                 // e * gens^{-1} columns, cols[i] has D entries
  std::vector<std::int64_t> weight_u;  // barycentric weights of (0,...,0,1), times e
  std::vector<box_point> box;
};

inline simplicial_frame make_frame(const imat& gens) {
  simplicial_frame f;
  f.gens = gens;
  const std::size_t D = gens.size();
  auto inv = inverse(gens);
  if (!inv) throw error(errc::degenerate_input, "cone generators are dependent");
  integer l = 1;
  for (const auto& row : *inv)
    for (const auto& x : row) l = lcm(l, integer(x.get_den()));
  f.e = to_int64(l);
  f.cols.assign(D, ivec(D));
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) f.cols[i][j] = to_int64(rational((*inv)[j][i] * f.e));
  // (0,...,0,1) = sum_i w_i gens_i  =>  w = last row of gens^{-1}.
  for (std::size_t i = 0; i < D; ++i) {
    const rational w = (*inv)[D - 1][i];
    if (sgn(w) <= 0) throw error(errc::degenerate_input, "marker is not interior to the cone");
    f.weight_u.push_back(to_int64(rational(w * f.e)));
  }
  f.box = box_points(gens);
  return f;
}

inline std::int64_t mod_e(std::int64_t x, std::int64_t e) { return ((x % e) + e) % e; }

// One-coordinate sums. In the cone_dual layout the coordinate is a pairing
// alpha = m . v over all integers and c >= 0 runs over t/e + Z; in the
// cone_primal layout c = m-coordinate runs over r/e + Z and a = n . u >= 0.
struct coordinate_sum {
  std::int64_t e, Q, cap;
  std::int64_t extra = 0;
  std::int64_t* radius = nullptr;

  void touch(std::int64_t r) const {
    if (radius) *radius = std::max(*radius, r);
  }

  window_series dual_layout(std::int64_t lam_u, std::int64_t t, std::int64_t rho) const {
    window_series s;
    s.qcap = Q;
    s.cap = cap;
    const std::int64_t gam = t + lam_u;
    if (gam > e) throw error(errc::internal, "box coordinate outside the supported range");
    std::vector<window_series::term>& out = s.terms;
    auto push = [&](std::int64_t q, std::int64_t y, std::int64_t c) {
      if (q <= Q && y + q <= cap) out.push_back({q, y, checked_int(c)});
    };
    // alpha = 0
    if (rho == 0)
      for (std::int64_t y = t; y <= cap; y += e) push(0, y, 1);
    // alpha > 0
    const std::int64_t amax_pos = Q / gam + extra;
    for (std::int64_t alpha = rho == 0 ? e : rho; alpha <= amax_pos; alpha += e) {
      bool any = false;
      for (std::int64_t k = 0;; ++k) {
        const std::int64_t q = alpha * (gam + k * e);
        if (q > Q) break;
        push(q, t + k * e - lam_u * alpha, 1);
        any = true;
      }
      if (any) touch(alpha);
    }
    // alpha < 0, a = -alpha
    const std::int64_t amax_neg = (gam < e ? Q / (e - gam) : (cap / (e - t) + 1)) + extra;
    for (std::int64_t a = rho == 0 ? e : e - rho; a <= amax_neg; a += e) {
      bool any = false;
      for (std::int64_t j = 1;; ++j) {
        const std::int64_t q = a * (j * e - gam);
        if (q > Q) break;
        const std::int64_t y = a * lam_u + t - j * e;
        if (y + q > cap) break;  // y + q = (a - 1)(j e - t) grows with j
        push(q, y, -1);
        any = true;
      }
      if (any) touch(a);
    }
    s.normalize();
    s.recompute_kappa();
    return s;
  }

  window_series primal_layout(std::int64_t mu_u, std::int64_t r, std::int64_t sres) const {
    window_series s;
    s.qcap = Q;
    s.cap = cap;
    auto& out = s.terms;
    auto push = [&](std::int64_t q, std::int64_t y, std::int64_t c) {
      if (q <= Q && y + q <= cap) out.push_back({q, y, checked_int(c)});
    };
    // c = 0
    if (r == 0)
      for (std::int64_t a = sres;; a += e) {
        const std::int64_t y = mu_u * a;
        if (y > cap) break;
        push(0, y, 1);
      }
    // c > 0: c_u = r + e i
    for (std::int64_t cu = r == 0 ? e : r; cu <= Q + extra; cu += e) {
      bool any = false;
      for (std::int64_t a = sres;; a += e) {
        const std::int64_t q = cu * (1 + a);
        if (q > Q) break;
        push(q, mu_u * a - cu, 1);
        any = true;
      }
      if (any) touch(cu);
    }
    // c < 0: b_u = -c_u
    const std::int64_t bmax = (sres == e - 1 ? cap + mu_u : Q) + extra;
    for (std::int64_t b = r == 0 ? e : e - r; b <= bmax; b += e) {
      bool any = false;
      for (std::int64_t j = 1;; ++j) {
        const std::int64_t ap = sres - j * e;  // negative exponent after the rewrite
        const std::int64_t q = b * (-ap - 1);
        if (q > Q) break;
        const std::int64_t y = mu_u * ap + b;
        if (y + q <= cap) {
          push(q, y, -1);
          any = true;
        }
      }
      if (any) touch(b);
    }
    s.normalize();
    s.recompute_kappa();
    return s;
  }
};

// Sum over the lattice of the pairings with residue DP per box point.
inline window_series residue_dp(const simplicial_frame& f, bool primal, std::int64_t Q, std::int64_t cap,
                                std::int64_t extra, std::int64_t* radius, unsigned threads, std::size_t* classes) {
  const std::size_t D = f.gens.size();
  const std::int64_t e = f.e;
  coordinate_sum cs{e, Q, cap, extra, nullptr};
  // 1-D sums are shared between box points.
  std::map<std::tuple<std::size_t, std::int64_t, std::int64_t>, window_series> cache;
  std::int64_t rad = 0;
  cs.radius = &rad;
  for (std::size_t i = 0; i < D; ++i)
    for (const auto& b : f.box) {
      const std::int64_t t = to_int64(rational(b.beta[i] * e));
      for (std::int64_t rho = 0; rho < e; ++rho) {
        auto key = std::make_tuple(i, t, rho);
        if (cache.count(key)) continue;
        cache[key] = primal ? cs.primal_layout(f.weight_u[i], t, rho) : cs.dual_layout(f.weight_u[i], t, rho);
      }
    }
  if (radius) *radius = std::max(*radius, rad);
  auto encode = [&](const ivec& v) {
    std::int64_t k = 0;
    for (auto x : v) k = k * e + x;
    return k;
  };
  auto per_box = parallel_map(f.box.size(), threads, [&](std::size_t bi) {
    const auto& b = f.box[bi];
    std::map<std::int64_t, std::pair<ivec, window_series>> dp;
    dp[0] = {ivec(D, 0), window_series::one(Q, cap)};
    for (std::size_t i = 0; i < D; ++i) {
      const std::int64_t t = to_int64(rational(b.beta[i] * e));
      std::map<std::int64_t, std::pair<ivec, window_series>> next;
      for (const auto& [key, st] : dp) {
        for (std::int64_t rho = 0; rho < e; ++rho) {
          const auto& fac = cache.at(std::make_tuple(i, t, rho));
          if (fac.terms.empty()) continue;
          ivec ns(D);
          for (std::size_t j = 0; j < D; ++j) ns[j] = mod_e(st.first[j] + rho * f.cols[i][j], e);
          window_series p = st.second * fac;
          auto k = encode(ns);
          auto it = next.find(k);
          if (it == next.end()) next.emplace(k, std::make_pair(ns, std::move(p)));
          else it->second.second += p;
        }
      }
      dp = std::move(next);
    }
    auto it = dp.find(0);
    std::size_t n = dp.size();
    if (it == dp.end()) {
      window_series z;
      z.qcap = Q;
      z.cap = cap;
      return std::make_pair(z, n);
    }
    return std::make_pair(it->second.second, n);
  });
  window_series total;
  total.qcap = Q;
  total.cap = cap;
  for (auto& [s, n] : per_box) {
    total += s;
    if (classes) *classes = std::max(*classes, n);
  }
  return total;
}

inline window_series to_window(const qy_series& s0, std::int64_t e, std::int64_t Q, std::int64_t cap) {
  const qy_series s = s0.rescaled(e, e);
  window_series w;
  w.qcap = Q;
  w.cap = cap;
  for (const auto& t : s.terms())
    w.terms.push_back({t.q, t.y, checked_int(to_int64(t.c))});
  w.normalize();
  w.recompute_kappa();
  return w;
}

// Support bound for the elliptic genus of a d-fold: |l| <= d/2 + n at q^n.
inline qy_series finalize_window(const window_series& raw, int d, int N, std::int64_t e) {
  // Units: q in 1/e, y in 1/(2e) after the y^{-d/2} shift.
  std::vector<qy_series::term> out;
  for (const auto& t : raw.terms) {
    const std::int64_t y2 = 2 * t.y - static_cast<std::int64_t>(d) * e;
    const std::int64_t q = t.q;
    // |y| <= d/2 + q  <=>  |y2| <= d e + 2 q  (y2 in 1/(2e), q in 1/e)
    if (std::abs(y2) > d * e + 2 * q)
      throw error(errc::internal, "hypersurface sum has support outside the index bound");
    out.push_back({q, y2, to_rational(t.c)});
  }
  return qy_series::from_terms(e, 2 * e, static_cast<std::int64_t>(N) * e, std::move(out)).reduced();
}

inline hypersurface_result cone_sum(const imat& gens, bool primal, int d, int N, const hypersurface_options& opt) {
  const simplicial_frame f = make_frame(gens);
  const std::int64_t e = f.e;
  const std::int64_t Q = static_cast<std::int64_t>(N) * e;
  // Certified window needed before the y^{-d/2} shift: y + q <= d + 2N.
  const std::int64_t need = (static_cast<std::int64_t>(d) + 2 * N) * e;
  std::int64_t margin = 2 * e;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::int64_t cap = need + margin;
    hypersurface_result r;
    r.method = primal ? "cone_primal" : "cone_dual";
    window_series total = residue_dp(f, primal, Q, cap, opt.extra_radius, &r.radius, opt.threads, &r.residue_classes);
    const qy_series g = pow(big_g(N), d + 2);
    window_series full = total * to_window(g, e, Q, cap);
    if (full.cap < need) {
      margin += need - full.cap + e;
      continue;
    }
    // Keep the certified window only.
    window_series cut = full;
    cut.cap = need;
    cut.normalize();
    r.y_window = full.cap / e;
    r.series = finalize_window(cut, d, N, e);
    return r;
  }
  throw error(errc::stabilization_failure, "y window did not certify");
}

// Brute path: per lattice point m, the exact cone sum over (1-y)^D, summed over
// growing shells. Handles non-simplicial cones through a triangulation.
struct signed_cone {
  imat gens;
  int coefficient;
  std::vector<box_point> box;
};

inline std::vector<signed_cone> polygon_cone_decomposition(const imat& verts2d) {
  // Vertices around the origin in angular order, fanned from the first one.
  std::vector<std::size_t> order(verts2d.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto half = [](const ivec& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const ivec &u = verts2d[a], &v = verts2d[b];
    if (half(u) != half(v)) return half(u) < half(v);
    return u[0] * v[1] - u[1] * v[0] > 0;
  });
  std::vector<std::vector<std::size_t>> simplices;
  for (std::size_t i = 1; i + 1 < order.size(); ++i) simplices.push_back({order[0], order[i], order[i + 1]});
  std::set<std::vector<std::size_t>> faces;
  for (const auto& s : simplices)
    for (std::size_t mask = 0; mask < 8; ++mask) {
      std::vector<std::size_t> f;
      for (std::size_t k = 0; k < 3; ++k)
        if (mask & (1u << k)) f.push_back(s[k]);
      std::sort(f.begin(), f.end());
      faces.insert(f);
    }
  const imat gens = cone_generators(verts2d);
  std::vector<signed_cone> out;
  for (const auto& phi : faces) {
    int c = 0;
    for (const auto& tau : faces)
      if (std::includes(tau.begin(), tau.end(), phi.begin(), phi.end()))
        c += ((tau.size() - phi.size()) % 2 == 0) ? 1 : -1;
    if (c == 0) continue;
    signed_cone sc;
    for (auto i : phi) sc.gens.push_back(gens[i]);
    sc.coefficient = c;
    sc.box = phi.empty() ? std::vector<box_point>{box_point{ivec(3, 0), {}}} : box_points(sc.gens);
    out.push_back(std::move(sc));
  }
  return out;
}

// Per-m contribution inside the window q <= N, y + q <= cap, expanding the
// zero pairings y-adically.
inline void per_m_term(const std::vector<signed_cone>& pieces, const ivec& m, std::int64_t N, std::int64_t cap,
                       std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>& acc) {
  const std::size_t D = m.size();
  const std::int64_t md = m[D - 1];
  for (const auto& pc : pieces) {
    std::vector<std::int64_t> ks;
    for (const auto& g : pc.gens) ks.push_back(dot(m, g));
    for (const auto& b : pc.box) {
      const std::int64_t bq = dot(m, b.n) + md;
      const std::int64_t by = b.n[D - 1] - md;
      const std::int64_t qlim = N - bq, wlim = cap - (bq + by);
      if (qlim < 0 || wlim < 0) continue;
      // Every factor term has y + q >= 0, so the window prunes partial products.
      std::function<void(std::size_t, std::int64_t, std::int64_t, std::int64_t)> rec =
          [&](std::size_t i, std::int64_t q, std::int64_t y, std::int64_t c) {
            if (i == ks.size()) {
              acc[{q + bq, y + by}] += c * pc.coefficient;
              return;
            }
            const std::int64_t k = ks[i];
            if (k > 0) {
              for (std::int64_t j = 0; q + k * j <= qlim && q + y + (k + 1) * j <= wlim; ++j) rec(i + 1, q + k * j, y + j, c);
            } else if (k < 0) {
              for (std::int64_t j = 1; q - k * j <= qlim && q + y + (-k - 1) * j <= wlim; ++j) {
                rec(i + 1, q - k * j, y - j, -c);
                if (k == -1 && q + y > wlim) break;
              }
            } else {
              for (std::int64_t j = 0; q + y + j <= wlim; ++j) rec(i + 1, q, y + j, c);
            }
          };
      rec(0, 0, 0, 1);
    }
  }
}

inline hypersurface_result per_m_sum(const imat& dual_vertices, int d, int N, const hypersurface_options& opt) {
  std::vector<signed_cone> pieces;
  if (dual_vertices.size() == static_cast<std::size_t>(d) + 2) {
    const imat g = cone_generators(dual_vertices);
    pieces.push_back({g, 1, box_points(g)});
  } else if (d == 1) {
    pieces = polygon_cone_decomposition(dual_vertices);
  } else {
    throw error(errc::non_simplicial, "non-simplicial dual polytopes are supported in dimension 2 only");
  }
  fan shell_fan;
  shell_fan.rank = d + 2;
  shell_fan.rays = cone_generators(dual_vertices);
  const std::int64_t need = d + 2 * static_cast<std::int64_t>(N);
  const std::int64_t cap = need + 2;
  using key = std::pair<std::int64_t, std::int64_t>;
  std::map<key, std::int64_t> total;
  int stable = 0, R = 0;
  for (;; ++R) {
    if (R > opt.enum_cap)
      throw error(errc::stabilization_failure,
                  "no two consecutive stable growths up to radius " + std::to_string(opt.enum_cap));
    const auto pts = shell(shell_fan, R);
    auto parts = parallel_map(pts.size(), opt.threads, [&](std::size_t i) {
      std::map<key, std::int64_t> a;
      per_m_term(pieces, pts[i], N, cap, a);
      return a;
    });
    bool changed = false;
    for (const auto& a : parts)
      for (const auto& [k, v] : a)
        if (v != 0) {
          total[k] += v;
          changed = true;
        }
    stable = changed ? 0 : stable + 1;
    if (stable >= 2) break;
  }
  window_series w;
  w.qcap = N;
  w.cap = cap;
  for (const auto& [k, v] : total) {
    if (v == 0) continue;
    if (k.first < 0) throw error(errc::stabilization_failure, "negative q-powers in the lattice sum did not cancel");
    w.terms.push_back({k.first, k.second, checked_int(v)});
  }
  w.normalize();
  w.recompute_kappa();
  window_series full = w * to_window(pow(big_g(N), d + 2), 1, N, cap);
  if (full.cap < need) throw error(errc::internal, "per-m window too small");
  full.cap = need;
  full.normalize();
  hypersurface_result r;
  r.method = "per_m";
  r.radius = R;
  r.y_window = full.cap;
  r.series = finalize_window(full, d, N, 1);
  return r;
}

}  // namespace detail

/// Elliptic genus of the Calabi-Yau hypersurface attached to a reflexive
/// polytope, exact through q^N.
inline hypersurface_result ell_hypersurface(const reflexive_polytope& p, int N, const hypersurface_options& opt = {}) {
  const int d = p.dim - 1;
  const std::size_t D = static_cast<std::size_t>(p.dim) + 1;
  const bool dual_simplex = p.facet_normals.size() == D;
  const bool primal_simplex = p.vertices.size() == D;
  using M = hypersurface_options::method;
  M path = opt.path;
  const imat kstar = cone_generators(p.facet_normals);
  const imat k = cone_generators(p.vertices);
  if (path == M::automatic) {
    if (dual_simplex && primal_simplex)
      path = abs(determinant(kstar)) <= abs(determinant(k)) ? M::cone_dual : M::cone_primal;
    else if (dual_simplex) path = M::cone_dual;
    else if (primal_simplex) path = M::cone_primal;
    else path = M::per_m;
  }
  switch (path) {
    case M::cone_dual:
      if (!dual_simplex) throw error(errc::non_simplicial, "dual polytope is not a simplex");
      return detail::cone_sum(kstar, false, d, N, opt);
    case M::cone_primal:
      if (!primal_simplex) throw error(errc::non_simplicial, "polytope is not a simplex");
      return detail::cone_sum(k, true, d, N, opt);
    default:
      return detail::per_m_sum(p.facet_normals, d, N, opt);
  }
}

struct mirror_report {
  bool holds = false;
  int sign = 1;
  qy_series ell;
  qy_series ell_dual;
  std::optional<discrepancy> first_difference;
};

/// Ell(X) = (-1)^d Ell(X*) coefficientwise through q^N.
inline mirror_report mirror_check(const reflexive_polytope& p, int N, const hypersurface_options& opt = {}) {
  mirror_report r;
  const int d = p.dim - 1;
  r.sign = d % 2 == 0 ? 1 : -1;
  r.ell = ell_hypersurface(p, N, opt).series;
  r.ell_dual = ell_hypersurface(dualize(p), N, opt).series;
  r.first_difference = first_difference(r.ell, r.ell_dual.scaled(rational(r.sign)));
  r.holds = !r.first_difference;
  return r;
}

struct jacobi_report {
  bool holds = false;
  std::string failed;  // "negative-q", "y-inversion" or "elliptic-law"
  std::optional<discrepancy> first_failure;
};

/// Weak Jacobi checks for a weight-0 index-d/2 form through q^N: no negative
/// q-powers, invariance under y -> 1/y, and the elliptic law with sign (-1)^d.
inline jacobi_report jacobi_property_check(const qy_series& series, int d, int N) {
  jacobi_report r;
  const qy_series s = series.truncated(N);
  if (s.q_max() < static_cast<std::int64_t>(N) * s.q_den())
    throw error(errc::truncation_too_shallow, "series is not certified to the requested order");
  if (auto f = negative_q_failure(s)) {
    r.failed = "negative-q";
    r.first_failure = f;
    return r;
  }
  if (auto f = y_inversion_failure(s, 1)) {
    r.failed = "y-inversion";
    r.first_failure = f;
    return r;
  }
  if (auto f = elliptic_law_failure(s, make_rational(d, 2), d % 2 == 0 ? 1 : -1)) {
    r.failed = "elliptic-law";
    r.first_failure = f;
    return r;
  }
  r.holds = true;
  return r;
}

}  // namespace ellgen
