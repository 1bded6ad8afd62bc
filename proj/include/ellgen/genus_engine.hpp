#pragma once

#include <map>
#include <string>
#include <vector>

#include "ellgen/modforms.hpp"
#include "ellgen/qy_series.hpp"
#include "ellgen/x_series.hpp"

namespace ellgen {

// ---------------------------------------------------------------------------
// Standard characteristic series

namespace detail {

// sum_k s^k x^k / (k + offset)!, used for (e^(sx) - 1)/x style series.
inline x_series<rational> exp_like(int x_max, const rational& s, int offset) {
  std::vector<rational> v;
  for (int k = 0; k <= x_max; ++k) {
    rational f = 1;
    for (int i = 2; i <= k + offset; ++i) f *= i;
    v.push_back(rpow(s, k) / f);
  }
  return x_series<rational>(std::move(v));
}

// sinh(s x)/(s x) = sum (s x)^(2j) / (2j+1)!
inline x_series<rational> sinhc(int x_max, const rational& s) {
  std::vector<rational> v;
  rational f = 1;
  for (int k = 0; k <= x_max; ++k) {
    if (k > 0) f *= (k + 1);
    v.push_back(k % 2 == 0 ? rpow(s, k) / f : rational(0));
  }
  return x_series<rational>(std::move(v));
}

inline x_series<rational> cosh_series(int x_max) {
  std::vector<rational> v;
  rational f = 1;
  for (int k = 0; k <= x_max; ++k) {
    if (k > 0) f *= k;
    v.push_back(k % 2 == 0 ? 1 / f : rational(0));
  }
  return x_series<rational>(std::move(v));
}

}  // namespace detail

/// x / (1 - e^(-x)).
inline x_series<rational> todd_series(int x_max) { return recip(detail::exp_like(x_max, -1, 1)); }

/// x / tanh(x).
inline x_series<rational> l_series(int x_max) { return detail::cosh_series(x_max) * recip(detail::sinhc(x_max, 1)); }

/// (x/2) / sinh(x/2).
inline x_series<rational> ahat_series(int x_max) { return recip(detail::sinhc(x_max, rational(1, 2))); }

template <class R>
x_series<R> lift_series(const x_series<rational>& a) {
  std::vector<R> v;
  for (const auto& c : a.coeffs()) v.push_back(ring_constant<R>(c));
  return x_series<R>(std::move(v));
}

/// (x/2)/sinh(x/2) prod_n [(1 - q^n)^2 / ((1 - q^n e^x)(1 - q^n e^-x))]^((-1)^n), exact through q^N.
inline x_series<qy_series> lso_char_series(int x_max, int N) {
  using X = x_series<qy_series>;
  X s = lift_series<qy_series>(ahat_series(x_max));
  for (int k = 0; k <= x_max; ++k) s[k] = s[k].truncated(N);
  auto one_minus_qe = [&](int n, int sx) {
    std::vector<qy_series> v;
    rational f = 1;
    for (int k = 0; k <= x_max; ++k) {
      if (k > 0) f *= k;
      std::vector<qy_series::term> t{{n, 0, -rpow(rational(sx), k) / f}};
      if (k == 0) t.push_back({0, 0, rational(1)});
      v.push_back(qy_series::from_terms(1, 1, N, std::move(t)));
    }
    return X(std::move(v));
  };
  for (int n = 1; n <= N; ++n) {
    X f = one_minus_qe(n, 1) * one_minus_qe(n, -1);
    for (int k = 0; k <= x_max; ++k) {
      f[k] = over_one_minus<rational>(f[k], rational(1), n, 0);
      f[k] = over_one_minus<rational>(f[k], rational(1), n, 0);
    }
    if (n % 2 == 1) {
      s = s * f;
    } else {
      s = s * recip<qy_series>(f, [](const qy_series& c) { return recip(c); });
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Polynomials in abstract Chern classes

/// Monomial c_1^e1 c_2^e2 ... keyed by its exponent vector.
using chern_monomial = std::vector<int>;

template <class R>
using chern_poly = std::map<chern_monomial, R>;

inline int weighted_degree(const chern_monomial& m) {
  int d = 0;
  for (std::size_t i = 0; i < m.size(); ++i) d += static_cast<int>(i + 1) * m[i];
  return d;
}

/// Writes a monomial as "c1^2*c2"; the empty monomial is "1".
inline std::string monomial_name(const chern_monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "c" + std::to_string(i + 1);
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

inline chern_monomial partition_monomial(const std::vector<int>& parts, int d) {
  chern_monomial m(static_cast<std::size_t>(d), 0);
  for (int p : parts) ++m[static_cast<std::size_t>(p - 1)];
  return m;
}

namespace detail {

template <class R>
void add_into(chern_poly<R>& a, const chern_monomial& m, const R& c) {
  auto it = a.find(m);
  if (it == a.end()) {
    if (!ring_is_zero(c)) a.emplace(m, c);
    return;
  }
  it->second = it->second + c;
  if (ring_is_zero(it->second)) a.erase(it);
}

template <class R>
chern_poly<R> poly_mul(const chern_poly<R>& a, const chern_poly<R>& b, int max_degree) {
  chern_poly<R> r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      chern_monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      if (weighted_degree(m) > max_degree) continue;
      add_into(r, m, R(ca * cb));
    }
  return r;
}

template <class R>
chern_poly<R> poly_scaled(const chern_poly<R>& a, const R& s) {
  chern_poly<R> r;
  for (const auto& [m, c] : a) add_into(r, m, R(c * s));
  return r;
}

template <class R>
void poly_add(chern_poly<R>& a, const chern_poly<R>& b) {
  for (const auto& [m, c] : b) add_into(a, m, c);
}

}  // namespace detail

/// Multiplicative sequence K_1..K_d of a characteristic series.
template <class R>
struct multiplicative_sequence {
  int degree = 0;
  std::vector<chern_poly<R>> k;  // k[j] is K_j, k[0] = 1

  const chern_poly<R>& operator[](int j) const { return k[static_cast<std::size_t>(j)]; }

  /// K_j at numeric Chern classes c[1..d].
  R evaluate(int j, const std::vector<R>& c) const {
    R acc = ring_constant<R>(0);
    for (const auto& [m, coef] : (*this)[j]) {
      R t = coef;
      for (std::size_t i = 0; i < m.size(); ++i)
        for (int e = 0; e < m[i]; ++e) t = t * c[i + 1];
      acc = acc + t;
    }
    return acc;
  }
};

/// Expresses prod_i Q(x_i) in elementary symmetric functions: log, Newton identities, exp.
template <class R>
multiplicative_sequence<R> sequence_from_series(const x_series<R>& q, int d) {
  if (q.x_max() < d) throw error(errc::truncation_too_shallow, "characteristic series shorter than the degree");
  const x_series<R> qt = q.truncated(d);
  const R one = ring_constant<R>(1);
  if (!ring_is_zero(qt[0] - one)) throw error(errc::non_unit_constant_term, "characteristic series must start with 1");
  const x_series<R> lg = log_unit(qt);

  auto unit = [&](int i) {
    chern_monomial m(static_cast<std::size_t>(d), 0);
    if (i > 0) m[static_cast<std::size_t>(i - 1)] = 1;
    return m;
  };
  // Newton: p_k = sum_{i=1}^{k-1} (-1)^(i-1) c_i p_{k-i} + (-1)^(k-1) k c_k
  std::vector<chern_poly<R>> p(static_cast<std::size_t>(d + 1));
  for (int kk = 1; kk <= d; ++kk) {
    chern_poly<R> acc;
    for (int i = 1; i < kk; ++i) {
      chern_poly<R> ci{{unit(i), ring_constant<R>(i % 2 == 1 ? 1 : -1)}};
      detail::poly_add(acc, detail::poly_mul(ci, p[static_cast<std::size_t>(kk - i)], d));
    }
    detail::add_into(acc, unit(kk), ring_constant<R>(rational(kk % 2 == 1 ? kk : -kk)));
    p[static_cast<std::size_t>(kk)] = std::move(acc);
  }
  chern_poly<R> logp;
  for (int kk = 1; kk <= d; ++kk) detail::poly_add(logp, detail::poly_scaled(p[static_cast<std::size_t>(kk)], lg[kk]));

  // exp(logp), truncated at weighted degree d
  chern_poly<R> total{{unit(0), one}};
  chern_poly<R> pw{{unit(0), one}};
  for (int m = 1; m <= d; ++m) {
    pw = detail::poly_scaled(detail::poly_mul(pw, logp, d), ring_constant<R>(rational(1, m)));
    detail::poly_add(total, pw);
  }
  multiplicative_sequence<R> ms;
  ms.degree = d;
  ms.k.resize(static_cast<std::size_t>(d + 1));
  for (const auto& [m, c] : total) ms.k[static_cast<std::size_t>(weighted_degree(m))].emplace(m, c);
  return ms;
}

// ---------------------------------------------------------------------------
// Manifold models

struct manifold_model {
  enum class kind { projective_space, hypersurface, product };
  kind type = kind::projective_space;
  int n = 0;  // ambient dimension
  int k = 1;  // hypersurface degree
  std::vector<manifold_model> factors;

  static manifold_model projective_space(int n) {
    manifold_model m;
    m.type = kind::projective_space;
    m.n = n;
    return m;
  }
  static manifold_model hypersurface(int n, int k) {
    if (n < 1 || k < 1) throw error(errc::validation_error, "hypersurface needs n >= 1 and k >= 1");
    manifold_model m;
    m.type = kind::hypersurface;
    m.n = n;
    m.k = k;
    return m;
  }
  static manifold_model product(std::vector<manifold_model> fs) {
    manifold_model m;
    m.type = kind::product;
    m.factors = std::move(fs);
    return m;
  }

  int dim() const {
    switch (type) {
      case kind::projective_space: return n;
      case kind::hypersurface: return n - 1;
      case kind::product: {
        int d = 0;
        for (const auto& f : factors) d += f.dim();
        return d;
      }
    }
    return 0;
  }

  /// Largest x-degree a characteristic series must carry.
  int x_degree() const {
    if (type != kind::product) return n;
    int d = 0;
    for (const auto& f : factors) d = std::max(d, f.x_degree());
    return d;
  }

  std::string name() const {
    switch (type) {
      case kind::projective_space: return "P" + std::to_string(n);
      case kind::hypersurface: return "hyp:" + std::to_string(n) + "," + std::to_string(k);
      case kind::product: {
        std::string s;
        for (const auto& f : factors) s += (s.empty() ? "" : "x") + f.name();
        return s;
      }
    }
    return "";
  }
};

inline rational exact_quotient(const rational& a, const rational& b) {
  if (is_zero(b)) throw error(errc::not_invertible, "division by zero");
  return a / b;
}

inline qy_series exact_quotient(const qy_series& a, const qy_series& b) { return divide(a, b); }

/// Integral of prod Q(roots of TM). Handles Q(0) != 1 through the trivial summand of
/// T P^n + O = O(1)^(n+1), dividing exactly by powers of Q(0).
template <class R>
R genus_of_model(const x_series<R>& q, const manifold_model& m) {
  using X = x_series<R>;
  if (m.type == manifold_model::kind::product) {
    R r = ring_constant<R>(1);
    for (const auto& f : m.factors) r = r * genus_of_model(q, f);
    return r;
  }
  const int n = m.n;
  if (q.x_max() < n) throw error(errc::truncation_too_shallow, "characteristic series too short for " + m.name());
  const X qn = q.truncated(n);
  const R q0 = qn[0];
  const X top = pow(qn, n + 1);
  if (m.type == manifold_model::kind::projective_space) return exact_quotient(top[n], q0);

  // Q0^n / Q(kx) = sum_j (-1)^j (Q(kx) - Q0)^j Q0^(n-1-j) mod x^n
  const X qk = qn.scaled_arg(rational(m.k));
  const X dev = qk - X::constant(q0, n);
  X s = X::constant(ring_constant<R>(0), n);
  X dj = X::constant(ring_constant<R>(1), n);
  std::vector<R> q0pow{ring_constant<R>(1)};
  for (int j = 1; j <= n + 1; ++j) q0pow.push_back(q0pow.back() * q0);
  for (int j = 0; j <= n - 1; ++j) {
    const R c = ring_constant<R>(j % 2 == 0 ? 1 : -1) * q0pow[static_cast<std::size_t>(n - 1 - j)];
    s = s + dj.scaled(c);
    dj = dj * dev;
  }
  const X integrand = top * s.times_x().scaled(ring_constant<R>(m.k));
  return exact_quotient(integrand[n], q0pow[static_cast<std::size_t>(n + 1)]);
}

// ---------------------------------------------------------------------------
// Chern numbers

namespace detail {

// Polynomial in one generator per product factor, truncated per variable.
struct trunc_poly {
  std::vector<int> bound;
  std::map<std::vector<int>, rational> c;

  trunc_poly mul(const trunc_poly& o) const {
    trunc_poly r{bound, {}};
    for (const auto& [ea, ca] : c)
      for (const auto& [eb, cb] : o.c) {
        std::vector<int> e(ea.size());
        bool ok = true;
        for (std::size_t i = 0; i < e.size(); ++i) {
          e[i] = ea[i] + eb[i];
          if (e[i] > bound[i]) ok = false;
        }
        if (!ok) continue;
        r.c[e] += ca * cb;
      }
    std::erase_if(r.c, [](const auto& kv) { return is_zero(kv.second); });
    return r;
  }

  trunc_poly homogeneous(int degree) const {
    trunc_poly r{bound, {}};
    for (const auto& [e, v] : c) {
      int s = 0;
      for (int x : e) s += x;
      if (s == degree) r.c[e] = v;
    }
    return r;
  }
};

inline void leaf_factors(const manifold_model& m, std::vector<manifold_model>& out) {
  if (m.type == manifold_model::kind::product) {
    for (const auto& f : m.factors) leaf_factors(f, out);
  } else {
    out.push_back(m);
  }
}

inline void partitions_into(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_into(n - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Partitions of n, parts in non-increasing order.
inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  detail::partitions_into(n, n, cur, out);
  return out;
}

/// Chern numbers c_lambda[M] for all partitions lambda of dim M, keyed by monomial.
inline std::map<chern_monomial, integer> chern_numbers(const manifold_model& m) {
  const int d = m.dim();
  if (d > 6) throw error(errc::validation_error, "Chern numbers supported up to dimension 6");
  std::vector<manifold_model> leaves;
  detail::leaf_factors(m, leaves);
  const std::size_t r = leaves.size();
  std::vector<int> bound;
  rational weight = 1;
  for (const auto& f : leaves) {
    bound.push_back(f.dim());
    if (f.type == manifold_model::kind::hypersurface) weight *= f.k;
  }
  detail::trunc_poly total{bound, {{std::vector<int>(r, 0), rational(1)}}};
  for (std::size_t i = 0; i < r; ++i) {
    const auto& f = leaves[i];
    detail::trunc_poly ci{bound, {}};
    // (1+h)^(n+1) / (1+kh) for hypersurfaces, (1+h)^(n+1) for P^n
    for (int a = 0; a <= bound[i]; ++a) {
      rational v = 0;
      for (int j = 0; j <= a; ++j) {
        rational inv = 1;
        if (f.type == manifold_model::kind::hypersurface) inv = rpow(rational(-f.k), j);
        else if (j > 0) continue;
        v += binomial(rational(f.n + 1), a - j) * inv;
      }
      std::vector<int> e(r, 0);
      e[i] = a;
      if (!is_zero(v)) ci.c[e] = v;
    }
    total = total.mul(ci);
  }
  std::vector<detail::trunc_poly> cls;
  for (int j = 0; j <= d; ++j) cls.push_back(total.homogeneous(j));
  std::map<chern_monomial, integer> out;
  for (const auto& part : partitions(d)) {
    detail::trunc_poly p{bound, {{std::vector<int>(r, 0), rational(1)}}};
    for (int x : part) p = p.mul(cls[static_cast<std::size_t>(x)]);
    rational v = 0;
    auto it = p.c.find(bound);
    if (it != p.c.end()) v = it->second * weight;
    out[partition_monomial(part, d)] = v.get_num();
  }
  if (d == 0) out[chern_monomial{}] = 1;
  return out;
}

inline integer euler_number(const manifold_model& m) {
  const int d = m.dim();
  if (d == 0) return 1;
  chern_monomial top(static_cast<std::size_t>(d), 0);
  top[static_cast<std::size_t>(d - 1)] = 1;
  return chern_numbers(m).at(top);
}

/// Genus from a multiplicative sequence and Chern numbers (rational series only).
inline rational genus_from_chern_numbers(const multiplicative_sequence<rational>& ms, const manifold_model& m) {
  const int d = m.dim();
  if (d == 0) return 1;
  const auto cn = chern_numbers(m);
  rational acc = 0;
  for (const auto& [mono, coef] : ms[d]) acc += coef * rational(cn.at(mono));
  return acc;
}

// ---------------------------------------------------------------------------
// Elliptic genus and its specializations

/// Two-variable elliptic genus of a model, exact through q^N.
inline qy_series elliptic_genus_model(const manifold_model& m, int N) {
  const int xd = std::max(m.x_degree(), 0);
  const x_series<qy_series> q = two_var_char_series(xd, N);
  qy_series g = genus_of_model(q, m).truncated(N).reduced();
  if (g.q_max() < N) throw error(errc::truncation_too_shallow, "elliptic genus not certified to the requested order");
  return g;
}

/// (-1)^(d/2) Ell(M; y = -1) G(-1, q)^(-d).
inline qy_series lso_genus_model(const manifold_model& m, int N) {
  const int d = m.dim();
  if (d % 2 != 0) throw error(errc::validation_error, "y = -1 specialization needs even dimension");
  const qy_series ell = elliptic_genus_model(m, N);
  const qy_series at = eval_y(ell, rational(-1));
  const qy_series g = eval_y(big_g(N), rational(-1));
  qy_series r = at;
  if (d > 0) r = r * pow(recip(g), d);
  if ((d / 2) % 2 == 1) r = -r;
  return r.truncated(N);
}

/// Genus of the LSO characteristic series, exact through q^N.
inline qy_series lso_char_genus(const manifold_model& m, int N) {
  return genus_of_model(lso_char_series(std::max(m.x_degree(), 0), N), m).truncated(N);
}

/// chi_y(X) = Ell(X; q = 0, -y) (-y)^(d/2) as a polynomial chi[p] y^p.
inline std::vector<rational> chi_y_from_ell(const qy_series& ell0, int d) {
  const qy_series ell = ell0.rescaled(ell0.q_den(), ell0.y_den() % 2 == 0 ? ell0.y_den() : 2 * ell0.y_den());
  const std::int64_t yd = ell.y_den();
  std::vector<rational> chi(static_cast<std::size_t>(d + 1), rational(0));
  for (const auto& t : ell.terms()) {
    if (t.q != 0) continue;
    // (-y)^(l + d/2) with l = t.y / yd
    const rational p = make_rational(t.y, yd) + make_rational(d, 2);
    if (!is_integer(p)) throw error(errc::validation_error, "q^0 exponent incompatible with the dimension");
    const std::int64_t pi = to_int64(p);
    if (pi < 0 || pi > d) throw error(errc::validation_error, "q^0 support exceeds the dimension");
    chi[static_cast<std::size_t>(pi)] += (pi % 2 == 0 ? t.c : rational(-t.c));
  }
  return chi;
}

inline std::vector<rational> chi_y_model(const manifold_model& m) { return chi_y_from_ell(elliptic_genus_model(m, 0), m.dim()); }

using hodge_table = std::vector<std::vector<std::int64_t>>;

struct hodge_chern_result {
  rational lhs;
  rational rhs;
  bool chi_y_matches = false;  // table chi_y equals the engine's chi_y
  bool holds() const { return lhs == rhs; }
};

/// chi^p = sum_q (-1)^q h^{p,q}.
inline std::vector<rational> chi_p_from_hodge(const hodge_table& h) {
  std::vector<rational> chi;
  for (const auto& row : h) {
    rational s = 0;
    for (std::size_t q = 0; q < row.size(); ++q) s += (q % 2 == 0 ? 1 : -1) * rational(static_cast<long>(row[q]));
    chi.push_back(s);
  }
  return chi;
}

inline void validate_hodge(const hodge_table& h, int d) {
  const std::size_t n = static_cast<std::size_t>(d + 1);
  if (h.size() != n) throw error(errc::inconsistent_hodge_table, "table must be (d+1)x(d+1)");
  for (const auto& row : h)
    if (row.size() != n) throw error(errc::inconsistent_hodge_table, "table must be (d+1)x(d+1)");
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      if (h[p][q] < 0) throw error(errc::inconsistent_hodge_table, "negative Hodge number");
      if (h[p][q] != h[q][p]) throw error(errc::inconsistent_hodge_table, "h^{p,q} != h^{q,p}");
      if (h[p][q] != h[n - 1 - p][n - 1 - q]) throw error(errc::inconsistent_hodge_table, "Serre symmetry fails");
    }
}

/// sum_{p>=2} (-1)^p C(p,2) chi^p against (1/12)((1/2) d (3d-5) c_d + c_{d-1} c_1)[X].
inline hodge_chern_result hodge_chern_details(const manifold_model& m, const hodge_table& h) {
  const int d = m.dim();
  validate_hodge(h, d);
  const auto chi = chi_p_from_hodge(h);
  hodge_chern_result r;
  for (int p = 2; p <= d; ++p) r.lhs += (p % 2 == 0 ? 1 : -1) * binomial(rational(p), 2) * chi[static_cast<std::size_t>(p)];
  if (d >= 1) {
    const auto cn = chern_numbers(m);
    chern_monomial top(static_cast<std::size_t>(d), 0), mixed(static_cast<std::size_t>(d), 0);
    top[static_cast<std::size_t>(d - 1)] += 1;
    mixed[0] += 1;
    if (d >= 2) mixed[static_cast<std::size_t>(d - 2)] += 1;
    const rational cd = rational(cn.at(top));
    const rational cmix = rational(cn.at(mixed));  // c_0 c_1 = c_1 when d = 1
    r.rhs = (make_rational(d * (3 * d - 5), 2) * cd + cmix) / 12;
  }
  r.chi_y_matches = (chi_y_model(m) == chi);
  return r;
}

inline bool hodge_chern_check(const manifold_model& m, const hodge_table& h) {
  return hodge_chern_details(m, h).holds();
}

}  // namespace ellgen
