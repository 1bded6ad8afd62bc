#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ellgen/error.hpp"
#include "ellgen/genus_engine.hpp"
#include "ellgen/qy_series.hpp"

namespace ellgen {

/// Integral coefficients c(m, l) of an elliptic genus of a d-fold, with
/// m >= 0 and 2l = d mod 2, certified to q-order q_order.
struct genus_coefficients {
  int dim = 0;
  qy_series series;  // q_den 1, y_den 2
  std::int64_t q_order = 0;

  static genus_coefficients from_series(const qy_series& s0, int d) {
    if (s0.q_exact()) throw error(errc::validation_error, "genus coefficients need a certified q-order");
    const qy_series r = s0.reduced();
    if (r.q_den() != 1) throw error(errc::validation_error, "genus has fractional q-exponents");
    if (2 % r.y_den() != 0) throw error(errc::validation_error, "genus y-exponents are not in (1/2)Z");
    genus_coefficients g;
    g.dim = d;
    g.series = r.rescaled(1, 2);
    g.q_order = g.series.q_max();
    for (const auto& t : g.series.terms()) {
      if (t.q < 0) throw error(errc::validation_error, "negative q-exponent in a genus");
      if (!is_integer(t.c)) throw error(errc::validation_error, "non-integer genus coefficient " + to_string(t.c));
      if (((t.y - d) % 2 + 2) % 2 != 0) throw error(errc::validation_error, "y-exponent parity does not match the dimension");
    }
    return g;
  }
};

/// Power series in an auxiliary variable (t or p) with series coefficients.
struct t_series {
  int t_max = 0;
  std::vector<qy_series> coeffs;  // coeffs[n] is the t^n coefficient

  const qy_series& operator[](int n) const { return coeffs.at(static_cast<std::size_t>(n)); }
};

namespace detail {

// exp of L = sum_{n>=1} L_n t^n through t^n_max: n E_n = sum_k k L_k E_{n-k}.
inline t_series exp_t(const std::vector<qy_series>& L, int n_max, std::int64_t q_den, std::int64_t y_den,
                      std::int64_t q_max) {
  t_series out;
  out.t_max = n_max;
  out.coeffs.push_back(qy_series::constant(1, q_max).rescaled(q_den, y_den));
  for (int n = 1; n <= n_max; ++n) {
    qy_series acc = qy_series::zero(q_den, y_den, q_max);
    for (int k = 1; k <= n; ++k) acc = acc + (L[static_cast<std::size_t>(k)] * out.coeffs[static_cast<std::size_t>(n - k)]).scaled(rational(k));
    out.coeffs.push_back(acc.truncated(q_max).scaled(rational(1, n)));
  }
  return out;
}

inline void require_integral(const t_series& s, const char* what) {
  for (const auto& c : s.coeffs)
    for (const auto& t : c.terms())
      if (!is_integer(t.c)) throw error(errc::internal, std::string(what) + " produced a non-integral coefficient");
}

}  // namespace detail

/// prod_{i>=1} prod_{m,l} (1 - p^i y^l q^m)^(-c(mi, l)) through p^n_max and q^N.
inline t_series dmvv_product(const genus_coefficients& c, int n_max, int N) {
  if (c.q_order < static_cast<std::int64_t>(n_max) * N)
    throw error(errc::insufficient_input_order, "DMVV needs the input genus to q-order " +
                                                    std::to_string(static_cast<std::int64_t>(n_max) * N) + ", have " +
                                                    std::to_string(c.q_order));
  // log = sum_{i,m,l} c(mi,l) sum_k p^{ik} y^{lk} q^{mk} / k
  std::vector<std::vector<qy_series::term>> L(static_cast<std::size_t>(n_max) + 1);
  for (int i = 1; i <= n_max; ++i)
    for (const auto& t : c.series.terms()) {
      if (t.q % i != 0) continue;
      const std::int64_t m = t.q / i;
      if (m > N) continue;
      for (int k = 1; i * k <= n_max && m * k <= N; ++k)
        L[static_cast<std::size_t>(i * k)].push_back({m * k, t.y * k, t.c / k});
    }
  std::vector<qy_series> Ls;
  for (auto& terms : L) Ls.push_back(qy_series::from_terms(1, 2, N, std::move(terms)));
  t_series out = detail::exp_t(Ls, n_max, 1, 2, N);
  detail::require_integral(out, "DMVV product");
  return out;
}

/// prod_{m,l} (1 - t q^m y^l)^(-c(m,l)) through t^n_max and q^N.
inline t_series sym_product_series(const genus_coefficients& c, int n_max, int N) {
  if (c.q_order < N) throw error(errc::insufficient_input_order, "input genus is certified only to lower q-order");
  std::vector<std::vector<qy_series::term>> L(static_cast<std::size_t>(n_max) + 1);
  for (const auto& t : c.series.terms())
    for (int k = 1; k <= n_max && t.q * k <= N; ++k) L[static_cast<std::size_t>(k)].push_back({t.q * k, t.y * k, t.c / k});
  std::vector<qy_series> Ls;
  for (auto& terms : L) Ls.push_back(qy_series::from_terms(1, 2, N, std::move(terms)));
  t_series out = detail::exp_t(Ls, n_max, 1, 2, N);
  detail::require_integral(out, "symmetric-product series");
  return out;
}

/// Partition sum: t^n coefficient = sum over a_1 + 2a_2 + ... = n of
/// prod_i ell(q^i, y^i)^{a_i} / (a_i! i^{a_i}).
inline t_series sym_product_direct(const qy_series& ell, int n_max, std::optional<int> q_order = std::nullopt) {
  if (ell.q_exact()) throw error(errc::insufficient_input_order, "input genus has no certified q-order");
  const qy_series e = ell.reduced();
  const std::int64_t N = q_order ? *q_order : e.q_max() / e.q_den();
  if (N * e.q_den() > e.q_max()) throw error(errc::insufficient_input_order, "input genus is certified only to lower q-order");
  std::vector<qy_series> sub{qy_series()};
  for (int i = 1; i <= n_max; ++i) sub.push_back(substitute(e, i, i).truncated(N * e.q_den()));
  t_series out;
  out.t_max = n_max;
  for (int n = 0; n <= n_max; ++n) {
    qy_series acc = qy_series::zero(e.q_den(), e.y_den(), N * e.q_den());
    std::vector<int> mult(static_cast<std::size_t>(n) + 1, 0);
    std::function<void(int, int)> rec = [&](int part, int left) {
      if (left == 0) {
        qy_series term = qy_series::constant(1, N * e.q_den()).rescaled(e.q_den(), e.y_den());
        rational w = 1;
        for (int i = 1; i <= n; ++i) {
          const int a = mult[static_cast<std::size_t>(i)];
          for (int j = 0; j < a; ++j) {
            term = (term * sub[static_cast<std::size_t>(i)]).truncated(N * e.q_den());
            w *= rational(i * (j + 1));  // builds a! i^a
          }
        }
        acc = acc + term.scaled(rational(1 / w));
        return;
      }
      if (part == 0) return;
      for (int a = 0; a * part <= left; ++a) {
        mult[static_cast<std::size_t>(part)] = a;
        rec(part - 1, left - a * part);
      }
      mult[static_cast<std::size_t>(part)] = 0;
    };
    rec(n, n);
    out.coeffs.push_back(acc);
  }
  detail::require_integral(out, "partition sum");
  return out;
}

/// prod_p (1 - t (-y)^p)^(-(-1)^p chi^p) through t^n_max.
inline t_series chi_y_symprod(const std::vector<std::int64_t>& chi, int n_max) {
  std::vector<std::vector<qy_series::term>> L(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t p = 0; p < chi.size(); ++p) {
    const std::int64_t expo = (p % 2 == 0 ? 1 : -1) * chi[p];
    // -expo * log(1 - t (-y)^p) = expo * sum_k t^k (-y)^{pk} / k
    for (int k = 1; k <= n_max; ++k) {
      const std::int64_t pk = static_cast<std::int64_t>(p) * k;
      L[static_cast<std::size_t>(k)].push_back({0, pk, make_rational(pk % 2 == 0 ? expo : -expo, k)});
    }
  }
  std::vector<qy_series> Ls;
  for (auto& terms : L) Ls.push_back(qy_series::from_terms(1, 1, unbounded, std::move(terms)));
  t_series out = detail::exp_t(Ls, n_max, 1, 1, unbounded);
  detail::require_integral(out, "chi_y product");
  return out;
}

namespace detail {

inline t_series binomial_series(const rational& a, const rational& b, int n_max) {
  // (1 + t)^a (1 - t)^b
  std::vector<rational> x(static_cast<std::size_t>(n_max) + 1), z(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    x[static_cast<std::size_t>(n)] = binomial(a, n);
    z[static_cast<std::size_t>(n)] = binomial(b, n) * (n % 2 == 0 ? 1 : -1);
  }
  t_series out;
  out.t_max = n_max;
  for (int n = 0; n <= n_max; ++n) {
    rational s = 0;
    for (int k = 0; k <= n; ++k) s += x[static_cast<std::size_t>(k)] * z[static_cast<std::size_t>(n - k)];
    out.coeffs.push_back(qy_series::constant(s));
  }
  return out;
}

}  // namespace detail

/// (1 - t)^(-e): Euler numbers of symmetric products.
inline t_series macdonald_series(std::int64_t e, int n_max) {
  return detail::binomial_series(0, rational(static_cast<long>(-e)), n_max);
}

/// (1 + t)^((sigma - e)/2) / (1 - t)^((sigma + e)/2): signatures of symmetric products.
inline t_series zagier_series(std::int64_t sigma, std::int64_t e, int n_max) {
  if ((sigma - e) % 2 != 0) throw error(errc::parity_mismatch, "signature and Euler number must have the same parity");
  return detail::binomial_series(rational(static_cast<long>((sigma - e) / 2)),
                                 rational(static_cast<long>(-(sigma + e) / 2)), n_max);
}

/// chi_y polynomials of the symmetric products, read off the q^0 part of a
/// symmetric-product series of a d-fold.
inline std::vector<std::vector<rational>> chi_y_tower(const t_series& s, int d) {
  std::vector<std::vector<rational>> out;
  for (int n = 0; n <= s.t_max; ++n) out.push_back(chi_y_from_ell(s[n].truncated(0), n * d));
  return out;
}

inline rational eval_poly(const std::vector<rational>& p, const rational& y) {
  rational s = 0, pw = 1;
  for (const auto& c : p) {
    s += c * pw;
    pw *= y;
  }
  return s;
}

struct product_comparison {
  int t_power = 0;
  bool equal = false;
  std::optional<discrepancy> first_difference;
};

/// Informational comparison of the naive-quotient and DMVV series, one entry per power.
inline std::vector<product_comparison> compare_naive_dmvv(const genus_coefficients& c, int n_max, int N) {
  const t_series a = sym_product_series(c, n_max, N);
  const t_series b = dmvv_product(c, n_max, N);
  std::vector<product_comparison> out;
  for (int n = 1; n <= n_max; ++n) {
    product_comparison pc;
    pc.t_power = n;
    pc.first_difference = first_difference(a[n], b[n]);
    pc.equal = !pc.first_difference;
    out.push_back(pc);
  }
  return out;
}

}  // namespace ellgen
