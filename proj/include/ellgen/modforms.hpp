#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ellgen/qy_series.hpp"
#include "ellgen/x_series.hpp"

namespace ellgen {

namespace detail {

inline qy_series require_integral_exponents(qy_series s, const char* what) {
  s = s.reduced();
  if (s.q_den() != 1) throw error(errc::internal, std::string(what) + ": fractional q-exponents survived");
  return s;
}

// prod_{n=1}^{N} (1 - q^n)^k, q_den 1.
inline qy_series euler_power(int k, int N) {
  qy_series s = qy_series::constant(1, N);
  for (int n = 1; n <= N; ++n)
    for (int j = 0; j < k; ++j) s = times_one_minus<rational>(s, rational(1), n, 0);
  return s;
}

inline qy_series sigma_series(int power, int N, rational scale, rational constant) {
  std::vector<qy_series::term> t{{0, 0, constant}};
  for (int n = 1; n <= N; ++n) {
    integer s = 0;
    for (int dv = 1; dv <= n; ++dv)
      if (n % dv == 0) {
        integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(dv), static_cast<unsigned long>(power));
        s += p;
      }
    t.push_back({n, 0, scale * rational(s)});
  }
  return qy_series::from_terms(1, 1, N, std::move(t));
}

}  // namespace detail

/// q^(1/8) (y^(1/2) - y^(-1/2)) prod_l (1 - q^l)(1 - q^l y)(1 - q^l / y), exact through q^N.
inline qy_series theta_hat(int N) {
  const std::int64_t cap = 8 * static_cast<std::int64_t>(N);
  qy_series s = qy_series::from_terms(8, 2, cap, {{1, 1, rational(1)}, {1, -1, rational(-1)}});
  for (int l = 1; 8 * l <= cap; ++l) {
    s = times_one_minus<rational>(s, rational(1), 8 * l, 0);
    s = times_one_minus<rational>(s, rational(1), 8 * l, 2);
    s = times_one_minus<rational>(s, rational(1), 8 * l, -2);
  }
  return s;
}

/// Sum form sum_n (-1)^n q^((2n+1)^2/8) y^((2n+1)/2).
inline qy_series theta_hat_sum_form(int N) {
  std::vector<qy_series::term> t;
  for (std::int64_t n = -2 * N - 2; n <= 2 * N + 2; ++n) {
    const std::int64_t e = (2 * n + 1) * (2 * n + 1);
    if (e <= 8 * N) t.push_back({e, 2 * n + 1, rational(n % 2 == 0 ? 1 : -1)});
  }
  return qy_series::from_terms(8, 2, 8 * static_cast<std::int64_t>(N), std::move(t));
}

inline qy_series eta(int N) { return detail::euler_power(1, N).rescaled(24, 1).shifted(1, 0); }

/// eta^k computed from the product, so only one fractional prefactor appears.
inline qy_series eta_power(int k, int N) {
  return detail::euler_power(k, N).rescaled(24, 1).shifted(k, 0).reduced();
}

inline qy_series eisenstein_e4(int N) { return detail::sigma_series(3, N, 240, 1); }

inline qy_series delta(int N) { return detail::require_integral_exponents(pow(eta(N), 24).truncated(24 * N), "delta"); }

/// G(y,q) = prod_{k>=1} (1 - y q^(k-1))(1 - q^k / y) / (1 - q^k)^2.
inline qy_series big_g(int N) {
  qy_series s = qy_series::constant(1, N);
  s = times_one_minus<rational>(s, rational(1), 0, 1);
  for (int k = 1; k <= N; ++k) {
    s = times_one_minus<rational>(s, rational(1), k, 1);
    s = times_one_minus<rational>(s, rational(1), k, -1);
    s = over_one_minus<rational>(s, rational(1), k, 0);
    s = over_one_minus<rational>(s, rational(1), k, 0);
  }
  return s;
}

/// theta_2(z) = q^(1/8)(y^(1/2) + y^(-1/2)) prod (1 - q^n)(1 + q^n y)(1 + q^n / y).
inline qy_series theta2(int N, bool at_zero = false) {
  const std::int64_t cap = 8 * static_cast<std::int64_t>(N);
  std::vector<qy_series::term> t = at_zero ? std::vector<qy_series::term>{{1, 0, rational(2)}}
                                           : std::vector<qy_series::term>{{1, 1, rational(1)}, {1, -1, rational(1)}};
  qy_series s = qy_series::from_terms(8, 2, cap, std::move(t));
  const std::int64_t dy = at_zero ? 0 : 2;
  for (int n = 1; 8 * n <= cap; ++n) {
    s = times_one_minus<rational>(s, rational(1), 8 * n, 0);
    s = times_one_minus<rational>(s, rational(-1), 8 * n, dy);
    s = times_one_minus<rational>(s, rational(-1), 8 * n, -dy);
  }
  return s;
}

/// theta_3 (sign +1) or theta_4 (sign -1): prod (1 - q^n)(1 + sign q^(n-1/2) y)(1 + sign q^(n-1/2) / y).
inline qy_series theta34(int sign, int N, bool at_zero = false) {
  const std::int64_t cap = 2 * static_cast<std::int64_t>(N);
  qy_series s = qy_series::from_terms(2, 1, cap, {{0, 0, rational(1)}});
  const std::int64_t dy = at_zero ? 0 : 1;
  for (int n = 1; 2 * n - 1 <= cap; ++n) {
    s = times_one_minus<rational>(s, rational(1), 2 * n, 0);
    s = times_one_minus<rational>(s, rational(-sign), 2 * n - 1, dy);
    s = times_one_minus<rational>(s, rational(-sign), 2 * n - 1, -dy);
  }
  return s;
}

struct weak_jacobi_forms {
  qy_series phi_m2_1;
  qy_series phi_0_1;
  qy_series phi_10_1;
  qy_series phi_12_1;
};

inline qy_series phi_m2_1(int N) {
  const int M = N + 1;
  qy_series th = theta_hat(M);
  qy_series r = (th * th * recip(eta_power(6, M))).truncated(8 * static_cast<std::int64_t>(N));
  return detail::require_integral_exponents(r, "phi_{-2,1}").truncated(N);
}

inline qy_series phi_0_1(int N) {
  const int M = N + 1;
  auto ratio = [&](const qy_series& z, const qy_series& zero) { return z * z * recip(zero * zero); };
  qy_series s = ratio(theta2(M), theta2(M, true)) + ratio(theta34(1, M), theta34(1, M, true)) +
                ratio(theta34(-1, M), theta34(-1, M, true));
  s = s.scaled(rational(4));
  return detail::require_integral_exponents(s, "phi_{0,1}").truncated(N);
}

inline weak_jacobi_forms weak_jacobi_basis(int N) {
  weak_jacobi_forms f;
  f.phi_m2_1 = phi_m2_1(N);
  f.phi_0_1 = phi_0_1(N);
  const qy_series d = delta(N);
  f.phi_10_1 = (d * f.phi_m2_1).truncated(N);
  f.phi_12_1 = (d * f.phi_0_1).truncated(N);
  return f;
}

/// theta_hat(x/2 pi i - z) (with_z) or theta_hat(x/2 pi i) as an x-series through x^x_max,
/// each coefficient exact through q^N.
inline x_series<qy_series> theta_hat_x_series(int x_max, int N, bool with_z) {
  using X = x_series<qy_series>;
  const std::int64_t cap = 8 * static_cast<std::int64_t>(N);
  const std::int64_t yz = with_z ? 1 : 0;  // y^(1/2) units
  // q^(1/8) (e^(x/2) y^(-1/2) - e^(-x/2) y^(1/2))
  std::vector<qy_series> lead;
  rational f = 1;
  for (int k = 0; k <= x_max; ++k) {
    const rational h = rpow(rational(1, 2), k) / f;
    const rational sgn_k = (k % 2 == 0) ? rational(-1) : rational(1);
    lead.push_back(qy_series::from_terms(8, 2, cap, {{1, -yz, h}, {1, yz, sgn_k * h}}));
    f *= k + 1;
  }
  X s(std::move(lead));
  // (1 - q^l c e^(sx)) as an x-series
  auto factor = [&](std::int64_t dq, std::int64_t dy, int sx) {
    std::vector<qy_series> v;
    rational fk = 1;
    for (int k = 0; k <= x_max; ++k) {
      const rational c = -rpow(rational(sx), k) / fk;
      std::vector<qy_series::term> t{{dq, dy, c}};
      if (k == 0) t.push_back({0, 0, rational(1)});
      v.push_back(qy_series::from_terms(8, 2, cap, std::move(t)));
      fk *= k + 1;
    }
    return X(std::move(v));
  };
  for (int l = 1; 8 * l <= cap; ++l) {
    s = s.scaled(times_one_minus<rational>(qy_series::from_terms(8, 2, cap, {{0, 0, rational(1)}}), rational(1),
                                           8 * l, 0));
    s = s * factor(8 * l, -2 * yz, 1);
    s = s * factor(8 * l, 2 * yz, -1);
  }
  return s;
}

/// The x-linear coefficient of theta_hat(x/2 pi i); equals eta^3.
inline qy_series theta_hat_x_linear(int N) { return theta_hat_x_series(1, N, false)[1].reduced(); }

/// x theta_hat(x/2 pi i - z) / theta_hat(x/2 pi i) through x^x_max, exact through q^N.
inline x_series<qy_series> two_var_char_series(int x_max, int N) {
  const int M = N + 2;
  const x_series<qy_series> num = theta_hat_x_series(x_max, M, true);
  const x_series<qy_series> den = theta_hat_x_series(x_max + 1, M, false).divided_by_x();
  const x_series<qy_series> inv =
      recip<qy_series>(den, [](const qy_series& c) { return recip(c); });
  x_series<qy_series> q = num * inv;
  for (int k = 0; k <= x_max; ++k) q[k] = detail::require_integral_exponents(q[k], "char series").truncated(N);
  return q;
}

/// (-eta^3 / theta_hat(z))^d as a y-adic expansion certified for y-exponents <= y_limit
/// (in half-units of y) and q-exponents <= N.
inline qy_series normalization_factor(int d, int N, std::int64_t y_limit) {
  if (d == 0) return qy_series::constant(1, N);
  const int M = N + 1;
  const qy_series e3 = theta_hat_x_linear(M).rescaled(8, 2);
  const std::int64_t per = y_limit + 4 * static_cast<std::int64_t>(d) * (M + 1);
  qy_series inv = recip_y_adic(theta_hat(M).truncated(8 * static_cast<std::int64_t>(M)), per);
  qy_series one = (e3 * inv).scaled(rational(-1));
  qy_series r = one;
  for (int i = 1; i < d; ++i) r = r * one;
  r = r.y_truncated(y_limit);
  return r.truncated(8 * static_cast<std::int64_t>(N)).reduced();
}

/// (e/2)(y^(-1/2) + y^(1/2)) prod_n (1 - q^n y^2)(1 - q^n y^-2) / ((1 - q^n y)(1 - q^n y^-1)).
inline qy_series threefold_formula(const rational& e, int N) {
  qy_series s = qy_series::from_terms(1, 2, N, {{0, -1, e / 2}, {0, 1, e / 2}});
  for (int n = 1; n <= N; ++n) {
    s = times_one_minus<rational>(s, rational(1), n, 4);
    s = times_one_minus<rational>(s, rational(1), n, -4);
    s = over_one_minus<rational>(s, rational(1), n, 2);
    s = over_one_minus<rational>(s, rational(1), n, -2);
  }
  return s;
}

/// chi0 E4 A^2 + (e/144)(B^2 - E4 A^2), A = phi_{10,1}/eta^24, B = phi_{12,1}/eta^24.
inline qy_series fourfold_formula(const rational& chi0, const rational& e, int N) {
  const int M = N + 1;
  const weak_jacobi_forms f = weak_jacobi_basis(M);
  const qy_series dinv = recip(delta(M));
  const qy_series a = (f.phi_10_1 * dinv).truncated(N);
  const qy_series b = (f.phi_12_1 * dinv).truncated(N);
  const qy_series e4 = eisenstein_e4(N);
  const qy_series e4a2 = e4 * a * a;
  return (e4a2.scaled(chi0) + (b * b - e4a2).scaled(e / 144)).truncated(N);
}

/// First coefficient violating c(n, l) = sign * c(n + l + r, l + 2r) among the
/// pairs certified on both sides; negative q-orders count as zero.
inline std::optional<discrepancy> elliptic_law_failure(const qy_series& phi, const rational& r, int sign) {
  if (phi.q_exact()) throw error(errc::truncation_too_shallow, "elliptic-law check needs a certified q-order");
  const rational qmax = make_rational(phi.q_max(), phi.q_den());
  auto q_of = [&](std::int64_t q) { return make_rational(q, phi.q_den()); };
  auto y_of = [&](std::int64_t y) { return make_rational(y, phi.y_den()); };
  std::optional<discrepancy> worst;
  auto note = [&](const rational& n, const rational& l, const rational& lhs, const rational& rhs) {
    discrepancy d{n, l, lhs, rhs};
    if (!worst || d.q < worst->q || (d.q == worst->q && d.y < worst->y)) worst = d;
  };
  for (const auto& t : phi.terms()) {
    const rational n = q_of(t.q), l = y_of(t.y);
    // Forward: (n, l) -> (n + l + r, l + 2r).
    const rational n2 = n + l + r, l2 = l + 2 * r;
    if (sgn(n2) < 0) {
      note(n, l, t.c, 0);
    } else if (n2 <= qmax) {
      const rational rhs = sign * phi.coeff_at(n2, l2);
      if (rhs != t.c) note(n, l, t.c, rhs);
    }
    // Backward: (n', l') = (n, l) has source (n - l + r, l - 2r).
    const rational n0 = n - l + r, l0 = l - 2 * r;
    if (sgn(n0) < 0) {
      note(n0, l0, 0, sign * t.c);
    } else if (n0 <= qmax) {
      const rational lhs = phi.coeff_at(n0, l0);
      if (lhs != sign * t.c) note(n0, l0, lhs, sign * t.c);
    }
  }
  return worst;
}

/// First coefficient where substitute(phi, 1, -1) differs from sign * phi.
inline std::optional<discrepancy> y_inversion_failure(const qy_series& phi, int sign) {
  return first_difference(substitute(phi, 1, -1), phi.scaled(rational(sign)));
}

/// First term with a negative q-exponent.
inline std::optional<discrepancy> negative_q_failure(const qy_series& phi) {
  for (const auto& t : phi.terms())
    if (t.q < 0) return discrepancy{make_rational(t.q, phi.q_den()), make_rational(t.y, phi.y_den()), t.c, 0};
  return std::nullopt;
}

}  // namespace ellgen
