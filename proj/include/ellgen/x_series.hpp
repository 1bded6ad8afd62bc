#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ellgen/qy_series.hpp"

namespace ellgen {

template <class R>
R ring_constant(const rational& c);

template <>
inline rational ring_constant<rational>(const rational& c) {
  return c;
}

template <>
inline qy_series ring_constant<qy_series>(const rational& c) {
  return qy_series::constant(c);
}

inline bool ring_is_zero(const rational& r) { return is_zero(r); }
inline bool ring_is_zero(const qy_series& s) { return s.empty(); }

/// Power series in a nilpotent variable x, truncated after x^x_max.
template <class R>
class x_series {
 public:
  x_series() = default;
  explicit x_series(std::vector<R> coeffs) : c_(std::move(coeffs)) {}

  static x_series constant(const R& c, int x_max) {
    std::vector<R> v(static_cast<std::size_t>(x_max + 1), ring_constant<R>(0));
    v[0] = c;
    return x_series(std::move(v));
  }

  /// e^(a x), a rational.
  static x_series exp_linear(const rational& a, int x_max) {
    std::vector<R> v;
    rational c = 1;
    for (int k = 0; k <= x_max; ++k) {
      v.push_back(ring_constant<R>(c));
      c = c * a / (k + 1);
    }
    return x_series(std::move(v));
  }

  int x_max() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const R& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  R& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  const std::vector<R>& coeffs() const noexcept { return c_; }

  x_series truncated(int x_max) const {
    if (x_max >= this->x_max()) return *this;
    return x_series(std::vector<R>(c_.begin(), c_.begin() + x_max + 1));
  }

  /// Q(k x).
  x_series scaled_arg(const rational& k) const {
    x_series r = *this;
    rational p = 1;
    for (int i = 0; i <= x_max(); ++i) {
      r[i] = r[i] * ring_constant<R>(p);
      p *= k;
    }
    return r;
  }

  /// Q(x) / x; requires a vanishing constant term.
  x_series divided_by_x() const {
    if (!ring_is_zero(c_.front())) throw error(errc::internal, "division by x of a unit");
    return x_series(std::vector<R>(c_.begin() + 1, c_.end()));
  }

  x_series times_x() const {
    std::vector<R> v;
    v.push_back(ring_constant<R>(0));
    for (int i = 0; i < x_max(); ++i) v.push_back(c_[static_cast<std::size_t>(i)]);
    return x_series(std::move(v));
  }

  x_series scaled(const R& s) const {
    x_series r = *this;
    for (auto& c : r.c_) c = c * s;
    return r;
  }

  friend x_series operator+(const x_series& a, const x_series& b) {
    const int n = std::min(a.x_max(), b.x_max());
    std::vector<R> v;
    for (int i = 0; i <= n; ++i) v.push_back(a[i] + b[i]);
    return x_series(std::move(v));
  }

  friend x_series operator-(const x_series& a, const x_series& b) {
    const int n = std::min(a.x_max(), b.x_max());
    std::vector<R> v;
    for (int i = 0; i <= n; ++i) v.push_back(a[i] - b[i]);
    return x_series(std::move(v));
  }

  friend x_series operator*(const x_series& a, const x_series& b) {
    const int n = std::min(a.x_max(), b.x_max());
    std::vector<R> v(static_cast<std::size_t>(n + 1), ring_constant<R>(0));
    for (int i = 0; i <= n; ++i) {
      if (ring_is_zero(a[i])) continue;
      for (int j = 0; i + j <= n; ++j) {
        if (ring_is_zero(b[j])) continue;
        v[static_cast<std::size_t>(i + j)] = v[static_cast<std::size_t>(i + j)] + a[i] * b[j];
      }
    }
    return x_series(std::move(v));
  }

 private:
  std::vector<R> c_;
};

template <class R>
x_series<R> pow(const x_series<R>& a, int n) {
  x_series<R> r = x_series<R>::constant(ring_constant<R>(1), a.x_max());
  for (int i = 0; i < n; ++i) r = r * a;
  return r;
}

/// Reciprocal of an x-series whose constant term is invertible under inv.
template <class R>
x_series<R> recip(const x_series<R>& a, const std::function<R(const R&)>& inv) {
  const int n = a.x_max();
  std::vector<R> b;
  b.push_back(inv(a[0]));
  for (int k = 1; k <= n; ++k) {
    R acc = ring_constant<R>(0);
    for (int j = 1; j <= k; ++j) {
      if (ring_is_zero(a[j])) continue;
      acc = acc + a[j] * b[static_cast<std::size_t>(k - j)];
    }
    b.push_back(ring_constant<R>(-1) * (b[0] * acc));
  }
  return x_series<R>(std::move(b));
}

inline x_series<rational> recip(const x_series<rational>& a) {
  if (is_zero(a[0])) throw error(errc::not_invertible, "x-series with zero constant term");
  return recip<rational>(a, [](const rational& c) { return rational(1 / c); });
}

/// log of a series with constant term 1.
template <class R>
x_series<R> log_unit(const x_series<R>& a) {
  const int n = a.x_max();
  x_series<R> u = a - x_series<R>::constant(ring_constant<R>(1), n);
  x_series<R> r = x_series<R>::constant(ring_constant<R>(0), n);
  x_series<R> p = u;
  for (int k = 1; k <= n; ++k) {
    const rational c = rational((k % 2 == 1) ? 1 : -1) / k;
    r = r + p.scaled(ring_constant<R>(c));
    p = p * u;
  }
  return r;
}

}  // namespace ellgen
