#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "ellgen/checked_int.hpp"
#include "ellgen/error.hpp"
#include "ellgen/rational.hpp"

namespace ellgen {

// Sentinel for "no truncation". Arithmetic on caps saturates at this value.
inline constexpr std::int64_t unbounded = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t cap_add(std::int64_t a, std::int64_t b) {
  if (a >= unbounded || b >= unbounded) return unbounded;
  return a + b;
}

inline std::int64_t cap_scale(std::int64_t a, std::int64_t k) { return a >= unbounded ? unbounded : a * k; }

/// Truncated series in q^(1/q_den) with Laurent coefficients in y^(1/y_den).
///
/// Every term with q_num <= q_max and y_num <= y_max is known exactly; nothing
/// is claimed outside that window. y_max is normally unbounded (coefficients are
/// honest Laurent polynomials); a finite y_max marks a y-adic expansion, for
/// which q_floor records a lower bound on the q-exponents of the unknown tail.
template <class C>
class basic_qy_series {
 public:
  using coeff_type = C;

  struct term {
    std::int64_t q;
    std::int64_t y;
    C c;
  };

  basic_qy_series() = default;

  static basic_qy_series zero(std::int64_t q_den = 1, std::int64_t y_den = 1, std::int64_t q_max = unbounded,
                              std::int64_t y_max = unbounded) {
    basic_qy_series s;
    s.q_den_ = q_den;
    s.y_den_ = y_den;
    s.q_max_ = q_max;
    s.y_max_ = y_max;
    s.q_floor_ = cap_add(q_max, 1);
    return s;
  }

  static basic_qy_series constant(const C& c, std::int64_t q_max = unbounded) {
    basic_qy_series s = zero(1, 1, q_max);
    if (!is_zero(c) && q_max >= 0) s.terms_.push_back({0, 0, c});
    s.q_floor_ = 0;
    return s;
  }

  static basic_qy_series monomial(const C& c, std::int64_t q_num, std::int64_t q_den, std::int64_t y_num,
                                  std::int64_t y_den, std::int64_t q_max = unbounded) {
    basic_qy_series s = zero(q_den, y_den, q_max);
    if (!is_zero(c) && q_num <= q_max) s.terms_.push_back({q_num, y_num, c});
    s.q_floor_ = q_num;
    return s;
  }

  /// Builds a series from arbitrary (unsorted, possibly repeated) terms.
  static basic_qy_series from_terms(std::int64_t q_den, std::int64_t y_den, std::int64_t q_max,
                                    std::vector<term> terms, std::int64_t y_max = unbounded,
                                    std::optional<std::int64_t> q_floor = std::nullopt) {
    basic_qy_series s = zero(q_den, y_den, q_max, y_max);
    s.terms_ = std::move(terms);
    s.normalize();
    s.q_floor_ = q_floor ? *q_floor : s.present_q_min();
    return s;
  }

  std::int64_t q_den() const noexcept { return q_den_; }
  std::int64_t y_den() const noexcept { return y_den_; }
  std::int64_t q_max() const noexcept { return q_max_; }
  std::int64_t y_max() const noexcept { return y_max_; }
  bool q_exact() const noexcept { return q_max_ >= unbounded; }
  bool y_exact() const noexcept { return y_max_ >= unbounded; }
  const std::vector<term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  C coeff(std::int64_t q, std::int64_t y) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(q, y),
                               [](const term& t, const std::pair<std::int64_t, std::int64_t>& k) {
                                 return t.q < k.first || (t.q == k.first && t.y < k.second);
                               });
    if (it != terms_.end() && it->q == q && it->y == y) return it->c;
    return C(0);
  }

  /// Coefficient at exponents given as rationals; zero when not representable.
  C coeff_at(const rational& q_exp, const rational& y_exp) const {
    rational qn = q_exp * q_den_, yn = y_exp * y_den_;
    if (!is_integer(qn) || !is_integer(yn)) return C(0);
    return coeff(to_int64(qn), to_int64(yn));
  }

  /// Lower bound for the q-exponents of every term of the represented series.
  std::int64_t q_valuation() const {
    std::int64_t v = present_q_min();
    if (!y_exact()) v = std::min(v, q_floor_);
    return v;
  }

  /// Lower bound for the y-exponents of every term in the certified q-range.
  std::int64_t y_valuation() const {
    std::int64_t v = cap_add(y_max_, 1);
    for (const auto& t : terms_) v = std::min(v, t.y);
    return v;
  }

  std::optional<std::int64_t> max_y() const {
    if (terms_.empty()) return std::nullopt;
    std::int64_t v = terms_.front().y;
    for (const auto& t : terms_) v = std::max(v, t.y);
    return v;
  }

  std::optional<std::int64_t> min_y() const {
    if (terms_.empty()) return std::nullopt;
    std::int64_t v = terms_.front().y;
    for (const auto& t : terms_) v = std::min(v, t.y);
    return v;
  }

  basic_qy_series rescaled(std::int64_t q_den, std::int64_t y_den) const {
    if (q_den == q_den_ && y_den == y_den_) return *this;
    if (q_den % q_den_ != 0 || y_den % y_den_ != 0)
      throw error(errc::internal, "rescale to a non-multiple denominator");
    const std::int64_t kq = q_den / q_den_, ky = y_den / y_den_;
    basic_qy_series s = zero(q_den, y_den, cap_scale(q_max_, kq), cap_scale(y_max_, ky));
    s.q_floor_ = q_floor_ >= unbounded ? unbounded : q_floor_ * kq;
    s.terms_.reserve(terms_.size());
    for (const auto& t : terms_) s.terms_.push_back({t.q * kq, t.y * ky, t.c});
    return s;
  }

  basic_qy_series truncated(std::int64_t q_max) const {
    if (q_max >= q_max_) return *this;
    basic_qy_series s = *this;
    s.q_max_ = q_max;
    auto it = std::upper_bound(s.terms_.begin(), s.terms_.end(), q_max,
                               [](std::int64_t v, const term& t) { return v < t.q; });
    s.terms_.erase(it, s.terms_.end());
    return s;
  }

  basic_qy_series y_truncated(std::int64_t y_max) const {
    if (y_max >= y_max_) return *this;
    basic_qy_series s = *this;
    s.q_floor_ = q_valuation();
    s.y_max_ = y_max;
    std::erase_if(s.terms_, [y_max](const term& t) { return t.y > y_max; });
    return s;
  }

  /// Declares the y-expansion complete. The caller certifies that no terms
  /// exist above the current y_max.
  basic_qy_series y_cap_removed() const {
    basic_qy_series s = *this;
    s.y_max_ = unbounded;
    return s;
  }

  /// Records a known lower bound for the q-exponents of the unknown y-tail.
  basic_qy_series with_q_floor(std::int64_t q_floor) const {
    basic_qy_series s = *this;
    s.q_floor_ = q_floor;
    return s;
  }

  /// Multiplication by the monomial q^(dq/q_den) y^(dy/y_den).
  basic_qy_series shifted(std::int64_t dq, std::int64_t dy) const {
    basic_qy_series s = *this;
    s.q_max_ = cap_add(q_max_, dq);
    s.y_max_ = cap_add(y_max_, dy);
    s.q_floor_ = cap_add(q_floor_, dq);
    for (auto& t : s.terms_) {
      t.q += dq;
      t.y += dy;
    }
    return s;
  }

  basic_qy_series scaled(const C& c) const {
    if (is_zero(c)) return zero(q_den_, y_den_, q_max_, y_max_).with_q_floor(q_valuation());
    basic_qy_series s = *this;
    for (auto& t : s.terms_) t.c = t.c * c;
    return s;
  }

  /// Smallest denominators representing the same series.
  basic_qy_series reduced() const {
    std::int64_t gq = q_den_, gy = y_den_;
    for (const auto& t : terms_) {
      gq = std::gcd(gq, t.q);
      gy = std::gcd(gy, t.y);
    }
    if (gq == 1 && gy == 1) return *this;
    basic_qy_series s = zero(q_den_ / gq, y_den_ / gy, q_exact() ? unbounded : floor_div(q_max_, gq),
                             y_exact() ? unbounded : floor_div(y_max_, gy));
    s.q_floor_ = q_floor_ >= unbounded ? unbounded : floor_div(q_floor_, gq);
    s.terms_.reserve(terms_.size());
    for (const auto& t : terms_) s.terms_.push_back({t.q / gq, t.y / gy, t.c});
    return s;
  }

  /// Terms of one q-row, as a series on the same denominators.
  basic_qy_series row(std::int64_t q) const {
    basic_qy_series s = zero(q_den_, y_den_, unbounded, y_max_);
    for (const auto& t : terms_)
      if (t.q == q) s.terms_.push_back(t);
    s.q_floor_ = q;
    return s;
  }

  basic_qy_series operator-() const {
    basic_qy_series s = *this;
    for (auto& t : s.terms_) t.c = -t.c;
    return s;
  }

  std::int64_t q_floor_raw() const noexcept { return q_floor_; }

 private:
  std::int64_t present_q_min() const { return terms_.empty() ? cap_add(q_max_, 1) : terms_.front().q; }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const term& a, const term& b) { return a.q < b.q || (a.q == b.q && a.y < b.y); });
    std::vector<term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (t.q > q_max_ || t.y > y_max_) continue;
      if (!out.empty() && out.back().q == t.q && out.back().y == t.y) {
        out.back().c += t.c;
      } else {
        out.push_back(std::move(t));
      }
    }
    std::erase_if(out, [](const term& t) { return is_zero(t.c); });
    terms_ = std::move(out);
  }

  template <class D>
  friend class basic_qy_series;
  template <class D>
  friend basic_qy_series<D> add_impl(const basic_qy_series<D>&, const basic_qy_series<D>&, bool);
  template <class D>
  friend basic_qy_series<D> mul_impl(const basic_qy_series<D>&, const basic_qy_series<D>&);

  std::int64_t q_den_ = 1;
  std::int64_t y_den_ = 1;
  std::int64_t q_max_ = unbounded;
  std::int64_t y_max_ = unbounded;
  std::int64_t q_floor_ = unbounded;
  std::vector<term> terms_;
};

using qy_series = basic_qy_series<rational>;
using qy_series_int = basic_qy_series<checked_int>;

/// Applies f to a and b brought to common denominators.
template <class C, class F>
auto with_common(const basic_qy_series<C>& a, const basic_qy_series<C>& b, F&& f) {
  if (a.q_den() == b.q_den() && a.y_den() == b.y_den()) return f(a, b);
  const std::int64_t qd = std::lcm(a.q_den(), b.q_den()), yd = std::lcm(a.y_den(), b.y_den());
  return f(a.rescaled(qd, yd), b.rescaled(qd, yd));
}

template <class C>
basic_qy_series<C> add_impl(const basic_qy_series<C>& a, const basic_qy_series<C>& b, bool subtract) {
  using S = basic_qy_series<C>;
  S s = S::zero(a.q_den_, a.y_den_, std::min(a.q_max_, b.q_max_), std::min(a.y_max_, b.y_max_));
  s.q_floor_ = std::min(a.q_valuation(), b.q_valuation());
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  s.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto push = [&](std::int64_t q, std::int64_t y, C c) {
    if (q > s.q_max_ || y > s.y_max_ || is_zero(c)) return;
    s.terms_.push_back({q, y, std::move(c)});
  };
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    bool take_a, take_b;
    if (ib == b.terms_.end()) {
      take_a = true;
      take_b = false;
    } else if (ia == a.terms_.end()) {
      take_a = false;
      take_b = true;
    } else if (ia->q != ib->q || ia->y != ib->y) {
      take_a = ia->q < ib->q || (ia->q == ib->q && ia->y < ib->y);
      take_b = !take_a;
    } else {
      take_a = take_b = true;
    }
    if (take_a && take_b) {
      push(ia->q, ia->y, subtract ? C(ia->c - ib->c) : C(ia->c + ib->c));
      ++ia;
      ++ib;
    } else if (take_a) {
      push(ia->q, ia->y, ia->c);
      ++ia;
    } else {
      push(ib->q, ib->y, subtract ? C(-ib->c) : ib->c);
      ++ib;
    }
  }
  return s;
}

template <class C>
basic_qy_series<C> mul_impl(const basic_qy_series<C>& a, const basic_qy_series<C>& b) {
  using S = basic_qy_series<C>;
  const std::int64_t qcap = std::min(cap_add(a.q_max_, b.q_valuation()), cap_add(b.q_max_, a.q_valuation()));
  const std::int64_t ycap = std::min(cap_add(a.y_max_, b.y_valuation()), cap_add(b.y_max_, a.y_valuation()));
  S s = S::zero(a.q_den_, a.y_den_, qcap, ycap);
  s.q_floor_ = cap_add(a.q_valuation(), b.q_valuation());
  if (a.terms_.empty() || b.terms_.empty()) return s;

  const std::int64_t qlo = a.terms_.front().q + b.terms_.front().q;
  const std::int64_t qhi = std::min(qcap, a.terms_.back().q + b.terms_.back().q);
  if (qlo > qhi) return s;
  const std::int64_t ylo = *a.min_y() + *b.min_y();
  const std::int64_t yhi = std::min(ycap, *a.max_y() + *b.max_y());
  if (ylo > yhi) return s;

  const std::int64_t width = yhi - ylo + 1;
  const long double window = static_cast<long double>(qhi - qlo + 1) * static_cast<long double>(width);
  const long double pairs = static_cast<long double>(a.terms_.size()) * static_cast<long double>(b.terms_.size());

  if (window <= 4 * pairs && window <= (1 << 24)) {
    std::vector<C> buf(static_cast<std::size_t>(window), C(0));
    for (const auto& ta : a.terms_) {
      if (ta.q + b.terms_.front().q > qhi) break;
      for (const auto& tb : b.terms_) {
        const std::int64_t q = ta.q + tb.q;
        if (q > qhi) break;
        const std::int64_t y = ta.y + tb.y;
        if (y > yhi) continue;
        buf[static_cast<std::size_t>((q - qlo) * width + (y - ylo))] += ta.c * tb.c;
      }
    }
    std::size_t idx = 0;
    for (std::int64_t q = qlo; q <= qhi; ++q)
      for (std::int64_t y = ylo; y <= yhi; ++y, ++idx)
        if (!is_zero(buf[idx])) s.terms_.push_back({q, y, std::move(buf[idx])});
    return s;
  }

  std::vector<typename S::term> prod;
  for (const auto& ta : a.terms_) {
    if (ta.q + b.terms_.front().q > qhi) break;
    for (const auto& tb : b.terms_) {
      const std::int64_t q = ta.q + tb.q;
      if (q > qhi) break;
      const std::int64_t y = ta.y + tb.y;
      if (y > yhi) continue;
      prod.push_back({q, y, ta.c * tb.c});
    }
  }
  s.terms_ = std::move(prod);
  s.normalize();
  return s;
}

template <class C>
basic_qy_series<C> operator+(const basic_qy_series<C>& a, const basic_qy_series<C>& b) {
  return with_common(a, b, [](const auto& x, const auto& y) { return add_impl(x, y, false); });
}

template <class C>
basic_qy_series<C> operator-(const basic_qy_series<C>& a, const basic_qy_series<C>& b) {
  return with_common(a, b, [](const auto& x, const auto& y) { return add_impl(x, y, true); });
}

template <class C>
basic_qy_series<C> operator*(const basic_qy_series<C>& a, const basic_qy_series<C>& b) {
  return with_common(a, b, [](const auto& x, const auto& y) { return mul_impl(x, y); });
}

template <class C>
basic_qy_series<C> operator*(const C& c, const basic_qy_series<C>& a) {
  return a.scaled(c);
}

template <class C>
basic_qy_series<C> operator*(const basic_qy_series<C>& a, const C& c) {
  return a.scaled(c);
}

template <class C>
basic_qy_series<C>& operator+=(basic_qy_series<C>& a, const basic_qy_series<C>& b) {
  a = a + b;
  return a;
}

template <class C>
basic_qy_series<C>& operator-=(basic_qy_series<C>& a, const basic_qy_series<C>& b) {
  a = a - b;
  return a;
}

template <class C>
basic_qy_series<C>& operator*=(basic_qy_series<C>& a, const basic_qy_series<C>& b) {
  a = a * b;
  return a;
}

template <class C>
basic_qy_series<C> pow(const basic_qy_series<C>& a, int n) {
  if (n < 0) throw error(errc::internal, "negative power of a series; use recip");
  basic_qy_series<C> r = basic_qy_series<C>::constant(C(1)).rescaled(a.q_den(), a.y_den());
  basic_qy_series<C> b = a;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n > 0) b = b * b;
  }
  return r;
}

/// Converts coefficients between rings (rational to checked_int requires integrality).
template <class To, class From>
basic_qy_series<To> convert(const basic_qy_series<From>& a) {
  std::vector<typename basic_qy_series<To>::term> t;
  t.reserve(a.size());
  for (const auto& x : a.terms()) {
    if constexpr (std::is_same_v<To, rational>) {
      t.push_back({x.q, x.y, to_rational(x.c)});
    } else {
      t.push_back({x.q, x.y, To(to_int64(to_rational(x.c)))});
    }
  }
  return basic_qy_series<To>::from_terms(a.q_den(), a.y_den(), a.q_max(), std::move(t), a.y_max(),
                                         a.q_valuation());
}

/// Exponent window shared by two series after rescaling.
struct discrepancy {
  rational q;
  rational y;
  rational lhs;
  rational rhs;
};

/// First coefficient (in (q, y) order) where a and b differ inside the window
/// certified for both, optionally clipped to q-exponent <= q_limit.
template <class C>
std::optional<discrepancy> first_difference(const basic_qy_series<C>& a0, const basic_qy_series<C>& b0,
                                            std::optional<rational> q_limit = std::nullopt) {
  return with_common(a0, b0, [&](const auto& a, const auto& b) -> std::optional<discrepancy> {
    std::int64_t qcap = std::min(a.q_max(), b.q_max());
    if (q_limit) qcap = std::min(qcap, floor_rational(*q_limit * a.q_den()));
    const std::int64_t ycap = std::min(a.y_max(), b.y_max());
    auto in = [&](const auto& t) { return t.q <= qcap && t.y <= ycap; };
    auto ia = a.terms().begin(), ib = b.terms().begin();
    auto ea = a.terms().end(), eb = b.terms().end();
    auto report = [&](std::int64_t q, std::int64_t y, const rational& l, const rational& r) {
      return discrepancy{make_rational(q, a.q_den()), make_rational(y, a.y_den()), l, r};
    };
    while (true) {
      while (ia != ea && !in(*ia)) ++ia;
      while (ib != eb && !in(*ib)) ++ib;
      if (ia == ea && ib == eb) return std::nullopt;
      if (ib == eb || (ia != ea && (ia->q < ib->q || (ia->q == ib->q && ia->y < ib->y))))
        return report(ia->q, ia->y, to_rational(ia->c), rational(0));
      if (ia == ea || ib->q < ia->q || (ib->q == ia->q && ib->y < ia->y))
        return report(ib->q, ib->y, rational(0), to_rational(ib->c));
      if (!(ia->c == ib->c)) return report(ia->q, ia->y, to_rational(ia->c), to_rational(ib->c));
      ++ia;
      ++ib;
    }
  });
}

/// Certified q-exponent bound of a series, as a rational.
template <class C>
std::optional<rational> certified_q(const basic_qy_series<C>& a) {
  if (a.q_exact()) return std::nullopt;
  return make_rational(a.q_max(), a.q_den());
}

// ---------------------------------------------------------------------------
// Reciprocals and quotients (rational coefficients)

namespace detail {

inline std::int64_t horner_steps(std::int64_t cap, std::int64_t val) {
  if (val <= 0) throw error(errc::internal, "non-positive valuation in reciprocal");
  return cap / val + 1;
}

// 1 / (1 + u) for u of positive q-valuation, truncated at u's certified q_max.
inline qy_series one_over_one_plus(const qy_series& u) {
  qy_series one = qy_series::constant(1).rescaled(u.q_den(), u.y_den());
  if (u.empty()) return one.truncated(u.q_max());
  const std::int64_t steps = horner_steps(u.q_max(), u.q_valuation());
  qy_series s = one;
  for (std::int64_t k = 0; k < steps; ++k) s = one - u * s;
  return s.truncated(u.q_max());
}

}  // namespace detail

/// Reciprocal of a series whose lowest q-row is a single y-monomial.
/// q_limit bounds the expansion when the input is exact in q.
inline qy_series recip(const qy_series& a, std::optional<std::int64_t> q_limit = std::nullopt) {
  if (!a.y_exact()) throw error(errc::not_invertible, "reciprocal of a y-truncated series");
  if (a.empty()) throw error(errc::not_invertible, "reciprocal of zero");
  const auto& lead = a.terms().front();
  if (a.size() > 1 && a.terms()[1].q == lead.q)
    throw error(errc::not_invertible, "leading q-coefficient is not a y-monomial");
  qy_series b0 = qy_series::monomial(1 / lead.c, -lead.q, a.q_den(), -lead.y, a.y_den());
  qy_series u = b0 * a - qy_series::constant(1).rescaled(a.q_den(), a.y_den());
  std::int64_t cap = q_limit ? cap_add(*q_limit, lead.q) : unbounded;
  cap = std::min(cap, u.q_max());
  if (!u.empty() && cap >= unbounded)
    throw error(errc::truncation_too_shallow, "infinite reciprocal needs a q bound");
  u = u.truncated(cap);
  if (u.empty()) return b0.truncated(cap_add(cap, -lead.q));
  return (b0 * detail::one_over_one_plus(u)).truncated(cap_add(cap, -lead.q));
}

/// Reciprocal in Q((y))[[q]]: the lowest q-row may be any nonzero Laurent
/// polynomial; the result is certified for y-exponents <= y_limit (units of
/// the input's y_den) and q-exponents <= the input's certified order.
inline qy_series recip_y_adic(const qy_series& a, std::int64_t y_limit,
                              std::optional<std::int64_t> q_limit = std::nullopt) {
  if (!a.y_exact()) throw error(errc::not_invertible, "y-adic reciprocal of a y-truncated series");
  if (a.empty()) throw error(errc::not_invertible, "reciprocal of zero");
  const std::int64_t q0 = a.terms().front().q;
  const std::int64_t v = a.terms().front().y;
  const rational c = a.terms().front().c;
  std::vector<qy_series::term> w_terms;
  for (const auto& t : a.terms()) {
    if (t.q != q0) break;
    if (t.y != v) w_terms.push_back({0, t.y - v, t.c / c});
  }
  const std::int64_t wy = y_limit + v;
  qy_series w = qy_series::from_terms(a.q_den(), a.y_den(), unbounded, w_terms);
  qy_series inv = qy_series::constant(1).rescaled(a.q_den(), a.y_den());
  if (!w.empty()) {
    const std::int64_t wv = *w.min_y();
    qy_series wt = w.y_truncated(wy);
    qy_series one = inv.y_truncated(wy);
    qy_series s = one;
    for (std::int64_t k = 0; k <= wy / wv + 1; ++k) s = one - wt * s;
    inv = s.y_truncated(wy).with_q_floor(0);
  }
  qy_series b0 = inv.shifted(-q0, -v).scaled(1 / c).with_q_floor(-q0);
  b0 = b0.y_truncated(y_limit);
  qy_series u = b0 * a - qy_series::constant(1).rescaled(a.q_den(), a.y_den());
  std::int64_t cap = q_limit ? cap_add(*q_limit, q0) : unbounded;
  cap = std::min(cap, u.q_max());
  u = u.truncated(cap);
  std::int64_t uv = u.empty() ? cap_add(cap, 1) : std::max<std::int64_t>(u.terms().front().q, 1);
  u = u.with_q_floor(uv);
  if (!u.empty() && cap >= unbounded)
    throw error(errc::truncation_too_shallow, "infinite reciprocal needs a q bound");
  if (u.empty()) return b0.truncated(cap_add(cap, -q0));
  return (b0 * detail::one_over_one_plus(u)).truncated(cap_add(cap, -q0));
}

namespace detail {

using laurent = std::vector<std::pair<std::int64_t, rational>>;  // sorted by exponent

inline std::optional<laurent> laurent_divide(laurent p, const laurent& d) {
  laurent q;
  if (p.empty()) return q;
  const std::int64_t dlo = d.front().first, dhi = d.back().first;
  const std::int64_t qhi = p.back().first - dhi;
  while (!p.empty()) {
    const std::int64_t e = p.front().first - dlo;
    if (e > qhi) return std::nullopt;
    const rational coef = p.front().second / d.front().second;
    q.push_back({e, coef});
    laurent np;
    np.reserve(p.size() + d.size());
    std::size_t i = 0, j = 0;
    while (i < p.size() || j < d.size()) {
      if (j == d.size() || (i < p.size() && p[i].first < d[j].first + e)) {
        np.push_back(p[i++]);
      } else if (i == p.size() || d[j].first + e < p[i].first) {
        np.push_back({d[j].first + e, -coef * d[j].second});
        ++j;
      } else {
        rational v = p[i].second - coef * d[j].second;
        if (!is_zero(v)) np.push_back({p[i].first, v});
        ++i;
        ++j;
      }
    }
    p = std::move(np);
  }
  return q;
}

}  // namespace detail

/// Exact quotient a / b where the result has Laurent-polynomial coefficients.
/// Throws NotInvertible if some q-row does not divide.
inline qy_series divide(const qy_series& a0, const qy_series& b0, std::optional<std::int64_t> q_limit = std::nullopt) {
  return with_common(a0, b0, [&](const qy_series& a, const qy_series& b) {
    if (!a.y_exact() || !b.y_exact()) throw error(errc::not_invertible, "division of y-truncated series");
    if (b.empty()) throw error(errc::not_invertible, "division by zero");
    const std::int64_t qb0 = b.terms().front().q;
    const std::int64_t clo = a.empty() ? 0 : a.terms().front().q - qb0;
    std::int64_t cap = std::min(cap_add(a.q_max(), -qb0), cap_add(b.q_max(), clo - qb0));
    if (q_limit) cap = std::min(cap, *q_limit);
    if (a.empty()) return qy_series::zero(a.q_den(), a.y_den(), cap);
    if (cap >= unbounded) throw error(errc::truncation_too_shallow, "exact division needs a q bound");
    auto row_of = [](const qy_series& s, std::int64_t q) {
      detail::laurent r;
      for (const auto& t : s.terms())
        if (t.q == q) r.push_back({t.y, t.c});
      return r;
    };
    std::vector<std::pair<std::int64_t, detail::laurent>> brows;
    for (const auto& t : b.terms()) {
      if (brows.empty() || brows.back().first != t.q) brows.push_back({t.q, {}});
      brows.back().second.push_back({t.y, t.c});
    }
    const detail::laurent& lead = brows.front().second;
    std::vector<detail::laurent> crow;
    std::vector<qy_series::term> out;
    for (std::int64_t n = clo; n <= cap; ++n) {
      detail::laurent num = row_of(a, n + qb0);
      std::vector<qy_series::term> acc;
      for (const auto& [y, c] : num) acc.push_back({0, y, c});
      for (std::size_t k = 1; k < brows.size(); ++k) {
        const std::int64_t j = brows[k].first - qb0;
        if (n - j < clo) break;
        const auto& cr = crow[static_cast<std::size_t>(n - j - clo)];
        for (const auto& [by, bc] : brows[k].second)
          for (const auto& [cy, cc] : cr) acc.push_back({0, by + cy, -bc * cc});
      }
      qy_series accs = qy_series::from_terms(1, 1, unbounded, std::move(acc));
      detail::laurent rem;
      for (const auto& t : accs.terms()) rem.push_back({t.y, t.c});
      auto quot = detail::laurent_divide(rem, lead);
      if (!quot) throw error(errc::not_invertible, "q-row does not divide exactly");
      for (const auto& [y, c] : *quot) out.push_back({n, y, c});
      crow.push_back(std::move(*quot));
    }
    return qy_series::from_terms(a.q_den(), a.y_den(), cap, std::move(out));
  });
}

// ---------------------------------------------------------------------------
// Monomial-factor products, geometric factors, substitutions

/// a * (1 - c q^dq y^dy) in a's units.
template <class C>
basic_qy_series<C> times_one_minus(const basic_qy_series<C>& a, const C& c, std::int64_t dq, std::int64_t dy) {
  return a - a.shifted(dq, dy).scaled(c).truncated(a.q_max());
}

/// a / (1 - c q^dq y^dy) for dq > 0, in a's units, truncated at a's q_max.
template <class C>
basic_qy_series<C> over_one_minus(const basic_qy_series<C>& a, const C& c, std::int64_t dq, std::int64_t dy) {
  if (dq <= 0) throw error(errc::internal, "over_one_minus needs a positive q step");
  if (a.q_exact() && !a.empty()) throw error(errc::truncation_too_shallow, "geometric expansion needs a q bound");
  basic_qy_series<C> r = a, p = a;
  while (!p.empty()) {
    p = p.shifted(dq, dy).scaled(c).truncated(a.q_max());
    r = r + p;
  }
  return r;
}

/// 1 / (1 - y^a q^k) expanded with nonnegative q-powers, truncated at
/// q-exponent q_limit; all exponents in the given units.
template <class C>
basic_qy_series<C> geom_factor_units(std::int64_t q_den, std::int64_t y_den, std::int64_t a, std::int64_t k,
                                     std::int64_t q_limit) {
  using S = basic_qy_series<C>;
  if (k == 0) throw error(errc::zero_q_exponent, "1/(1 - y^a) has no q-expansion");
  std::vector<typename S::term> t;
  if (k > 0) {
    for (std::int64_t j = 0; j * k <= q_limit; ++j) t.push_back({j * k, j * a, C(1)});
  } else {
    for (std::int64_t j = 1; -j * k <= q_limit; ++j) t.push_back({-j * k, -j * a, C(-1)});
  }
  return S::from_terms(q_den, y_den, q_limit, std::move(t));
}

inline qy_series geom_factor(const rational& y_exp, const rational& q_exp, const rational& q_limit) {
  const std::int64_t yd = to_int64(y_exp.get_den());
  const std::int64_t qd = std::lcm(to_int64(q_exp.get_den()), to_int64(q_limit.get_den()));
  return geom_factor_units<rational>(qd, yd, to_int64(rational(y_exp * yd)), to_int64(rational(q_exp * qd)),
                                     floor_rational(q_limit * qd));
}

/// q -> q^r, y -> y^s.
template <class C>
basic_qy_series<C> substitute(const basic_qy_series<C>& a, std::int64_t r, std::int64_t s) {
  using S = basic_qy_series<C>;
  if (r <= 0 || s == 0) throw error(errc::validation_error, "substitute needs r > 0 and s != 0");
  if (s < 0 && !a.y_exact()) throw error(errc::validation_error, "y-inversion of a y-truncated series");
  std::vector<typename S::term> t;
  t.reserve(a.size());
  for (const auto& x : a.terms()) t.push_back({x.q * r, x.y * s, x.c});
  const std::int64_t ymax = a.y_exact() ? unbounded : a.y_max() * s;
  return S::from_terms(a.q_den(), a.y_den(), cap_scale(a.q_max(), r), std::move(t), ymax,
                       cap_scale(a.q_valuation(), r));
}

/// y -> q y, i.e. q^a y^b -> q^(a+b) y^b. tail_y_floor is a lower bound for
/// the y-exponents of the terms beyond the certified q-order; the output is
/// certified up to q_max + tail_y_floor.
template <class C>
basic_qy_series<C> shift_y_by_q(const basic_qy_series<C>& a, const rational& tail_y_floor) {
  using S = basic_qy_series<C>;
  if (!a.y_exact()) throw error(errc::validation_error, "shift_y_by_q of a y-truncated series");
  const std::int64_t L = std::lcm(a.q_den(), a.y_den());
  const std::int64_t kq = L / a.q_den(), ky = L / a.y_den();
  std::vector<typename S::term> t;
  t.reserve(a.size());
  for (const auto& x : a.terms()) t.push_back({x.q * kq + x.y * ky, x.y, x.c});
  std::int64_t cap = unbounded;
  if (!a.q_exact()) cap = floor_rational(rational(make_rational(a.q_max(), a.q_den()) + tail_y_floor) * L);
  return S::from_terms(L, a.y_den(), cap, std::move(t));
}

/// Substitutes a rational value for y. Fractional y-powers need v to be a
/// positive perfect power (the positive root is used).
inline qy_series eval_y_root(const qy_series& a0, const rational& root);

inline std::optional<rational> rational_root(const rational& v, std::int64_t n) {
  if (n == 1) return v;
  if (sgn(v) <= 0) return std::nullopt;
  integer num, den;
  if (!mpz_root(num.get_mpz_t(), v.get_num_mpz_t(), static_cast<unsigned long>(n))) return std::nullopt;
  if (!mpz_root(den.get_mpz_t(), v.get_den_mpz_t(), static_cast<unsigned long>(n))) return std::nullopt;
  rational r(num, den);
  r.canonicalize();
  return r;
}

inline qy_series eval_y(const qy_series& a0, const rational& v) {
  qy_series a = a0.reduced();
  if (a.y_den() == 1) return eval_y_root(a, v);
  if (sgn(v) < 0)
    throw error(errc::fractional_power_of_negative, "y^(1/" + std::to_string(a.y_den()) + ") at a negative value");
  auto root = rational_root(v, a.y_den());
  if (!root) throw error(errc::validation_error, "y-value is not a perfect power; supply the root explicitly");
  return eval_y_root(a, *root);
}

/// Substitutes y^(1/y_den) := root.
inline qy_series eval_y_root(const qy_series& a, const rational& root) {
  if (!a.y_exact()) throw error(errc::validation_error, "evaluation of a y-truncated series");
  std::vector<qy_series::term> t;
  for (const auto& x : a.terms()) {
    if (x.y < 0 && is_zero(root)) throw error(errc::not_invertible, "negative y-power at y = 0");
    t.push_back({x.q, 0, x.c * rpow(root, static_cast<int>(x.y))});
  }
  return qy_series::from_terms(a.q_den(), 1, a.q_max(), std::move(t));
}

}  // namespace ellgen
