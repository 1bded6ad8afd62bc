#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ellgen/qy_series.hpp"

namespace ellgen {

namespace detail {

// Divides a single-row Laurent polynomial (exponents in units where y = step)
// by (1 - y). Returns nullopt when the row is not divisible.
template <class C>
std::optional<std::vector<std::pair<std::int64_t, C>>> divide_row_one_minus_y(
    const std::vector<std::pair<std::int64_t, C>>& row, std::int64_t step) {
  // P = (1 - Y) Q with Y = y^step: within each residue class mod step, Q is the
  // running sum of P, and divisibility means each class sums to zero.
  std::map<std::int64_t, std::vector<std::pair<std::int64_t, C>>> classes;
  for (const auto& [e, c] : row) classes[((e % step) + step) % step].push_back({e, c});
  std::vector<std::pair<std::int64_t, C>> out;
  for (auto& [r, terms] : classes) {
    (void)r;
    C run(0);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      run += terms[i].second;
      const std::int64_t next = (i + 1 < terms.size()) ? terms[i + 1].first : terms[i].first + step;
      if (i + 1 == terms.size()) {
        if (!is_zero(run)) return std::nullopt;
        break;
      }
      if (is_zero(run)) continue;
      for (std::int64_t z = terms[i].first; z < next; z += step) out.push_back({z, run});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

}  // namespace detail

/// numerator / (1 - y)^pole_order, with an exact-in-y numerator.
template <class C>
class basic_ratfun_y {
 public:
  using series = basic_qy_series<C>;

  basic_ratfun_y() = default;
  explicit basic_ratfun_y(series num, int pole = 0) : num_(std::move(num)), pole_(pole) {
    if (!num_.y_exact()) throw error(errc::internal, "RatFunY numerator must be exact in y");
  }

  const series& numerator() const noexcept { return num_; }
  int pole_order() const noexcept { return pole_; }

  /// numerator * (1 - y)^k.
  static series times_one_minus_y_pow(const series& s, int k) {
    series r = s;
    for (int i = 0; i < k; ++i) r = times_one_minus(r, C(1), 0, r.y_den());
    return r;
  }

  /// Same value with denominator (1 - y)^pole, pole >= pole_order().
  basic_ratfun_y raised_to(int pole) const {
    if (pole < pole_) throw error(errc::internal, "cannot lower a pole order by raising");
    return basic_ratfun_y(times_one_minus_y_pow(num_, pole - pole_), pole);
  }

  /// Cancels common (1 - y) factors; the result has minimal pole order.
  basic_ratfun_y reduced() const {
    basic_ratfun_y r = *this;
    while (r.pole_ > 0) {
      auto d = divide_all(r.num_);
      if (!d) break;
      r.num_ = std::move(*d);
      --r.pole_;
    }
    return r;
  }

  /// Residual pole order of each q-row present in the numerator.
  std::vector<std::pair<std::int64_t, int>> row_pole_orders() const {
    std::vector<std::pair<std::int64_t, int>> out;
    for (const auto& [q, row] : rows(num_)) {
      int k = 0;
      auto cur = row;
      while (k < pole_) {
        auto d = detail::divide_row_one_minus_y<C>(cur, num_.y_den());
        if (!d) break;
        cur = std::move(*d);
        ++k;
      }
      out.push_back({q, pole_ - k});
    }
    return out;
  }

  /// The value as a series; throws when a pole remains.
  series to_series() const {
    basic_ratfun_y r = reduced();
    if (r.pole_ != 0) throw error(errc::internal, "RatFunY still has a pole at y = 1");
    return r.num_;
  }

  /// y-adic expansion of 1/(1-y)^pole, certified up to y-exponent y_limit (units).
  series expand_y_adic(std::int64_t y_limit) const {
    const std::int64_t s = num_.y_den();
    std::vector<typename series::term> t;
    const std::int64_t top = y_limit - num_.y_valuation();
    for (std::int64_t i = 0; i * s <= top; ++i) {
      rational b = binomial(rational(pole_ + i - 1), static_cast<int>(i));
      if (pole_ == 0) b = (i == 0) ? rational(1) : rational(0);
      if (is_zero(b)) continue;
      t.push_back({0, i * s, C(to_int64(b))});
    }
    series geo = series::from_terms(num_.q_den(), s, unbounded, std::move(t), top, 0);
    return (num_ * geo).y_truncated(y_limit);
  }

  friend basic_ratfun_y operator+(const basic_ratfun_y& a, const basic_ratfun_y& b) {
    const int p = std::max(a.pole_, b.pole_);
    return basic_ratfun_y(a.raised_to(p).num_ + b.raised_to(p).num_, p);
  }
  friend basic_ratfun_y operator-(const basic_ratfun_y& a, const basic_ratfun_y& b) {
    const int p = std::max(a.pole_, b.pole_);
    return basic_ratfun_y(a.raised_to(p).num_ - b.raised_to(p).num_, p);
  }
  friend basic_ratfun_y operator*(const basic_ratfun_y& a, const basic_ratfun_y& b) {
    return basic_ratfun_y(a.num_ * b.num_, a.pole_ + b.pole_);
  }
  friend basic_ratfun_y operator*(const basic_ratfun_y& a, const series& s) {
    return basic_ratfun_y(a.num_ * s, a.pole_);
  }

 private:
  using row_t = std::vector<std::pair<std::int64_t, C>>;

  static std::vector<std::pair<std::int64_t, row_t>> rows(const series& s) {
    std::vector<std::pair<std::int64_t, row_t>> out;
    for (const auto& t : s.terms()) {
      if (out.empty() || out.back().first != t.q) out.push_back({t.q, {}});
      out.back().second.push_back({t.y, t.c});
    }
    return out;
  }

  static std::optional<series> divide_all(const series& s) {
    std::vector<typename series::term> t;
    for (const auto& [q, row] : rows(s)) {
      auto d = detail::divide_row_one_minus_y<C>(row, s.y_den());
      if (!d) return std::nullopt;
      for (auto& [y, c] : *d) t.push_back({q, y, c});
    }
    return series::from_terms(s.q_den(), s.y_den(), s.q_max(), std::move(t));
  }

  series num_;
  int pole_ = 0;
};

using ratfun_y = basic_ratfun_y<rational>;

}  // namespace ellgen
