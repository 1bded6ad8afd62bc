#pragma once

#include <cstdint>

#include "ellgen/error.hpp"
#include "ellgen/rational.hpp"

namespace ellgen {

// 64-bit integer coefficient that throws errc::overflow instead of wrapping.
// Used for lattice sums whose coefficients are integral; callers fall back to
// rational on overflow.
class checked_int {
 public:
  constexpr checked_int() = default;
  constexpr checked_int(std::int64_t v) : v_(v) {}

  constexpr std::int64_t value() const noexcept { return v_; }

  checked_int& operator+=(checked_int o) {
    if (__builtin_add_overflow(v_, o.v_, &v_)) overflow();
    return *this;
  }
  checked_int& operator-=(checked_int o) {
    if (__builtin_sub_overflow(v_, o.v_, &v_)) overflow();
    return *this;
  }
  checked_int& operator*=(checked_int o) {
    if (__builtin_mul_overflow(v_, o.v_, &v_)) overflow();
    return *this;
  }

  friend checked_int operator+(checked_int a, checked_int b) { return a += b; }
  friend checked_int operator-(checked_int a, checked_int b) { return a -= b; }
  friend checked_int operator*(checked_int a, checked_int b) { return a *= b; }
  friend checked_int operator-(checked_int a) { return checked_int(0) - a; }
  friend bool operator==(checked_int a, checked_int b) { return a.v_ == b.v_; }

 private:
  [[noreturn]] static void overflow() { throw error(errc::overflow, "checked_int overflow"); }
  std::int64_t v_ = 0;
};

inline bool is_zero(checked_int c) noexcept { return c.value() == 0; }
inline rational to_rational(checked_int c) { return make_rational(c.value()); }

}  // namespace ellgen
