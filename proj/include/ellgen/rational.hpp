#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>

#include "ellgen/error.hpp"

namespace ellgen {

using rational = mpq_class;
using integer = mpz_class;

inline rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw error(errc::validation_error, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  rational r;
  mpq_set_si(r.get_mpq_t(), static_cast<long>(num), static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

inline bool is_zero(const rational& r) noexcept { return sgn(r) == 0; }
inline const rational& to_rational(const rational& r) noexcept { return r; }

inline bool is_integer(const rational& r) { return r.get_den() == 1; }

inline std::int64_t to_int64(const integer& z) {
  if (!z.fits_slong_p()) throw error(errc::overflow, "integer does not fit in 64 bits");
  return z.get_si();
}

inline std::int64_t to_int64(const rational& r) {
  if (!is_integer(r)) throw error(errc::validation_error, "expected an integer, got " + r.get_str());
  return to_int64(r.get_num());
}

// Always "num/den", so integers print as "n/1".
inline std::string to_string(const rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline rational parse_rational(const std::string& s) {
  rational r;
  if (s.empty() || r.set_str(s, 10) != 0) throw error(errc::validation_error, "bad rational '" + s + "'");
  if (r.get_den() == 0) throw error(errc::validation_error, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

inline std::int64_t floor_rational(const rational& r) {
  integer f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return to_int64(f);
}

inline std::int64_t ceil_rational(const rational& r) {
  integer f;
  mpz_cdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return to_int64(f);
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

// Generalized binomial coefficient a(a-1)...(a-k+1)/k! for rational a.
inline rational binomial(const rational& a, int k) {
  rational r = 1;
  for (int i = 0; i < k; ++i) {
    r *= a - i;
    r /= i + 1;
  }
  return r;
}

inline rational rpow(const rational& b, int e) {
  if (e < 0) {
    if (is_zero(b)) throw error(errc::not_invertible, "zero to a negative power");
    return rpow(1 / b, -e);
  }
  rational r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace ellgen
