#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "ellgen/error.hpp"
#include "ellgen/rational.hpp"

namespace ellgen {

using ivec = std::vector<std::int64_t>;
using imat = std::vector<ivec>;
using qvec = std::vector<rational>;
using qmat = std::vector<qvec>;

inline std::int64_t dot(const ivec& a, const ivec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline rational dot(const qvec& a, const ivec& b) {
  rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_primitive(const ivec& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  return g == 1;
}

inline qmat to_qmat(const imat& a) {
  qmat r;
  for (const auto& row : a) {
    qvec q;
    for (auto x : row) q.emplace_back(static_cast<long>(x));
    r.push_back(std::move(q));
  }
  return r;
}

/// Row echelon form over Q; returns the rank.
inline int row_reduce(qmat& a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(a[p][c])) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const rational inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(a[i][c])) continue;
      const rational f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

inline int rank(const imat& vs) {
  qmat a = to_qmat(vs);
  return row_reduce(a);
}

inline rational determinant(const imat& m) {
  qmat a = to_qmat(m);
  const std::size_t n = a.size();
  rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(a[p][c])) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(a[i][c])) continue;
      const rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

/// Inverse of a square integer matrix over Q, or nullopt if singular.
inline std::optional<qmat> inverse(const imat& m) {
  const std::size_t n = m.size();
  qmat a = to_qmat(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i].emplace_back(i == j ? 1 : 0);
  if (row_reduce(a) < static_cast<int>(n)) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i)
    if (is_zero(a[i][i])) return std::nullopt;
  qmat inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = qvec(a[i].begin() + static_cast<std::ptrdiff_t>(n), a[i].end());
  return inv;
}

inline imat transpose(const imat& a) {
  if (a.empty()) return {};
  imat t(a[0].size(), ivec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

/// Solves x . v_i = b_i for x in Q^D (x in the row space of the v_i); nullopt if inconsistent.
inline std::optional<qvec> solve_functional(const imat& vs, const qvec& b) {
  if (vs.empty()) return qvec{};
  const std::size_t k = vs.size(), D = vs[0].size();
  // Unknowns x (D); equations sum_j v_ij x_j = b_i.
  qmat a = to_qmat(vs);
  for (std::size_t i = 0; i < k; ++i) a[i].push_back(b[i]);
  const int r = row_reduce(a);
  qvec x(D, rational(0));
  for (int i = 0; i < r; ++i) {
    std::size_t piv = 0;
    while (piv < D && is_zero(a[static_cast<std::size_t>(i)][piv])) ++piv;
    if (piv == D) return std::nullopt;  // 0 = nonzero
    x[piv] = a[static_cast<std::size_t>(i)][D];
  }
  for (std::size_t i = 0; i < k; ++i)
    if (dot(x, vs[i]) != b[i]) return std::nullopt;
  return x;
}

/// Coordinates beta with sum_i beta_i v_i = n, for independent v_i; nullopt if n is not in the span.
inline std::optional<qvec> coordinates(const imat& vs, const ivec& n) {
  const std::size_t k = vs.size(), D = n.size();
  qmat a(D, qvec(k + 1));
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t i = 0; i < k; ++i) a[j][i] = rational(static_cast<long>(vs[i][j]));
    a[j][k] = rational(static_cast<long>(n[j]));
  }
  row_reduce(a);
  qvec beta(k, rational(0));
  for (const auto& row : a) {
    std::size_t piv = 0;
    while (piv <= k && is_zero(row[piv])) ++piv;
    if (piv == k) return std::nullopt;
    if (piv < k) beta[piv] = row[k];
  }
  return beta;
}

struct box_point {
  ivec n;     // lattice point sum beta_i v_i
  qvec beta;  // coordinates in [0, 1)
};

/// Lattice points of the half-open parallelepiped sum beta_i v_i, beta in [0,1)^k,
/// for linearly independent integer generators.
inline std::vector<box_point> box_points(const imat& vs) {
  const std::size_t k = vs.size();
  if (k == 0) return {box_point{{}, {}}};
  const std::size_t D = vs[0].size();
  if (rank(vs) != static_cast<int>(k)) throw error(errc::non_simplicial, "cone generators are dependent");
  // A k x k invertible minor fixes the denominators of beta.
  imat cols = transpose(vs);  // D x k
  std::vector<std::size_t> pick;
  {
    imat chosen;
    for (std::size_t j = 0; j < D && pick.size() < k; ++j) {
      chosen.push_back(cols[j]);
      if (rank(chosen) == static_cast<int>(chosen.size())) {
        pick.push_back(j);
      } else {
        chosen.pop_back();
      }
    }
  }
  imat minor;
  for (auto j : pick) minor.push_back(cols[j]);
  const rational det = determinant(minor);
  const std::int64_t e = to_int64(rational(abs(det)));
  std::vector<box_point> out;
  std::vector<std::int64_t> digits(k, 0);
  while (true) {
    ivec n(D, 0);
    bool integral = true;
    qvec beta(k);
    for (std::size_t i = 0; i < k; ++i) beta[i] = make_rational(digits[i], e);
    for (std::size_t j = 0; j < D && integral; ++j) {
      rational s = 0;
      for (std::size_t i = 0; i < k; ++i) s += beta[i] * vs[i][j];
      if (!is_integer(s)) integral = false;
      else n[j] = to_int64(s);
    }
    if (integral) out.push_back({n, beta});
    std::size_t pos = 0;
    while (pos < k && ++digits[pos] == e) digits[pos++] = 0;
    if (pos == k) break;
  }
  return out;
}

}  // namespace ellgen
