#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ellgen/genus_engine.hpp"
#include "ellgen/io.hpp"
#include "ellgen/modforms.hpp"
#include "ellgen/parallel.hpp"
#include "ellgen/polytope.hpp"
#include "ellgen/symprod.hpp"
#include "ellgen/toric.hpp"

namespace ellgen {

struct verify_config {
  std::optional<int> q_order;  // caps the q-order of every check
  std::optional<int> n_max;    // caps the t-order of every check
  int enum_cap = 48;
  unsigned threads = 1;
  std::string data_dir = "data";
};

struct report_discrepancy {
  std::string where;  // which comparison
  rational q, y;
  std::optional<int> t;
  rational lhs, rhs;
};

struct report {
  int criterion = 0;  // 0 for supplementary checks
  std::string name;
  bool pass = false;
  std::optional<report_discrepancy> discrepancy;
  std::string detail;
  double runtime = 0;  // seconds; never serialized into byte-stable output
};

/// Accumulates comparisons for one check and keeps the first failure.
class checker {
 public:
  void series(const std::string& where, const qy_series& a, const qy_series& b, int order,
              std::optional<int> t = std::nullopt) {
    ++count_;
    if (failed()) return;
    for (const qy_series* s : {&a, &b})
      if (!s->q_exact() && s->q_max() < static_cast<std::int64_t>(order) * s->q_den()) {
        fail(where + ": certified only to q^" + q_order_string(*s) + ", need q^" + std::to_string(order));
        return;
      }
    if (auto d = first_difference(a, b, rational(order))) {
      disc_ = report_discrepancy{where, d->q, d->y, t, d->lhs, d->rhs};
      detail_ = where + ": coefficients differ";
    }
  }

  void scalar(const std::string& where, const rational& a, const rational& b, std::optional<int> t = std::nullopt) {
    ++count_;
    if (failed() || a == b) return;
    disc_ = report_discrepancy{where, 0, 0, t, a, b};
    detail_ = where + ": values differ";
  }

  void coefficient(const std::string& where, const discrepancy& d, std::optional<int> t = std::nullopt) {
    ++count_;
    if (failed()) return;
    disc_ = report_discrepancy{where, d.q, d.y, t, d.lhs, d.rhs};
    detail_ = where;
  }

  void truth(const std::string& where, bool ok) {
    ++count_;
    if (!failed() && !ok) fail(where);
  }

  void fail(const std::string& why) {
    if (!failed()) detail_ = why, failed_ = true;
  }

  bool failed() const { return failed_ || disc_.has_value(); }

  void into(report& r) const {
    r.pass = !failed();
    r.discrepancy = disc_;
    r.detail = failed() ? detail_ : std::to_string(count_) + (count_ == 1 ? " comparison" : " comparisons");
  }

 private:
  std::size_t count_ = 0;
  bool failed_ = false;
  std::optional<report_discrepancy> disc_;
  std::string detail_;
};

namespace detail {

struct verify_context {
  verify_config cfg;
  int q(int acceptance_order) const { return cfg.q_order ? std::min(*cfg.q_order, acceptance_order) : acceptance_order; }
  int t(int acceptance_order) const { return cfg.n_max ? std::min(*cfg.n_max, acceptance_order) : acceptance_order; }
  std::string path(const std::string& rel) const { return cfg.data_dir + "/" + rel; }
  toric_options toric() const { return {cfg.enum_cap, 1}; }
  hypersurface_options hyper() const {
    hypersurface_options o;
    o.enum_cap = std::max(cfg.enum_cap, 64);
    return o;
  }
};

struct check_spec {
  int criterion;
  std::string name;
  std::function<void(const verify_context&, checker&)> run;
};

inline std::string t_label(const std::string& what, int n) { return what + " t^" + std::to_string(n); }

inline rational chern_number(const manifold_model& m, chern_monomial mono) {
  const auto cn = chern_numbers(m);
  auto it = cn.find(mono);
  return it == cn.end() ? rational(0) : rational(it->second);
}

inline rational top_chern(const manifold_model& m) {
  chern_monomial top(static_cast<std::size_t>(m.dim()), 0);
  top.back() = 1;
  return chern_number(m, top);
}

// Partitions p(0..n) by the standard coin-change recurrence.
inline std::vector<std::int64_t> partition_numbers(int n) {
  std::vector<std::int64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int k = part; k <= n; ++k) p[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k - part)];
  return p;
}

inline qy_series jacobi_eta_cubed(int N) {
  // sum_{n>=0} (-1)^n (2n+1) q^((2n+1)^2/8)
  std::vector<qy_series::term> t;
  for (std::int64_t n = 0; (2 * n + 1) * (2 * n + 1) <= 8 * N; ++n)
    t.push_back({(2 * n + 1) * (2 * n + 1), 0, rational(static_cast<long>((n % 2 == 0 ? 1 : -1) * (2 * n + 1)))});
  return qy_series::from_terms(8, 1, 8 * static_cast<std::int64_t>(N), std::move(t));
}

inline genus_coefficients random_genus(std::mt19937_64& rng, int N) {
  const int d = std::uniform_int_distribution<int>(0, 3)(rng);
  const int support = std::uniform_int_distribution<int>(1, 6)(rng);
  std::vector<qy_series::term> t;
  for (int i = 0; i < support; ++i) {
    const int m = std::uniform_int_distribution<int>(0, N)(rng);
    const int half_range = d + 2 * m;  // |2l| <= d + 2m
    int two_l = std::uniform_int_distribution<int>(-half_range, half_range)(rng);
    if (((two_l - d) % 2 + 2) % 2 != 0) two_l += two_l < half_range ? 1 : -1;
    const int c = std::uniform_int_distribution<int>(-4, 4)(rng);
    t.push_back({m, two_l, rational(c == 0 ? 1 : c)});
  }
  return genus_coefficients::from_series(qy_series::from_terms(1, 2, N, std::move(t)), d);
}

inline std::vector<check_spec> verify_checks() {
  std::vector<check_spec> v;

  v.push_back({1, "todd_polynomials", [](const verify_context&, checker& c) {
    const auto ms = sequence_from_series(todd_series(3), 3);
    auto poly = [](std::initializer_list<std::pair<chern_monomial, rational>> xs) {
      chern_poly<rational> p;
      for (const auto& [m, r] : xs) p[m] = r;
      return p;
    };
    c.truth("T1 = c1/2", ms[1] == poly({{{1, 0, 0}, rational(1, 2)}}));
    c.truth("T2 = (c1^2 + c2)/12", ms[2] == poly({{{2, 0, 0}, rational(1, 12)}, {{0, 1, 0}, rational(1, 12)}}));
    c.truth("T3 = c1 c2/24", ms[3] == poly({{{1, 1, 0}, rational(1, 24)}}));
  }});

  v.push_back({2, "p2_q_series_identity", [](const verify_context& x, checker& c) {
    const int N = x.q(30);
    const auto r = verify_p2_identity(N);
    c.series("lhs vs sum q^2r sigma(r)", r.lhs, r.rhs, N);
  }});

  v.push_back({3, "lso_p2_equals_delta", [](const verify_context& x, checker& c) {
    const int N = x.q(10);
    const auto r = ellhat_lso(parse_fan(x.path("fans/p2.json")), N, x.toric());
    c.series("ellhat_lso(P2) vs delta", r.series, delta_series(N), N);
  }});

  v.push_back({0, "lso_p2_equals_minus_two_delta", [](const verify_context& x, checker& c) {
    const int N = x.q(10);
    const auto r = ellhat_lso(parse_fan(x.path("fans/p2.json")), N, x.toric());
    c.series("ellhat_lso(P2) vs -2 delta", r.series, delta_series(N).scaled(rational(-2)), N);
  }});

  v.push_back({0, "lso_char_genus_p2_equals_delta", [](const verify_context& x, checker& c) {
    const int N = x.q(10);
    c.series("Chern-root LSO genus(P2) vs delta", lso_char_genus(manifold_model::projective_space(2), N),
             delta_series(N), N);
  }});

  v.push_back({0, "lso_toric_vs_specialized_elliptic_genus", [](const verify_context& x, checker& c) {
    const int N = x.q(6);
    const auto p1 = manifold_model::projective_space(1);
    const std::vector<std::pair<std::string, manifold_model>> cases{
        {"p2", manifold_model::projective_space(2)}, {"p1xp1", manifold_model::product({p1, p1})}};
    for (const auto& [name, model] : cases)
      c.series(name, ellhat_lso(parse_fan(x.path("fans/" + name + ".json")), N, x.toric()).series,
               lso_genus_model(model, N), N);
  }});

  v.push_back({4, "smooth_toric_vs_chern_roots", [](const verify_context& x, checker& c) {
    const int N = x.q(6);
    const std::vector<std::pair<std::string, manifold_model>> cases{
        {"p1", manifold_model::projective_space(1)},
        {"p2", manifold_model::projective_space(2)},
        {"p1xp1", manifold_model::product({manifold_model::projective_space(1), manifold_model::projective_space(1)})},
        {"p3", manifold_model::projective_space(3)}};
    for (const auto& [name, model] : cases) {
      const auto r = ell_smooth_toric(parse_fan(x.path("fans/" + name + ".json")), N, x.toric());
      c.series(name, r.series, elliptic_genus_model(model, N), N);
    }
  }});

  v.push_back({5, "toric_pole_clearance_and_stabilization", [](const verify_context& x, checker& c) {
    const int N = x.q(4);
    for (const std::string name : {"p1", "p2", "p1xp1", "p3", "p112", "f2"}) {
      const fan f = parse_fan(x.path("fans/" + name + ".json"));
      const bool gor = !f.is_smooth();
      const auto r = toric_lattice_sum(f, N, gor, x.toric());
      c.truth(name + ": aggregate pole order <= rank", r.aggregate_pole_order <= f.rank);
      c.truth(name + ": pole cleared", r.final_pole_order == 0);
      const auto grown = toric_lattice_sum(f, N, gor, x.toric(), r.radius + 1);
      c.series(name + ": one more shell", grown.series, r.series, N);
    }
    const fan p2 = parse_fan(x.path("fans/p2.json"));
    const auto l = ellhat_lso(p2, N, x.toric());
    c.series("p2 lso: one more shell", ellhat_lso(p2, N, x.toric(), l.radius + 1).series, l.series, N);
  }});

  v.push_back({0, "gorenstein_p112_equals_crepant_f2", [](const verify_context& x, checker& c) {
    const int N = x.q(4);
    const auto a = ell_gorenstein_toric(parse_fan(x.path("fans/p112.json")), N, x.toric());
    const auto b = ell_smooth_toric(parse_fan(x.path("fans/f2.json")), N, x.toric());
    c.series("P(1,1,2) vs F2", a.series, b.series, N);
  }});

  v.push_back({6, "hypersurfaces_vs_adjunction", [](const verify_context& x, checker& c) {
    const int N4 = x.q(4), N3 = x.q(3);
    const auto cubic = ell_hypersurface(parse_polytope(x.path("polytopes/cubic.json")), N4, x.hyper());
    c.series("cubic vs 0", cubic.series, qy_series::zero(1, 1, N4), N4);
    const std::vector<std::tuple<std::string, int, int>> cases{
        {"quartic.txt", 3, 4}, {"quintic.txt", 4, 5}, {"sextic.json", 5, 6}};
    for (const auto& [file, n, k] : cases) {
      const auto r = ell_hypersurface(parse_polytope(x.path("polytopes/" + file)), N3, x.hyper());
      c.series(file, r.series, elliptic_genus_model(manifold_model::hypersurface(n, k), N3), N3);
    }
  }});

  v.push_back({7, "quintic_threefold_formula", [](const verify_context& x, checker& c) {
    const int N = x.q(4);
    const rational e = top_chern(manifold_model::hypersurface(4, 5));
    c.scalar("e(quintic)", e, rational(-200));
    const auto r = ell_hypersurface(parse_polytope(x.path("polytopes/quintic.txt")), N, x.hyper());
    c.series("quintic vs threefold formula", r.series, threefold_formula(e, N), N);
  }});

  v.push_back({8, "sextic_fourfold_formula", [](const verify_context& x, checker& c) {
    const int N = x.q(3);
    const rational e = top_chern(manifold_model::hypersurface(5, 6));
    const auto r = ell_hypersurface(parse_polytope(x.path("polytopes/sextic.json")), N, x.hyper());
    c.series("sextic vs fourfold formula", r.series, fourfold_formula(2, e, N), N);
  }});

  v.push_back({9, "mirror_symmetry", [](const verify_context& x, checker& c) {
    const int N = x.q(3);
    for (const auto& [file, sign] : std::vector<std::pair<std::string, int>>{{"quintic.txt", -1}, {"quartic.txt", 1}}) {
      const auto r = mirror_check(parse_polytope(x.path("polytopes/" + file)), N, x.hyper());
      c.scalar(file + " sign", r.sign, sign);
      c.series(file + " vs dual", r.ell, r.ell_dual.scaled(rational(sign)), N);
    }
    const auto sq = mirror_check(parse_polytope(x.path("polytopes/square.json")), x.q(1), x.hyper());
    c.series("square vs 0", sq.ell, qy_series::zero(1, 1, x.q(1)), x.q(1));
    c.series("square dual vs 0", sq.ell_dual, qy_series::zero(1, 1, x.q(1)), x.q(1));
  }});

  v.push_back({10, "weak_jacobi_properties", [](const verify_context& x, checker& c) {
    const int N = x.q(4);
    const auto quintic = ell_hypersurface(parse_polytope(x.path("polytopes/quintic.txt")), N, x.hyper()).series;
    const auto k3 = ell_hypersurface(parse_polytope(x.path("polytopes/quartic.txt")), N, x.hyper()).series;
    for (const auto& [name, s, d] : std::vector<std::tuple<std::string, qy_series, int>>{{"quintic", quintic, 3}, {"K3", k3, 2}}) {
      const auto r = jacobi_property_check(s, d, N);
      if (r.first_failure) c.coefficient(name + ": " + r.failed, *r.first_failure);
      c.truth(name + " passes", r.holds);
    }
    const auto p2 = ell_smooth_toric(parse_fan(x.path("fans/p2.json")), std::max(N, 1), x.toric()).series;
    c.truth("P2 fails (negative control)", !jacobi_property_check(p2, 2, std::max(N, 1)).holds);
  }});

  v.push_back({11, "naive_product_vs_partition_sum", [](const verify_context& x, checker& c) {
    const int T = x.t(5), N = x.q(3);
    auto compare = [&](const std::string& name, const genus_coefficients& g) {
      const auto a = sym_product_series(g, T, N);
      const auto b = sym_product_direct(g.series, T, N);
      for (int n = 0; n <= T; ++n) c.series(t_label(name, n), a[n], b[n], N, n);
    };
    std::mt19937_64 rng(20240531);
    for (int i = 0; i < 12; ++i) compare("random#" + std::to_string(i), random_genus(rng, N));
    compare("P1", genus_coefficients::from_series(elliptic_genus_model(manifold_model::projective_space(1), N), 1));
    compare("K3", genus_coefficients::from_series(
                      ell_hypersurface(parse_polytope(x.path("polytopes/quartic.txt")), N, x.hyper()).series, 2));
    compare("quintic", genus_coefficients::from_series(
                           ell_hypersurface(parse_polytope(x.path("polytopes/quintic.txt")), N, x.hyper()).series, 3));
  }});

  v.push_back({12, "macdonald_zagier_specializations", [](const verify_context& x, checker& c) {
    const int T = x.t(10);
    const auto mac = macdonald_series(2, T);
    for (int n = 0; n <= T; ++n) c.scalar(t_label("(1-t)^-2", n), mac[n].coeff(0, 0), n + 1, n);
    const auto zag = zagier_series(1, 3, T);
    for (int n = 0; n <= T; ++n) {
      // (1+t)^-1 (1-t)^-2 = sum_n t^n sum_k (-1)^k (n-k+1)
      std::int64_t s = 0;
      for (int k = 0; k <= n; ++k) s += (k % 2 == 0 ? 1 : -1) * (n - k + 1);
      c.scalar(t_label("zagier(1,3)", n), zag[n].coeff(0, 0), rational(static_cast<long>(s)), n);
    }
    const std::vector<std::pair<std::string, manifold_model>> spaces{
        {"P1", manifold_model::projective_space(1)}, {"P2", manifold_model::projective_space(2)}};
    for (const auto& [name, m] : spaces) {
      const int d = m.dim();
      const auto ell = elliptic_genus_model(m, 0);
      const auto tower = chi_y_tower(sym_product_series(genus_coefficients::from_series(ell, d), T, 0), d);
      const auto chi = chi_y_from_ell(ell, d);
      std::vector<std::int64_t> chi_i;
      for (const auto& r : chi) chi_i.push_back(to_int64(r));
      const auto cy = chi_y_symprod(chi_i, T);
      const rational e = eval_poly(chi, -1), sigma = eval_poly(chi, 1);
      const auto me = macdonald_series(to_int64(e), T);
      const auto zs = zagier_series(to_int64(sigma), to_int64(e), T);
      for (int n = 0; n <= T; ++n) {
        std::vector<qy_series::term> terms;
        for (std::size_t p = 0; p < tower[static_cast<std::size_t>(n)].size(); ++p)
          terms.push_back({0, static_cast<std::int64_t>(p), tower[static_cast<std::size_t>(n)][p]});
        c.series(t_label(name + " chi_y bridge vs chi_y product", n), qy_series::from_terms(1, 1, 0, terms),
                 cy[n].truncated(0), 0, n);
        c.scalar(t_label(name + " euler", n), eval_poly(tower[static_cast<std::size_t>(n)], -1), me[n].coeff(0, 0), n);
        c.scalar(t_label(name + " signature", n), eval_poly(tower[static_cast<std::size_t>(n)], 1), zs[n].coeff(0, 0), n);
      }
    }
  }});

  v.push_back({13, "dmvv_product", [](const verify_context& x, checker& c) {
    const int T = x.t(10), N = x.q(3);
    const auto point = dmvv_product(genus_coefficients::from_series(qy_series::constant(1, T), 0), T, 1);
    const auto p = partition_numbers(T);
    for (int n = 0; n <= T; ++n)
      c.series(t_label("point", n), point[n], qy_series::constant(rational(static_cast<long>(p[static_cast<std::size_t>(n)])), 1), 1, n);
    for (const auto& [file, d] : std::vector<std::pair<std::string, int>>{{"quartic.txt", 2}, {"quintic.txt", 3}}) {
      const auto ell = ell_hypersurface(parse_polytope(x.path("polytopes/" + file)), N, x.hyper()).series;
      const auto dm = dmvv_product(genus_coefficients::from_series(ell, d), 1, N);
      c.series(file + " p^1", dm[1], ell, N, 1);
    }
  }});

  v.push_back({14, "modular_form_invariants", [](const verify_context& x, checker& c) {
    const int N = x.q(20);
    const auto th = theta_hat(N);
    c.series("triple product vs theta sum", th, theta_hat_sum_form(N), N);
    c.series("theta_hat'(0) vs eta^3", theta_hat_x_linear(N), eta_power(3, N), N);
    c.series("eta^3 vs Jacobi sum", eta_power(3, N), jacobi_eta_cubed(N), N);
    if (auto f = elliptic_law_failure(th, rational(1, 2), -1)) c.coefficient("theta_hat elliptic law", *f);
    if (auto f = y_inversion_failure(th, -1)) c.coefficient("theta_hat y-inversion", *f);
    const auto forms = weak_jacobi_basis(N);
    for (const auto& [name, phi] : std::vector<std::pair<std::string, qy_series>>{
             {"phi_-2,1", forms.phi_m2_1}, {"phi_0,1", forms.phi_0_1}, {"phi_10,1", forms.phi_10_1}, {"phi_12,1", forms.phi_12_1}}) {
      if (auto f = elliptic_law_failure(phi, 1, 1)) c.coefficient(name + " elliptic law", *f);
      if (auto f = y_inversion_failure(phi, 1)) c.coefficient(name + " y-inversion", *f);
      c.truth(name + " checked", true);
    }
  }});

  return v;
}

}  // namespace detail

/// Runs every check; errors become failing reports. Output order is fixed.
inline std::vector<report> run_verify(const verify_config& cfg) {
  const detail::verify_context ctx{cfg};
  const auto checks = detail::verify_checks();
  return parallel_map(checks.size(), cfg.threads, [&](std::size_t i) {
    report r;
    r.criterion = checks[i].criterion;
    r.name = checks[i].name;
    const auto start = std::chrono::steady_clock::now();
    try {
      checker c;
      checks[i].run(ctx, c);
      c.into(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  });
}

inline bool all_pass(const std::vector<report>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

inline json report_to_json(const report& r, bool with_runtime = false) {
  json j;
  j["criterion"] = r.criterion;
  j["name"] = r.name;
  j["status"] = r.pass ? "pass" : "fail";
  if (r.discrepancy) {
    const auto& d = *r.discrepancy;
    json dj;
    dj["where"] = d.where;
    dj["q"] = d.q.get_str();
    dj["y"] = d.y.get_str();
    if (d.t) dj["t"] = *d.t;
    dj["lhs"] = to_string(d.lhs);
    dj["rhs"] = to_string(d.rhs);
    j["discrepancy"] = dj;
  } else {
    j["discrepancy"] = nullptr;
  }
  j["detail"] = r.detail;
  if (with_runtime) j["runtime_s"] = r.runtime;
  return j;
}

inline std::string reports_to_tsv(const std::vector<report>& rs, bool with_runtime = false) {
  std::ostringstream os;
  os << "criterion\tname\tstatus\tq\ty\tt\tlhs\trhs\tdetail" << (with_runtime ? "\truntime_s" : "") << "\n";
  for (const auto& r : rs) {
    os << r.criterion << '\t' << r.name << '\t' << (r.pass ? "pass" : "fail") << '\t';
    if (r.discrepancy) {
      const auto& d = *r.discrepancy;
      os << d.q.get_str() << '\t' << d.y.get_str() << '\t' << (d.t ? std::to_string(*d.t) : "") << '\t'
         << to_string(d.lhs) << '\t' << to_string(d.rhs);
    } else {
      os << "\t\t\t\t";
    }
    os << '\t' << r.detail;
    if (with_runtime) os << '\t' << r.runtime;
    os << '\n';
  }
  return os.str();
}

}  // namespace ellgen
