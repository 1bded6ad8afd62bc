#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ellgen.hpp"

#ifndef ELLGEN_DATA_DIR
#define ELLGEN_DATA_DIR "data"
#endif

using namespace ellgen;

namespace {

struct config {
  int q_order = 6;
  int n_max = 5;
  int enum_cap = 48;
  unsigned threads = 1;
  std::string format = "json";
};

void emit(const config& cfg, const json& j, const std::string& tsv) {
  if (parse_format(cfg.format) == output_format::json) {
    std::cout << format_json(j) << "\n";
  } else {
    std::cout << tsv;
  }
}

void emit_series(const config& cfg, json head, const qy_series& s) {
  std::string tsv;
  for (const auto& [k, v] : head.items())
    tsv += "# " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  head["series"] = series_to_json(s);
  emit(cfg, head, tsv + series_to_tsv(s));
}

manifold_model parse_model(const std::string& spec) {
  std::vector<manifold_model> factors;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::string f = spec.substr(start, spec.find('x', start) - start);
    if (f.rfind("hyp:", 0) == 0) {
      const auto comma = f.find(',');
      if (comma == std::string::npos) throw error(errc::validation_error, "model hyp:n,k needs two numbers");
      factors.push_back(manifold_model::hypersurface(std::stoi(f.substr(4, comma - 4)), std::stoi(f.substr(comma + 1))));
    } else if (f.size() >= 2 && (f[0] == 'p' || f[0] == 'P') && f.find_first_not_of("0123456789", 1) == std::string::npos) {
      factors.push_back(manifold_model::projective_space(std::stoi(f.substr(1))));
    } else {
      throw error(errc::validation_error, "unknown model '" + f + "' (use pN, hyp:n,k, or products like p1xp1)");
    }
    const auto x = spec.find('x', start);
    if (x == std::string::npos) break;
    start = x + 1;
  }
  return factors.size() == 1 ? factors[0] : manifold_model::product(factors);
}

qy_series named_form(const std::string& name, int N, const rational& e, const rational& chi0) {
  if (name == "theta_hat") return theta_hat(N);
  if (name == "theta_hat_sum") return theta_hat_sum_form(N);
  if (name == "eta") return eta(N);
  if (name == "eta3") return eta_power(3, N);
  if (name == "e4") return eisenstein_e4(N);
  if (name == "delta") return delta(N);
  if (name == "G") return big_g(N);
  const auto forms = weak_jacobi_basis(N);
  if (name == "phi_-2,1") return forms.phi_m2_1;
  if (name == "phi_0,1") return forms.phi_0_1;
  if (name == "phi_10,1") return forms.phi_10_1;
  if (name == "phi_12,1") return forms.phi_12_1;
  if (name == "threefold") return threefold_formula(e, N);
  if (name == "fourfold") return fourfold_formula(chi0, e, N);
  throw error(errc::validation_error, "unknown form '" + name +
                                              "' (theta_hat, theta_hat_sum, eta, eta3, e4, delta, G, phi_-2,1, "
                                              "phi_0,1, phi_10,1, phi_12,1, threefold, fourfold)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact elliptic genera: characteristic series, toric fans, reflexive polytopes, symmetric products"};
  app.require_subcommand(1);
  app.fallthrough();

  config cfg;
  app.add_option("--q-order", cfg.q_order, "q-order N of every series")->envname("Q_ORDER")->check(CLI::NonNegativeNumber);
  app.add_option("--n-max", cfg.n_max, "largest power of t (or p)")->envname("N_MAX")->check(CLI::NonNegativeNumber);
  app.add_option("--format", cfg.format, "json or tsv")->envname("FORMAT")->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--threads", cfg.threads, "worker threads")->envname("THREADS")->check(CLI::PositiveNumber);
  app.add_option("--enum-cap", cfg.enum_cap, "largest enumeration radius")->envname("ENUM_CAP")->check(CLI::Range(3, 100000));

  // forms
  auto* forms = app.add_subcommand("forms", "print a named form");
  std::string form_name;
  std::string form_e = "0", form_chi0 = "0";
  forms->add_option("name", form_name,
                    "theta_hat, theta_hat_sum, eta, eta3, e4, delta, G, phi_-2,1, phi_0,1, phi_10,1, phi_12,1, "
                    "threefold, fourfold")
      ->required();
  forms->add_option("--euler", form_e, "Euler number for threefold/fourfold");
  forms->add_option("--chi0", form_chi0, "chi(O) for fourfold");

  // genus
  auto* genus = app.add_subcommand("genus", "genus of a model manifold");
  std::string genus_series = "ell2", genus_model = "p2";
  genus->add_option("--series", genus_series, "todd, l, ahat, lso, ell2")
      ->check(CLI::IsMember({"todd", "l", "ahat", "lso", "ell2"}));
  genus->add_option("--model", genus_model, "pN, hyp:n,k, or products such as p1xp1");

  // toric-genus
  auto* toric = app.add_subcommand("toric-genus", "elliptic genus of a complete toric variety");
  std::string fan_path;
  bool lso = false;
  toric->add_option("--fan", fan_path, "fan JSON file")->required();
  toric->add_flag("--lso", lso, "y = -1 specialization sum instead of the elliptic genus");

  // hypersurface-genus, mirror-check
  auto* hyper = app.add_subcommand("hypersurface-genus", "elliptic genus of the CY hypersurface of a reflexive polytope");
  auto* mirror = app.add_subcommand("mirror-check", "compare the genera of a reflexive polytope and its dual");
  std::string poly_path, method = "auto";
  for (auto* s : {hyper, mirror}) {
    s->add_option("--polytope", poly_path, "polytope file (JSON or PALP matrix)")->required();
    s->add_option("--method", method, "auto, dual, primal, per-m")->check(CLI::IsMember({"auto", "dual", "primal", "per-m"}));
  }

  // symprod
  auto* sym = app.add_subcommand("symprod", "symmetric-product generating functions");
  std::string genus_path;
  sym->add_option("--genus", genus_path, "genus file (series, chi or hodge table)")->required();
  std::string sym_mode = "naive";
  auto* modes = sym->add_option_group("mode");
  for (const std::string m : {"dmvv", "naive", "direct", "chiy", "euler", "signature", "compare"})
    modes->add_flag_callback("--" + m, [&sym_mode, m] { sym_mode = m; }, "output mode " + m);
  modes->require_option(0, 1);

  // verify
  auto* ver = app.add_subcommand("verify", "run every identity check");
  std::string data_dir = ELLGEN_DATA_DIR;
  bool timing = false;
  ver->add_option("--data-dir", data_dir, "fixture directory");
  ver->add_flag("--timing", timing, "include runtimes (output is then not byte-stable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version print and exit 0; usage errors share exit code 2 with runtime errors
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const bool q_given = app.get_option("--q-order")->count() > 0;
    const bool n_given = app.get_option("--n-max")->count() > 0;
    parse_format(cfg.format);
    const int N = cfg.q_order;
    toric_options topt;
    topt.enum_cap = cfg.enum_cap;
    topt.threads = cfg.threads;
    hypersurface_options hopt;
    hopt.threads = cfg.threads;
    hopt.enum_cap = std::max(cfg.enum_cap, 64);
    if (method == "dual") hopt.path = hypersurface_options::method::cone_dual;
    if (method == "primal") hopt.path = hypersurface_options::method::cone_primal;
    if (method == "per-m") hopt.path = hypersurface_options::method::per_m;

    if (*forms) {
      emit_series(cfg, json{{"form", form_name}},
                  named_form(form_name, N, parse_rational(form_e), parse_rational(form_chi0)).reduced());
      return 0;
    }

    if (*genus) {
      const manifold_model m = parse_model(genus_model);
      json head{{"model", genus_model}, {"series", genus_series}, {"dim", m.dim()}};
      const int xd = std::max(m.x_degree(), 0);
      if (genus_series == "ell2") {
        emit_series(cfg, head, elliptic_genus_model(m, N));
      } else if (genus_series == "lso") {
        emit_series(cfg, head, lso_char_genus(m, N));
      } else {
        const auto q = genus_series == "todd" ? todd_series(xd) : genus_series == "l" ? l_series(xd) : ahat_series(xd);
        const rational v = genus_of_model(q, m);
        head["value"] = to_string(v);
        emit(cfg, head, "model\tseries\tvalue\n" + genus_model + "\t" + genus_series + "\t" + to_string(v) + "\n");
      }
      return 0;
    }

    if (*toric) {
      const fan f = parse_fan(fan_path);
      json head{{"fan", fan_path}};
      if (lso) {
        const auto r = ellhat_lso(f, N, topt);
        head["radius"] = r.radius;
        emit_series(cfg, head, r.series);
      } else {
        const bool smooth = f.is_smooth();
        const auto r = smooth ? ell_smooth_toric(f, N, topt) : ell_gorenstein_toric(f, N, topt);
        head["method"] = smooth ? "smooth" : "gorenstein";
        head["radius"] = r.radius;
        head["aggregate_pole_order"] = r.aggregate_pole_order;
        emit_series(cfg, head, r.series);
      }
      return 0;
    }

    if (*hyper) {
      const auto r = ell_hypersurface(parse_polytope(poly_path), N, hopt);
      emit_series(cfg, json{{"polytope", poly_path}, {"method", r.method}, {"radius", r.radius}}, r.series);
      return 0;
    }

    if (*mirror) {
      const auto r = mirror_check(parse_polytope(poly_path), N, hopt);
      json j{{"polytope", poly_path}, {"holds", r.holds}, {"sign", r.sign}, {"q_order", q_order_string(r.ell)}};
      std::string tsv = "holds\tsign\tq_order\n" + std::string(r.holds ? "true" : "false") + "\t" +
                        std::to_string(r.sign) + "\t" + q_order_string(r.ell) + "\n";
      if (r.first_difference) {
        const auto& d = *r.first_difference;
        j["first_difference"] = {{"q", d.q.get_str()}, {"y", d.y.get_str()}, {"lhs", to_string(d.lhs)}, {"rhs", to_string(d.rhs)}};
        tsv += "# first difference at q=" + d.q.get_str() + " y=" + d.y.get_str() + ": " + to_string(d.lhs) + " vs " +
               to_string(d.rhs) + "\n";
      }
      j["ell"] = series_to_json(r.ell);
      j["ell_dual"] = series_to_json(r.ell_dual);
      emit(cfg, j, tsv);
      return r.holds ? 0 : 1;
    }

    if (*sym) {
      const genus_coefficients g = parse_genus(genus_path);
      const int K = cfg.n_max;
      const int Nq = static_cast<int>(std::min<std::int64_t>(N, g.q_order));
      json head{{"genus", genus_path}, {"mode", sym_mode}, {"n_max", K}};
      t_series out;
      if (sym_mode == "dmvv") {
        out = dmvv_product(g, K, K == 0 ? Nq : static_cast<int>(std::min<std::int64_t>(N, g.q_order / K)));
      } else if (sym_mode == "naive") {
        out = sym_product_series(g, K, Nq);
      } else if (sym_mode == "direct") {
        out = sym_product_direct(g.series, K, Nq);
      } else if (sym_mode == "chiy") {
        out = chi_y_symprod(chi_from_genus(g), K);
      } else if (sym_mode == "compare") {
        const int Nd = K == 0 ? Nq : static_cast<int>(std::min<std::int64_t>(N, g.q_order / K));
        json rows = json::array();
        std::string tsv = "t\tequal\tq\ty\tnaive\tdmvv\n";
        for (const auto& c : compare_naive_dmvv(g, K, Nd)) {
          json r{{"t", c.t_power}, {"equal", c.equal}};
          tsv += std::to_string(c.t_power) + "\t" + (c.equal ? "true" : "false");
          if (c.first_difference) {
            const auto& d = *c.first_difference;
            r["first_difference"] = {{"q", d.q.get_str()}, {"y", d.y.get_str()}, {"naive", to_string(d.lhs)}, {"dmvv", to_string(d.rhs)}};
            tsv += "\t" + d.q.get_str() + "\t" + d.y.get_str() + "\t" + to_string(d.lhs) + "\t" + to_string(d.rhs);
          }
          rows.push_back(r);
          tsv += "\n";
        }
        head["q_order"] = Nd;
        head["comparison"] = rows;
        emit(cfg, head, tsv);
        return 0;
      } else {
        std::vector<std::int64_t> chi = chi_from_genus(g);
        std::int64_t e = 0, sigma = 0;
        for (std::size_t p = 0; p < chi.size(); ++p) {
          e += (p % 2 == 0 ? 1 : -1) * chi[p];
          sigma += chi[p];
        }
        out = sym_mode == "euler" ? macdonald_series(e, K) : zagier_series(sigma, e, K);
        head["euler"] = e;
        head["signature"] = sigma;
      }
      json j = head;
      j["t_series"] = t_series_to_json(out);
      emit(cfg, j, t_series_to_tsv(out));
      return 0;
    }

    if (*ver) {
      verify_config vc;
      if (q_given) vc.q_order = cfg.q_order;
      if (n_given) vc.n_max = cfg.n_max;
      vc.enum_cap = cfg.enum_cap;
      vc.threads = cfg.threads;
      vc.data_dir = data_dir;
      const auto rs = run_verify(vc);
      json arr = json::array();
      for (const auto& r : rs) arr.push_back(report_to_json(r, timing));
      emit(cfg, json{{"all_pass", all_pass(rs)}, {"reports", arr}}, reports_to_tsv(rs, timing));
      return all_pass(rs) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "ellgen: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
