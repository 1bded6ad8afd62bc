#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellgen/error.hpp"
#include "ellgen/genus_engine.hpp"
#include "ellgen/polytope.hpp"
#include "ellgen/qy_series.hpp"
#include "ellgen/symprod.hpp"
#include "ellgen/toric.hpp"

namespace ellgen {

using json = nlohmann::ordered_json;

enum class output_format { json, tsv };

inline output_format parse_format(const std::string& s) {
  if (s == "json") return output_format::json;
  if (s == "tsv") return output_format::tsv;
  throw error(errc::validation_error, "unknown output format '" + s + "' (expected json or tsv)");
}

// ---------------------------------------------------------------------------
// Series serialization

namespace detail {

inline json bound_json(std::int64_t v) { return v >= unbounded ? json(nullptr) : json(v); }

inline std::int64_t bound_from_json(const json& v) { return v.is_null() ? unbounded : v.get<std::int64_t>(); }

inline std::string exponent_string(std::int64_t num, std::int64_t den) { return make_rational(num, den).get_str(); }

}  // namespace detail

/// Indented JSON in which arrays of scalars stay on one line, so a series
/// prints one term per line.
inline std::string format_json(const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' '), inner(static_cast<std::size_t>(indent) + 2, ' ');
  auto flat = [](const json& a) {
    for (const auto& x : a)
      if (x.is_structured()) return false;
    return true;
  };
  if (j.is_object()) {
    if (j.empty()) return "{}";
    std::string out = "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += inner + json(k).dump() + ": " + format_json(v, indent + 2);
    }
    return out + "\n" + pad + "}";
  }
  if (j.is_array() && !j.empty() && !flat(j)) {
    std::string out = "[\n";
    for (std::size_t i = 0; i < j.size(); ++i)
      out += inner + format_json(j[i], indent + 2) + (i + 1 < j.size() ? ",\n" : "\n");
    return out + pad + "]";
  }
  return j.dump();
}

/// Certified q-order as a rational string, or "exact".
inline std::string q_order_string(const qy_series& s) {
  return s.q_exact() ? "exact" : detail::exponent_string(s.q_max(), s.q_den());
}

inline json series_to_json(const qy_series& s) {
  json j;
  j["q_den"] = s.q_den();
  j["y_den"] = s.y_den();
  j["q_max"] = detail::bound_json(s.q_max());
  if (!s.y_exact()) j["y_max"] = s.y_max();
  j["q_order"] = q_order_string(s);
  json terms = json::array();
  auto ts = s.terms();
  std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return a.q < b.q || (a.q == b.q && a.y < b.y); });
  for (const auto& t : ts) terms.push_back(json::array({t.q, t.y, to_string(t.c)}));
  j["terms"] = std::move(terms);
  return j;
}

inline qy_series series_from_json(const json& j) {
  try {
    const std::int64_t qd = j.at("q_den").get<std::int64_t>(), yd = j.at("y_den").get<std::int64_t>();
    if (qd < 1 || yd < 1) throw error(errc::validation_error, "q_den and y_den must be positive");
    const std::int64_t qmax = detail::bound_from_json(j.value("q_max", json(nullptr)));
    const std::int64_t ymax = j.contains("y_max") ? detail::bound_from_json(j["y_max"]) : unbounded;
    std::vector<qy_series::term> terms;
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 3) throw error(errc::validation_error, "each term must be [q_num, y_num, coefficient]");
      const rational c = t[2].is_string() ? parse_rational(t[2].get<std::string>()) : rational(static_cast<long>(t[2].get<std::int64_t>()));
      terms.push_back({t[0].get<std::int64_t>(), t[1].get<std::int64_t>(), c});
    }
    return qy_series::from_terms(qd, yd, qmax, std::move(terms), ymax);
  } catch (const json::exception& e) {
    throw error(errc::validation_error, std::string("malformed series: ") + e.what());
  }
}

inline std::string series_to_tsv(const qy_series& s) {
  std::ostringstream os;
  os << "# q_den=" << s.q_den() << " y_den=" << s.y_den() << " q_order=" << q_order_string(s) << "\n";
  os << "q\ty\tcoeff\n";
  for (const auto& t : s.terms())
    os << detail::exponent_string(t.q, s.q_den()) << '\t' << detail::exponent_string(t.y, s.y_den()) << '\t'
       << to_string(t.c) << '\n';
  return os.str();
}

inline json t_series_to_json(const t_series& t) {
  json j;
  j["t_max"] = t.t_max;
  json c = json::array();
  for (const auto& s : t.coeffs) c.push_back(series_to_json(s));
  j["coeffs"] = std::move(c);
  return j;
}

inline std::string t_series_to_tsv(const t_series& t) {
  std::ostringstream os;
  os << "# t_max=" << t.t_max << "\n";
  os << "t\tq\ty\tcoeff\n";
  for (int n = 0; n <= t.t_max; ++n) {
    const qy_series& s = t[n];
    for (const auto& x : s.terms())
      os << n << '\t' << detail::exponent_string(x.q, s.q_den()) << '\t' << detail::exponent_string(x.y, s.y_den())
         << '\t' << to_string(x.c) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Files

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::parse_error, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json parse_json_text(const std::string& text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw error(errc::parse_error, path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

inline bool looks_like_json(const std::string& text) {
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '{' || c == '[';
  return false;
}

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const error& e) {
    if (e.code() == errc::parse_error) throw;
    throw error(e.code(), path + ": " + std::string(e.what()).substr(std::string(errc_name(e.code())).size() + 2));
  } catch (const json::exception& e) {
    throw error(errc::validation_error, path + ": " + e.what());
  }
}

}  // namespace detail

inline fan fan_from_json(const json& j) {
  fan f;
  f.rank = j.at("rank").get<int>();
  f.rays = j.at("rays").get<std::vector<ivec>>();
  for (const auto& c : j.at("max_cones")) {
    cone k = c.get<cone>();
    std::sort(k.begin(), k.end());
    if (std::adjacent_find(k.begin(), k.end()) != k.end()) throw error(errc::validation_error, "repeated ray in a cone");
    f.max_cones.push_back(std::move(k));
  }
  f.complete = j.value("complete", false);
  f.validate();
  return f;
}

inline json fan_to_json(const fan& f) {
  json j;
  j["rank"] = f.rank;
  j["rays"] = f.rays;
  j["max_cones"] = f.max_cones;
  j["complete"] = f.complete;
  return j;
}

/// Fan file: {rank, rays, max_cones, complete}.
inline fan parse_fan(const std::string& path) {
  const std::string text = detail::read_file(path);
  const json j = detail::parse_json_text(text, path);
  return detail::with_path(path, [&] { return fan_from_json(j); });
}

namespace detail {

// Whitespace matrix; '#' starts a comment. Returns rows with their source line numbers.
inline std::vector<std::pair<std::size_t, ivec>> read_int_rows(const std::string& text, const std::string& path) {
  std::vector<std::pair<std::size_t, ivec>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    ivec row;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos == line.size()) break;
      std::size_t end = pos;
      if (line[end] == '-' || line[end] == '+') ++end;
      while (end < line.size() && std::isdigit(static_cast<unsigned char>(line[end]))) ++end;
      if (end == pos || (end == pos + 1 && !std::isdigit(static_cast<unsigned char>(line[pos]))) ||
          (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))))
        throw error(errc::parse_error,
                    path + ":" + std::to_string(lineno) + ":" + std::to_string(pos + 1) + ": expected an integer");
      row.push_back(std::stoll(line.substr(pos, end - pos)));
      pos = end;
    }
    if (!row.empty()) rows.emplace_back(lineno, std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Vertices from PALP-style text. Without a header the rows are coordinates
/// (column j is vertex j). A leading "a b" header line is followed by a rows of
/// b entries; rows are coordinates when a < b and vertices otherwise.
inline imat vertices_from_palp(const std::string& text, const std::string& path = "<input>") {
  auto rows = detail::read_int_rows(text, path);
  if (rows.empty()) throw error(errc::parse_error, path + ":1:1: empty polytope file");
  bool transpose_rows = true;
  if (rows[0].second.size() == 2 && rows[0].second[0] > 0 && rows[0].second[1] > 0 &&
      rows.size() == static_cast<std::size_t>(rows[0].second[0]) + 1) {
    const auto a = rows[0].second[0], b = rows[0].second[1];
    bool fits = true;
    for (std::size_t i = 1; i < rows.size(); ++i) fits = fits && static_cast<std::int64_t>(rows[i].second.size()) == b;
    if (fits) {
      transpose_rows = a < b;
      rows.erase(rows.begin());
    }
  }
  const std::size_t width = rows[0].second.size();
  for (const auto& [ln, r] : rows)
    if (r.size() != width)
      throw error(errc::parse_error, path + ":" + std::to_string(ln) + ":1: row has " + std::to_string(r.size()) +
                                         " entries, expected " + std::to_string(width));
  imat m;
  for (const auto& [ln, r] : rows) m.push_back(r);
  return transpose_rows ? transpose(m) : m;
}

/// Polytope file: {vertices: [[ints]]} or a PALP-style matrix.
inline reflexive_polytope parse_polytope(const std::string& path) {
  const std::string text = detail::read_file(path);
  if (detail::looks_like_json(text)) {
    const json j = detail::parse_json_text(text, path);
    return detail::with_path(path, [&] { return make_reflexive(j.at("vertices").get<imat>()); });
  }
  const imat v = vertices_from_palp(text, path);
  return detail::with_path(path, [&] { return make_reflexive(v); });
}

/// Genus data as read from a file. A q-series file gives the full genus; a
/// chi or hodge table gives only its q^0 part (certified q-order 0).
inline genus_coefficients genus_from_json(const json& j) {
  const int d = j.at("dim").get<int>();
  if (d < 0) throw error(errc::validation_error, "dimension must be non-negative");
  if (j.contains("series")) return genus_coefficients::from_series(series_from_json(j["series"]), d);
  std::vector<rational> chi;
  if (j.contains("hodge")) {
    const auto h = j["hodge"].get<hodge_table>();
    validate_hodge(h, d);
    chi = chi_p_from_hodge(h);
  } else if (j.contains("chi")) {
    for (const auto& c : j["chi"]) chi.push_back(c.is_string() ? parse_rational(c.get<std::string>()) : rational(static_cast<long>(c.get<std::int64_t>())));
    if (chi.size() != static_cast<std::size_t>(d) + 1) throw error(errc::validation_error, "chi table must have dim+1 entries");
  } else {
    throw error(errc::validation_error, "genus file needs one of 'series', 'chi', 'hodge'");
  }
  // Ell(q=0) = sum_p chi^p (-1)^p y^(p - d/2)
  std::vector<qy_series::term> t;
  for (std::size_t p = 0; p < chi.size(); ++p)
    t.push_back({0, 2 * static_cast<std::int64_t>(p) - d, p % 2 == 0 ? chi[p] : rational(-chi[p])});
  return genus_coefficients::from_series(qy_series::from_terms(1, 2, 0, std::move(t)), d);
}

/// chi^p of a genus file (read from the q^0 part).
inline std::vector<std::int64_t> chi_from_genus(const genus_coefficients& g) {
  std::vector<std::int64_t> out;
  for (const auto& c : chi_y_from_ell(g.series.truncated(0), g.dim)) out.push_back(to_int64(c));
  return out;
}

inline genus_coefficients parse_genus(const std::string& path) {
  const std::string text = detail::read_file(path);
  const json j = detail::parse_json_text(text, path);
  return detail::with_path(path, [&] { return genus_from_json(j); });
}

inline json genus_to_json(const genus_coefficients& g) {
  json j;
  j["dim"] = g.dim;
  j["series"] = series_to_json(g.series);
  return j;
}

}  // namespace ellgen
