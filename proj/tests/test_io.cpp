#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ellgen/io.hpp"

using namespace ellgen;

namespace {

const std::string data = ELLGEN_DATA_DIR;

rational r(long n, long d = 1) { return make_rational(n, d); }

void expect_same(const qy_series& a, const qy_series& b) {
  const auto d = first_difference(a, b);
  EXPECT_FALSE(d) << "q=" << d->q << " y=" << d->y << " lhs=" << d->lhs << " rhs=" << d->rhs;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("ellgen_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

error caught(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e;
  }
  return error(errc::internal, "no error thrown");
}

}  // namespace

TEST(Fixtures, FansParse) {
  for (const std::string name : {"p1", "p2", "p1xp1", "p3", "p112", "f2"}) {
    const fan f = parse_fan(data + "/fans/" + name + ".json");
    EXPECT_TRUE(f.complete) << name;
    EXPECT_EQ(f.is_smooth(), name != "p112") << name;
  }
}

TEST(Fixtures, PolytopesParse) {
  const auto q = parse_polytope(data + "/polytopes/quartic.txt");
  EXPECT_EQ(q.dim, 3);
  EXPECT_EQ(q.vertices.size(), 4u);
  const auto p = parse_polytope(data + "/polytopes/quintic.txt");
  EXPECT_EQ(p.dim, 4);
  EXPECT_EQ(p.vertices.size(), 5u);
  EXPECT_EQ(parse_polytope(data + "/polytopes/sextic.json").vertices.size(), 6u);
  EXPECT_EQ(parse_polytope(data + "/polytopes/cubic.json").dim, 2);
  EXPECT_EQ(parse_polytope(data + "/polytopes/square.json").facet_normals.size(), 4u);
}

TEST(Fixtures, GeneraParse) {
  const auto pt = parse_genus(data + "/genera/point.json");
  EXPECT_EQ(pt.dim, 0);
  EXPECT_EQ(pt.q_order, 20);
  const auto p1 = parse_genus(data + "/genera/p1_chi.json");
  EXPECT_EQ(p1.q_order, 0);
  EXPECT_EQ(p1.series.coeff_at(0, r(-1, 2)), r(1));
  EXPECT_EQ(p1.series.coeff_at(0, r(1, 2)), r(1));
  const auto k3 = parse_genus(data + "/genera/k3_hodge.json");
  EXPECT_EQ(chi_from_genus(k3), (std::vector<std::int64_t>{2, -20, 2}));
  EXPECT_EQ(chi_from_genus(p1), (std::vector<std::int64_t>{1, -1}));
}

TEST(Palp, BothOrientations) {
  const imat expect{{1, 0}, {0, 1}, {-1, -1}};
  EXPECT_EQ(vertices_from_palp("1 0 -1\n0 1 -1\n"), expect);
  EXPECT_EQ(vertices_from_palp("2 3\n1 0 -1\n0 1 -1\n"), expect);
  EXPECT_EQ(vertices_from_palp("3 2\n1 0\n0 1\n-1 -1\n"), expect);
  EXPECT_EQ(vertices_from_palp("# comment\n1 0 -1 # trailing\n\n0 1 -1\n"), expect);
}

TEST(Palp, ErrorsCarryPosition) {
  const auto e = caught([] { vertices_from_palp("1 0 -1\n0 x -1\n", "f.txt"); });
  EXPECT_EQ(e.code(), errc::parse_error);
  EXPECT_NE(std::string(e.what()).find("f.txt:2:3"), std::string::npos) << e.what();
  const auto ragged = caught([] { vertices_from_palp("1 0 -1\n0 1\n", "g.txt"); });
  EXPECT_EQ(ragged.code(), errc::parse_error);
  EXPECT_NE(std::string(ragged.what()).find("g.txt:2:1"), std::string::npos) << ragged.what();
  EXPECT_EQ(caught([] { vertices_from_palp("1 2-3\n"); }).code(), errc::parse_error);
  EXPECT_EQ(caught([] { vertices_from_palp("# nothing\n"); }).code(), errc::parse_error);
}

TEST(Invalid, CorruptFanReportsLineAndColumn) {
  const auto e = caught([] { parse_fan(data + "/invalid/corrupt_fan.json"); });
  EXPECT_EQ(e.code(), errc::parse_error);
  EXPECT_NE(std::string(e.what()).find("corrupt_fan.json:1:"), std::string::npos) << e.what();
}

TEST(Invalid, NonIntegerGenus) {
  const auto e = caught([] { parse_genus(data + "/invalid/noninteger_genus.json"); });
  EXPECT_EQ(e.code(), errc::validation_error);
  EXPECT_NE(std::string(e.what()).find("noninteger_genus.json"), std::string::npos);
}

TEST(Invalid, NotReflexive) {
  const auto e = caught([] { parse_polytope(data + "/invalid/not_reflexive.txt"); });
  EXPECT_EQ(e.code(), errc::not_reflexive);
  EXPECT_NE(std::string(e.what()).find("distance 2"), std::string::npos);
}

TEST(Invalid, MissingFile) {
  EXPECT_EQ(caught([] { parse_fan(data + "/no/such/file.json"); }).code(), errc::parse_error);
}

TEST(Invalid, BadFanContents) {
  const auto p = temp_file("bad_ray.json", R"({"rank": 2, "rays": [[2, 0], [0, 1]], "max_cones": [[0, 1]]})");
  const auto e = caught([&] { parse_fan(p); });
  EXPECT_EQ(e.code(), errc::validation_error);
  EXPECT_NE(std::string(e.what()).find(p), std::string::npos);
  const auto q = temp_file("no_rank.json", R"({"rays": []})");
  EXPECT_EQ(caught([&] { parse_fan(q); }).code(), errc::validation_error);
}

TEST(Invalid, GenusMissingData) {
  const auto p = temp_file("empty_genus.json", R"({"dim": 1})");
  EXPECT_EQ(caught([&] { parse_genus(p); }).code(), errc::validation_error);
  const auto h = temp_file("bad_hodge.json", R"({"dim": 1, "hodge": [[1, 2], [0, 1]]})");
  EXPECT_EQ(caught([&] { parse_genus(h); }).code(), errc::inconsistent_hodge_table);
}

TEST(RoundTrip, Series) {
  const auto s = qy_series::from_terms(8, 2, 40, {{1, 1, r(1)}, {1, -1, r(-1)}, {9, 3, r(-3, 7)}});
  const auto back = series_from_json(json::parse(series_to_json(s).dump()));
  expect_same(back, s);
  EXPECT_EQ(back.q_max(), s.q_max());
  EXPECT_EQ(series_to_json(s)["q_order"], "5");
  const auto exact = qy_series::constant(r(2));
  EXPECT_TRUE(series_to_json(exact)["q_max"].is_null());
  EXPECT_TRUE(series_from_json(series_to_json(exact)).q_exact());
}

TEST(RoundTrip, FanAndGenus) {
  const fan f = parse_fan(data + "/fans/p112.json");
  const fan g = fan_from_json(fan_to_json(f));
  EXPECT_EQ(g.rays, f.rays);
  EXPECT_EQ(g.max_cones, f.max_cones);
  const auto k3 = parse_genus(data + "/genera/k3_hodge.json");
  const auto back = genus_from_json(genus_to_json(k3));
  expect_same(back.series, k3.series);
  EXPECT_EQ(back.q_order, k3.q_order);
}

TEST(Tsv, SeriesLayout) {
  const auto s = qy_series::from_terms(1, 2, 2, {{0, -1, r(1)}, {1, 1, r(-5, 2)}});
  EXPECT_EQ(series_to_tsv(s), "# q_den=1 y_den=2 q_order=2\nq\ty\tcoeff\n0\t-1/2\t1/1\n1\t1/2\t-5/2\n");
}

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("json"), output_format::json);
  EXPECT_EQ(parse_format("tsv"), output_format::tsv);
  EXPECT_THROW(parse_format("xml"), error);
}
